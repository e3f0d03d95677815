import { ExhibitApi } from "./api.js";
import { ExhibitController } from "./controller.js";
import { drawPartition, renderStatus, renderTubes, renderWorldCount } from "./render.js";

const SERVICE = (window as unknown as { EPR_SERVICE?: string }).EPR_SERVICE
  ?? "http://127.0.0.1:8787";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const api = new ExhibitApi(SERVICE);
  const controller = new ExhibitController(api);

  const canvas = el<HTMLCanvasElement>("wheel");
  const tubes = el<HTMLDivElement>("tubes");
  const status = el<HTMLDivElement>("status");
  const worlds = el<HTMLDivElement>("worlds");
  const tossButton = el<HTMLButtonElement>("toss");
  const coinA = el<HTMLButtonElement>("coin-alice");
  const coinB = el<HTMLButtonElement>("coin-bob");
  const modeToggle = el<HTMLButtonElement>("mode");
  const resetButton = el<HTMLButtonElement>("reset");

  let pendingAlice: 0 | 1 | null = null;

  controller.subscribe((vm) => {
    drawPartition(canvas, vm.partition, vm.lastToss?.pointer ?? null);
    renderTubes(tubes, vm, (d) => controller.classicalBoundE(d));
    renderStatus(status, vm);
    renderWorldCount(worlds, vm);
    tossButton.disabled = !controller.canToss;
    modeToggle.textContent =
      vm.mode === "external_act" ? "switch to world-count view" : "switch to ball-toss view";
  });

  const flip = (): 0 | 1 => (Math.random() < 0.5 ? 0 : 1);

  coinA.addEventListener("click", () => {
    pendingAlice = flip();
    coinA.textContent = `Alice's coin: ${pendingAlice ? "tails" : "heads"}`;
  });
  coinB.addEventListener("click", async () => {
    const bob = flip();
    coinB.textContent = `Bob's coin: ${bob ? "tails" : "heads"}`;
    if (pendingAlice === null) {
      pendingAlice = flip();
      coinA.textContent = `Alice's coin: ${pendingAlice ? "tails" : "heads"}`;
    }
    await controller.flipCoins(pendingAlice, bob);
    pendingAlice = null;
  });
  tossButton.addEventListener("click", () => void controller.toss());
  modeToggle.addEventListener("click", () =>
    void controller.setMode(
      controller.view.mode === "external_act" ? "internal_count" : "external_act",
    ));
  resetButton.addEventListener("click", () => void controller.reset());

  await controller.start({ kind: "diamonds" });
}

void boot();
