// Canvas and DOM rendering. Pure layout: everything drawn comes verbatim
// from the view model (which in turn holds only service responses).

import { PartitionDoc, Pointer } from "./api.js";
import { ViewModel } from "./controller.js";

const LABEL_COLORS: Record<string, string> = {
  "00": "#3b6bc9",
  "01": "#6f6f6f",
  "10": "#c98a3b",
  "11": "#00b200",
};

export function drawPartition(
  canvas: HTMLCanvasElement,
  partition: PartitionDoc | null,
  pointer: Pointer | null,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const cx = canvas.width / 2;
  const cy = canvas.height / 2;
  if (!partition) {
    ctx.fillStyle = "#888";
    ctx.textAlign = "center";
    ctx.fillText("flip the coins to set the wheels", cx, cy);
    return;
  }
  const radius = partition.disk_radius;
  const scale = (Math.min(canvas.width, canvas.height) / 2 - 10) / radius;
  const toX = (x: number) => cx + x * scale;
  const toY = (y: number) => cy - y * scale;

  for (const region of partition.regions) {
    ctx.fillStyle = LABEL_COLORS[region.label] ?? "#ccc";
    if (region.arc) {
      const [a0, a1] = region.arc;
      ctx.beginPath();
      ctx.moveTo(cx, cy);
      // canvas arcs run clockwise in screen space; negate angles
      ctx.arc(cx, cy, radius * scale, -a0, -a1, true);
      ctx.closePath();
      ctx.globalAlpha = 0.85;
      ctx.fill();
      ctx.globalAlpha = 1;
    } else if (region.vertices && region.vertices.length >= 3) {
      ctx.beginPath();
      ctx.moveTo(toX(region.vertices[0][0]), toY(region.vertices[0][1]));
      for (const [x, y] of region.vertices.slice(1)) {
        ctx.lineTo(toX(x), toY(y));
      }
      ctx.closePath();
      ctx.fill();
      if (region.partial) {
        ctx.strokeStyle = "#d04040";
        ctx.lineWidth = 0.6;
        ctx.stroke();
      }
    }
  }
  ctx.beginPath();
  ctx.arc(cx, cy, radius * scale, 0, 2 * Math.PI);
  ctx.strokeStyle = "#222";
  ctx.lineWidth = 1.2;
  ctx.stroke();

  if (pointer) {
    ctx.fillStyle = "red";
    ctx.strokeStyle = "red";
    if (pointer.mode === "point" && pointer.x !== undefined && pointer.y !== undefined) {
      ctx.beginPath();
      ctx.arc(toX(pointer.x), toY(pointer.y), 5, 0, 2 * Math.PI);
      ctx.fill();
    } else if (pointer.mode === "angle" && pointer.angle !== undefined) {
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo(cx, cy);
      ctx.lineTo(
        toX(radius * Math.cos(pointer.angle)),
        toY(radius * Math.sin(pointer.angle)),
      );
      ctx.stroke();
    }
  }
}

export function renderTubes(container: HTMLElement, vm: ViewModel,
                            boundE: (d: number) => number | null): void {
  container.innerHTML = "";
  for (const d of [0, 1, 2, 3]) {
    const levels = vm.tubes[String(d)];
    const total = levels?.total ?? 0;
    const e = levels?.E ?? 0;
    const frac = total > 0 ? e / total : 0;
    const cell = document.createElement("div");
    cell.className = "tube";
    const gauge = document.createElement("div");
    gauge.className = "gauge";
    const fill = document.createElement("div");
    fill.className = "fill";
    fill.style.height = `${Math.round(frac * 100)}%`;
    gauge.appendChild(fill);
    const bound = boundE(d);
    if (bound !== null) {
      const line = document.createElement("div");
      line.className = "bound";
      line.style.bottom = `${Math.round(bound * 100)}%`;
      gauge.appendChild(line);
    }
    const caption = document.createElement("div");
    caption.textContent = `d=${d}: ${e}/${total} Equal`;
    cell.appendChild(gauge);
    cell.appendChild(caption);
    container.appendChild(cell);
  }
}

export function renderStatus(el: HTMLElement, vm: ViewModel): void {
  if (vm.error) {
    el.textContent = `service error: ${vm.error}`;
    el.className = "status error";
    return;
  }
  el.className = "status";
  if (!vm.sessionId) {
    el.textContent = "no session";
  } else if (!vm.setting) {
    el.textContent = `session ${vm.sessionId}: flip both coins to set the wheels`;
  } else {
    const s = vm.setting;
    el.textContent =
      `session ${vm.sessionId}: a=${s.a}, b=${s.b}, d=${s.d}` +
      (vm.lastToss
        ? ` | last ball: ${vm.lastToss.miss ? "MISS" : vm.lastToss.outcome}`
        : "");
  }
}

export function renderWorldCount(el: HTMLElement, vm: ViewModel): void {
  if (vm.mode !== "internal_count" || !vm.counts) {
    el.textContent = "";
    return;
  }
  const c = vm.counts;
  const pr = c.pr_E === null ? "undefined" : String(c.pr_E);
  el.textContent =
    `worlds: ${c.n_E} Equal vs ${c.n_U} Unequal | internal Pr(E) = ${pr}` +
    ` (quantum ${c.model_p_E.quantum_P.toFixed(6)},` +
    ` classical ${c.model_p_E.classical_C.toFixed(6)})`;
}
