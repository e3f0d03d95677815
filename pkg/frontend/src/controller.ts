// Exhibit state machine. Holds only what the service reported last; tube
// levels, counts, and Bell numbers are never accumulated or derived on the
// client, so clearing local state and re-reading the session reproduces the
// identical display. Every action round-trips (no optimistic updates).

import {
  BellDoc,
  CountsDoc,
  ExhibitApi,
  Misses,
  PartitionDoc,
  ServiceError,
  SessionOptions,
  Setting,
  TossResult,
  Tubes,
} from "./api.js";

export interface ViewModel {
  sessionId: string | null;
  setting: Setting | null;
  mode: "external_act" | "internal_count";
  tubes: Tubes;
  misses: Misses;
  lastToss: TossResult["toss"] | null;
  partition: PartitionDoc | null;
  counts: CountsDoc | null;
  bell: BellDoc | null;
  busy: boolean;
  error: string | null;
}

export type Listener = (vm: ViewModel) => void;

const EMPTY: ViewModel = {
  sessionId: null,
  setting: null,
  mode: "external_act",
  tubes: {},
  misses: {},
  lastToss: null,
  partition: null,
  counts: null,
  bell: null,
  busy: false,
  error: null,
};

export class ExhibitController {
  private vm: ViewModel = { ...EMPTY };
  private listeners: Listener[] = [];

  constructor(private readonly api: ExhibitApi) {}

  get view(): ViewModel {
    return this.vm;
  }

  get canToss(): boolean {
    return this.vm.sessionId !== null && this.vm.setting !== null && !this.vm.busy;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
    listener(this.vm);
  }

  private update(patch: Partial<ViewModel>): void {
    this.vm = { ...this.vm, ...patch };
    for (const listener of this.listeners) {
      listener(this.vm);
    }
  }

  private async guard<T>(action: () => Promise<T>): Promise<T | null> {
    this.update({ busy: true, error: null });
    try {
      return await action();
    } catch (err) {
      const message =
        err instanceof ServiceError ? err.message : String(err);
      this.update({ error: message });
      return null;
    } finally {
      this.update({ busy: false });
    }
  }

  async start(options: SessionOptions = {}): Promise<void> {
    await this.guard(async () => {
      const session = await this.api.createSession(options);
      this.update({
        ...EMPTY,
        sessionId: session.id,
        mode: session.mode,
        tubes: session.tubes,
        misses: session.misses,
      });
      this.update({ bell: await this.api.bell(session.id) });
    });
  }

  /** Attach to an existing session, rebuilding the display purely from
   * service state. */
  async attach(sessionId: string): Promise<void> {
    await this.guard(async () => {
      const session = await this.api.getSession(sessionId);
      this.update({
        ...EMPTY,
        sessionId: session.id,
        setting: session.setting,
        mode: session.mode,
        tubes: session.tubes,
        misses: session.misses,
      });
      if (session.setting) {
        this.update({
          partition: await this.api.partition(session.id),
          counts: await this.api.counts(session.id),
        });
      }
      this.update({ bell: await this.api.bell(session.id) });
    });
  }

  async flipCoins(coinAlice: 0 | 1, coinBob: 0 | 1): Promise<void> {
    const id = this.vm.sessionId;
    if (id === null) {
      this.update({ error: "no session" });
      return;
    }
    await this.guard(async () => {
      const { setting } = await this.api.setAngles(id, coinAlice, coinBob);
      this.update({ setting, lastToss: null });
      this.update({
        partition: await this.api.partition(id),
        counts: await this.api.counts(id),
      });
    });
  }

  async toss(): Promise<void> {
    const id = this.vm.sessionId;
    if (id === null) {
      this.update({ error: "no session" });
      return;
    }
    await this.guard(async () => {
      const result = await this.api.toss(id);
      this.update({
        lastToss: result.toss,
        tubes: result.tubes,
        misses: result.misses,
      });
      this.update({ bell: await this.api.bell(id) });
    });
  }

  async setMode(mode: "external_act" | "internal_count"): Promise<void> {
    const id = this.vm.sessionId;
    if (id === null) {
      this.update({ error: "no session" });
      return;
    }
    await this.guard(async () => {
      const session = await this.api.setMode(id, mode);
      this.update({ mode: session.mode });
      if (mode === "internal_count" && session.setting) {
        this.update({ counts: await this.api.counts(id) });
      }
    });
  }

  async reset(): Promise<void> {
    const id = this.vm.sessionId;
    if (id === null) {
      return;
    }
    await this.guard(async () => {
      const session = await this.api.reset(id);
      this.update({
        ...EMPTY,
        sessionId: session.id,
        mode: session.mode,
        tubes: session.tubes,
        misses: session.misses,
      });
    });
  }

  /** Tube gauge view for one relative-angle index, straight off the last
   * service report. */
  tubeFor(d: number): { E: number; U: number; total: number } {
    const levels = this.vm.tubes[String(d)];
    if (!levels) {
      return { E: 0, U: 0, total: 0 };
    }
    return { E: levels.E, U: levels.U, total: levels.total };
  }

  /** The classical-bound Equal fraction at index d (the straight-line value
   * the tube is compared against), as reported by the service bounds. */
  classicalBoundE(d: number): number | null {
    const bounds = this.vm.bell?.bounds?.classical_C;
    if (!bounds) {
      return null;
    }
    // terms are U at d=1, E at d=2, U at d=3
    if (d === 1) return 1 - bounds.terms.t1_U_d1;
    if (d === 2) return bounds.terms.t2_E_d2;
    if (d === 3) return 1 - bounds.terms.t3_U_d3;
    return null;
  }
}
