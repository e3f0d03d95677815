// Typed client for the exhibit service. Every number displayed by the UI
// originates from one of these calls; the client computes no physics.

export interface Setting {
  a: number;
  b: number;
  alpha: number;
  beta: number;
  delta: number;
  d: number;
}

export interface TubeLevels {
  E: number;
  U: number;
  total: number;
  "00": number;
  "01": number;
  "10": number;
  "11": number;
}

export type Tubes = Record<string, TubeLevels>;
export type Misses = Record<string, number>;

export interface SessionDoc {
  schema: number;
  id: string;
  seed: number;
  kind: "arcs" | "diamonds" | "grid";
  s: number;
  grid_m_total: number;
  mode: "external_act" | "internal_count";
  setting: Setting | null;
  tosses: number;
  tubes: Tubes;
  misses: Misses;
}

export interface Pointer {
  mode: "angle" | "point";
  angle?: number;
  x?: number;
  y?: number;
}

export interface TossResult {
  schema: number;
  toss: {
    index: number;
    d: number;
    pointer: Pointer;
    outcome: string | null;
    miss: boolean;
  };
  tubes: Tubes;
  misses: Misses;
}

export interface RegionDoc {
  label: string;
  klass: "E" | "U";
  measure: number;
  partial: boolean;
  arc?: [number, number];
  vertices?: [number, number][];
}

export interface PartitionDoc {
  schema: number;
  kind: string;
  delta: number;
  disk_radius: number;
  normalization: number;
  counts?: Record<string, number>;
  regions: RegionDoc[];
}

export interface CountsDoc {
  schema: number;
  kind: string;
  d: number;
  delta: number;
  n_E: number;
  n_U: number;
  exact_counts: boolean;
  pr_E: number | null;
  pr_U: number | null;
  model_p_E: Record<string, number>;
}

export interface BellTermsDoc {
  schema: number;
  terms: { t1_U_d1: number; t2_E_d2: number; t3_U_d3: number };
  margin: number;
  verdict: string;
  tolerance: number;
  model?: string;
}

export interface BellDoc {
  schema: number;
  empirical: BellTermsDoc | null;
  missing_d: number[];
  bounds: Record<string, BellTermsDoc>;
}

export interface AuditDoc {
  schema: number;
  tubes: Tubes;
  recomputed: Tubes;
  misses: Misses;
  recomputed_misses: Misses;
  consistent: boolean;
}

export class ServiceError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

async function request<T>(
  base: string,
  method: "GET" | "POST",
  path: string,
  body?: unknown,
): Promise<T> {
  const init: RequestInit = { method };
  if (body !== undefined) {
    init.body = JSON.stringify(body);
    init.headers = { "Content-Type": "application/json" };
  }
  const resp = await fetch(base + path, init);
  const doc = (await resp.json()) as T & { error?: string };
  if (!resp.ok) {
    throw new ServiceError(resp.status, doc.error ?? `HTTP ${resp.status}`);
  }
  return doc;
}

export interface SessionOptions {
  seed?: number;
  kind?: "arcs" | "diamonds" | "grid";
  s?: number;
  grid_m_total?: number;
  mode?: "external_act" | "internal_count";
}

export class ExhibitApi {
  constructor(readonly base: string) {}

  health(): Promise<{ ok: boolean }> {
    return request(this.base, "GET", "/health");
  }

  createSession(options: SessionOptions = {}): Promise<SessionDoc> {
    return request(this.base, "POST", "/sessions", options);
  }

  getSession(id: string): Promise<SessionDoc> {
    return request(this.base, "GET", `/sessions/${id}`);
  }

  reset(id: string): Promise<SessionDoc> {
    return request(this.base, "POST", `/sessions/${id}/reset`, {});
  }

  setAngles(
    id: string,
    coinAlice: 0 | 1,
    coinBob: 0 | 1,
  ): Promise<{ setting: Setting }> {
    return request(this.base, "POST", `/sessions/${id}/angles`, {
      coin_alice: coinAlice,
      coin_bob: coinBob,
    });
  }

  toss(id: string): Promise<TossResult> {
    return request(this.base, "POST", `/sessions/${id}/toss`, {});
  }

  setMode(
    id: string,
    mode: "external_act" | "internal_count",
  ): Promise<SessionDoc> {
    return request(this.base, "POST", `/sessions/${id}/mode`, { mode });
  }

  partition(id: string): Promise<PartitionDoc> {
    return request(this.base, "GET", `/sessions/${id}/partition`);
  }

  counts(id: string): Promise<CountsDoc> {
    return request(this.base, "GET", `/sessions/${id}/counts`);
  }

  bell(id: string): Promise<BellDoc> {
    return request(this.base, "GET", `/sessions/${id}/bell`);
  }

  audit(id: string): Promise<AuditDoc> {
    return request(this.base, "GET", `/sessions/${id}/audit`);
  }
}
