import type { BlendWeights, QueryRequest, RankingMode, ServiceDefaults } from "./types.js";

export interface QueryFormState {
  title: string;
  content: string;
  k: number;
  threshold: number;
  weights: BlendWeights;
  mode: RankingMode;
  cascadeM: number | null;
  inFlight: boolean;
}

export const BUILTIN_DEFAULTS: ServiceDefaults = {
  k: 5,
  threshold: 0.7,
  weights: { p: 2, q: 1, r: 1 },
  mode: "weighted",
  cascade: { enabled: false, m: 50 },
};

export function initialFormState(defaults: ServiceDefaults | null): QueryFormState {
  const source = defaults ?? BUILTIN_DEFAULTS;
  return {
    title: "",
    content: "",
    k: source.k,
    threshold: clampThreshold(source.threshold),
    weights: { ...source.weights },
    mode: source.mode,
    cascadeM: source.cascade.enabled ? source.cascade.m : null,
    inFlight: false,
  };
}

export function clampThreshold(value: number): number {
  if (!Number.isFinite(value)) {
    return 0.7;
  }
  return Math.min(1, Math.max(0, value));
}

export function formToRequest(state: QueryFormState): QueryRequest {
  const request: QueryRequest = {
    title: state.title,
    content: state.content,
    k: state.k,
    threshold: state.threshold,
    mode: state.mode,
    weights: { ...state.weights },
  };
  if (state.cascadeM !== null) {
    request.cascade = { m: state.cascadeM };
  }
  return request;
}

// One query in flight at a time; a response only counts if its token is
// still the latest one handed out. Responses that lost the race are
// dropped without touching the DOM.
export class RequestSequencer {
  private seq = 0;

  begin(): number {
    this.seq += 1;
    return this.seq;
  }

  isCurrent(token: number): boolean {
    return token === this.seq;
  }
}
