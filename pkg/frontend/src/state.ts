// View state and its transitions. Weights always sum to 1; rankings and
// sensitivity reports are stored exactly as the API returned them.

import type { Provenance, RankingPayload, ScoreResponse, SensitivityReport } from "./api.js";

export type Method = "cba" | "staticMcda" | "dynamicMcda";

export interface ViewState {
  weights: Record<string, number>;
  baseline: Record<string, number>; // reset target, from the service config
  method: Method;
  lastScore: ScoreResponse | null;
  lastSensitivity: SensitivityReport | null;
  provenanceHash: string | null;
  error: string | null;
}

export function initialState(baseline: Record<string, number>): ViewState {
  return {
    weights: { ...baseline },
    baseline: { ...baseline },
    method: "dynamicMcda",
    lastScore: null,
    lastSensitivity: null,
    provenanceHash: null,
    error: null,
  };
}

export function weightSum(weights: Record<string, number>): number {
  return Object.values(weights).reduce((a, b) => a + b, 0);
}

/**
 * Set one weight and rescale the others proportionally so the vector keeps
 * summing to 1. When the others are all zero the remainder is spread evenly.
 */
export function adjustWeight(
  weights: Record<string, number>,
  criterion: string,
  value: number,
): Record<string, number> {
  if (!(criterion in weights)) throw new Error(`unknown criterion ${criterion}`);
  if (value < 0) throw new Error(`weight must be >= 0, got ${value}`);
  const target = Math.min(value, 1);
  const othersSum = weightSum(weights) - weights[criterion]!;
  const remainder = 1 - target;
  const out: Record<string, number> = {};
  const others = Object.keys(weights).filter((k) => k !== criterion);
  for (const key of others) {
    out[key] = othersSum > 0 ? (weights[key]! / othersSum) * remainder : remainder / others.length;
  }
  out[criterion] = target;
  return out;
}

export function resetWeights(state: ViewState): ViewState {
  return { ...state, weights: { ...state.baseline } };
}

export function applyScore(state: ViewState, response: ScoreResponse): ViewState {
  return {
    ...state,
    lastScore: response,
    provenanceHash: response.provenance.config_hash,
    error: null,
  };
}

export function applySensitivity(
  state: ViewState,
  report: SensitivityReport,
  provenance: Provenance,
): ViewState {
  return {
    ...state,
    lastSensitivity: report,
    provenanceHash: provenance.config_hash,
    error: null,
  };
}

export function applyError(state: ViewState, message: string): ViewState {
  // keep the previous results on screen; just surface the banner
  return { ...state, error: message };
}

export function selectRanking(state: ViewState): RankingPayload | null {
  if (!state.lastScore) return null;
  switch (state.method) {
    case "cba":
      return state.lastScore.cba;
    case "staticMcda":
      return state.lastScore.static;
    case "dynamicMcda":
      return state.lastScore.dynamic;
  }
}
