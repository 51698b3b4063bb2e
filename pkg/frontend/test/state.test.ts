import { describe, expect, it } from "vitest";

import type { ScoreResponse } from "../src/api.js";
import {
  adjustWeight,
  applyError,
  applyScore,
  initialState,
  resetWeights,
  selectRanking,
  weightSum,
} from "../src/state.js";
import { fixtures } from "./fixtures.js";

const baseline = fixtures.configWeights as Record<string, number>;
const scoreResponse = fixtures.score as unknown as ScoreResponse;

describe("weight adjustment", () => {
  it("keeps the vector summing to 1 after any move", () => {
    let weights = { ...baseline };
    for (const [cid, value] of [
      ["cost_total", 0.6],
      ["queue_frequency", 0.0],
      ["road_safety", 0.33],
      ["dissatisfaction", 1.0],
      ["dissatisfaction", 0.1],
    ] as [string, number][]) {
      weights = adjustWeight(weights, cid, value);
      expect(weightSum(weights)).toBeCloseTo(1.0, 9);
    }
  });

  it("rescales the others proportionally", () => {
    const weights = adjustWeight(baseline, "cost_total", 0.5);
    expect(weights.cost_total).toBe(0.5);
    // remaining 0.75 shrinks to 0.5: everything else scales by 2/3
    expect(weights.traffic_profit).toBeCloseTo(0.25 * (0.5 / 0.75), 12);
    expect(weights.queue_frequency).toBeCloseTo(0.1 * (0.5 / 0.75), 12);
  });

  it("spreads the remainder evenly when the others are all zero", () => {
    let weights = { ...baseline };
    weights = adjustWeight(weights, "cost_total", 1.0);
    weights = adjustWeight(weights, "cost_total", 0.3);
    const others = Object.entries(weights).filter(([k]) => k !== "cost_total");
    for (const [, v] of others) expect(v).toBeCloseTo(0.7 / others.length, 12);
    expect(weightSum(weights)).toBeCloseTo(1.0, 9);
  });

  it("rejects negative weights and unknown criteria", () => {
    expect(() => adjustWeight(baseline, "cost_total", -0.1)).toThrow(/>= 0/);
    expect(() => adjustWeight(baseline, "nope", 0.1)).toThrow(/unknown/);
  });
});

describe("state transitions", () => {
  it("reset restores the case-study weights exactly", () => {
    let state = initialState(baseline);
    state = { ...state, weights: adjustWeight(state.weights, "road_safety", 0.9) };
    state = resetWeights(state);
    expect(state.weights).toEqual(baseline);
  });

  it("stores score responses verbatim and tracks provenance", () => {
    let state = initialState(baseline);
    state = applyScore(state, scoreResponse);
    expect(state.lastScore).toBe(scoreResponse);
    expect(state.provenanceHash).toBe(scoreResponse.provenance.config_hash);
    expect(state.error).toBeNull();
  });

  it("reset state displays the case-study totals from the API", () => {
    let state = initialState(baseline);
    state = applyScore(state, scoreResponse);
    const ranking = selectRanking(state)!;
    // bit-exact fields of the recorded response, not recomputed values
    expect(ranking.totals["1"]).toBe(65.0);
    expect(ranking.totals["2"]).toBe(75.0);
    expect(ranking.totals["3"]).toBe(54.63119874645863);
    expect(ranking.order).toEqual([2, 1, 3]);
  });

  it("method toggle selects the matching API ranking", () => {
    let state = initialState(baseline);
    state = applyScore(state, scoreResponse);
    state = { ...state, method: "cba" };
    expect(selectRanking(state)).toBe(scoreResponse.cba);
    state = { ...state, method: "staticMcda" };
    expect(selectRanking(state)).toBe(scoreResponse.static);
  });

  it("errors keep previous results on screen", () => {
    let state = initialState(baseline);
    state = applyScore(state, scoreResponse);
    state = applyError(state, "boom");
    expect(state.error).toBe("boom");
    expect(state.lastScore).toBe(scoreResponse);
  });
});
