import { describe, expect, it } from "vitest";

import { SUBSCORE_KEYS, WeightVector } from "../src/types.js";
import {
  CEIL,
  DEFAULT_WEIGHTS,
  FLOOR,
  applySliderChange,
  fromVector,
  normalizeWeights,
  toVector,
  weightsSumPercent,
} from "../src/weights.js";

const sum = (xs: number[]) => xs.reduce((a, b) => a + b, 0);

describe("normalizeWeights", () => {
  it("keeps the defaults unchanged", () => {
    const out = normalizeWeights(toVector(DEFAULT_WEIGHTS));
    toVector(DEFAULT_WEIGHTS).forEach((w, i) => expect(out[i]).toBeCloseTo(w, 12));
  });

  it("applies the 1.5x traffic boost before rescaling", () => {
    const out = normalizeWeights(toVector(DEFAULT_WEIGHTS), true);
    const expected = [0.2 / 1.1, 0.3 / 1.1, 0.2 / 1.1, 0.2 / 1.1, 0.1 / 1.1, 0.1 / 1.1];
    expected.forEach((w, i) => expect(out[i]).toBeCloseTo(w, 9));
  });

  it("clamps extreme vectors into [5%, 40%] while summing to 1", () => {
    const out = normalizeWeights([0.9, 0.02, 0.02, 0.02, 0.02, 0.02]);
    expect(sum(out)).toBeCloseTo(1, 9);
    for (const w of out) {
      expect(w).toBeGreaterThanOrEqual(FLOOR - 1e-9);
      expect(w).toBeLessThanOrEqual(CEIL + 1e-9);
    }
    expect(out[0]).toBeCloseTo(CEIL, 6);
  });

  it("leaves a deservedly tiny component at the floor", () => {
    const out = normalizeWeights([0.01, 0.04, 0.04, 0.04, 0.04, 0.9]);
    expect(out[0]).toBeCloseTo(FLOOR, 6);
    expect(out[5]).toBeCloseTo(CEIL, 6);
    expect(sum(out)).toBeCloseTo(1, 9);
  });

  it("is idempotent on its own output", () => {
    const once = normalizeWeights([3, 1, 2, 0.5, 0.7, 1.1]);
    const twice = normalizeWeights(once);
    once.forEach((w, i) => expect(twice[i]).toBeCloseTo(w, 9));
  });

  it("rejects non-positive weights", () => {
    expect(() => normalizeWeights([0.2, 0.2, 0.2, 0.2, 0.2, 0])).toThrow();
  });
});

describe("applySliderChange", () => {
  it("dragging traffic to 40% shrinks the others proportionally", () => {
    const out = applySliderChange({ ...DEFAULT_WEIGHTS }, "traffic", 0.4);
    expect(out.traffic).toBeCloseTo(0.4, 6);
    expect(sum(toVector(out))).toBeCloseTo(1, 9);
    // the other five keep their mutual ratios: air:metro was 2:1
    expect(out.air / out.metro).toBeCloseTo(2, 6);
  });

  it("snaps a slider below the floor up to 5%", () => {
    const out = applySliderChange({ ...DEFAULT_WEIGHTS }, "education", 0.01);
    expect(out.education).toBeCloseTo(FLOOR, 6);
    expect(sum(toVector(out))).toBeCloseTo(1, 9);
  });

  it("display sum stays at 100% after any drag sequence", () => {
    let weights: WeightVector = { ...DEFAULT_WEIGHTS };
    const moves: [keyof WeightVector, number][] = [
      ["traffic", 0.4],
      ["air", 0.05],
      ["lifestyle", 0.33],
      ["surface", 0.02],
      ["education", 0.4],
    ];
    for (const [key, value] of moves) {
      weights = applySliderChange(weights, key, value);
      expect(weightsSumPercent(weights)).toBeCloseTo(100, 2);
      for (const k of SUBSCORE_KEYS) {
        expect(weights[k]).toBeGreaterThanOrEqual(FLOOR - 1e-9);
        expect(weights[k]).toBeLessThanOrEqual(CEIL + 1e-9);
      }
    }
  });
});

describe("vector helpers", () => {
  it("round-trips between record and vector form", () => {
    const vector = toVector(DEFAULT_WEIGHTS);
    expect(fromVector(vector)).toEqual(DEFAULT_WEIGHTS);
  });
});
