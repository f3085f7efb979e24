// Client-side mirror of the server's bounded-simplex weight rule, used only
// for an optimistic slider preview; the server's vector is authoritative and
// replaces the preview when the evaluation answers.

import { SUBSCORE_KEYS, SubScoreKey, WeightVector } from "./types.js";

export const FLOOR = 0.05;
export const CEIL = 0.4;
export const TRAFFIC_BOOST = 1.5;

export const DEFAULT_WEIGHTS: WeightVector = {
  air: 0.2,
  traffic: 0.2,
  lifestyle: 0.2,
  education: 0.2,
  metro: 0.1,
  surface: 0.1,
};

const clamp = (x: number, lo: number, hi: number) => Math.min(hi, Math.max(lo, x));

/** Scale to sum 1 with every component clamped into [FLOOR, CEIL]: find the
 * multiplier t where sum(clamp(t*v)) = 1 (monotone in t, so bisection). */
export function normalizeWeights(raw: number[], trafficSensitive = false): number[] {
  if (raw.length !== SUBSCORE_KEYS.length || raw.some((w) => !(w > 0))) {
    throw new Error("raw weights must be six positive numbers");
  }
  const v = raw.slice();
  if (trafficSensitive) v[1] *= TRAFFIC_BOOST;

  const total = (t: number) => v.reduce((acc, w) => acc + clamp(t * w, FLOOR, CEIL), 0);
  let lo = 0;
  let hi = 1;
  while (total(hi) < 1) hi *= 2;
  for (let i = 0; i < 100; i++) {
    const mid = (lo + hi) / 2;
    if (total(mid) < 1) lo = mid;
    else hi = mid;
  }
  const t = (lo + hi) / 2;
  const out = v.map((w) => clamp(t * w, FLOOR, CEIL));
  // absorb the last float crumbs so the display always sums to exactly 100 %
  const sum = out.reduce((a, b) => a + b, 0);
  return out.map((w) => w / sum);
}

export function toVector(weights: WeightVector): number[] {
  return SUBSCORE_KEYS.map((k) => weights[k]);
}

export function fromVector(values: number[]): WeightVector {
  const out = {} as WeightVector;
  SUBSCORE_KEYS.forEach((k, i) => (out[k] = values[i]));
  return out;
}

/** One slider moved: pin it (snapped into bounds), shrink or grow the others
 * proportionally, then re-project onto the bounded simplex. */
export function applySliderChange(
  current: WeightVector,
  key: SubScoreKey,
  requested: number,
): WeightVector {
  const pinned = clamp(requested, FLOOR, CEIL);
  const restSum = SUBSCORE_KEYS.filter((k) => k !== key).reduce(
    (acc, k) => acc + current[k],
    0,
  );
  const raw = SUBSCORE_KEYS.map((k) =>
    k === key ? pinned : (current[k] / restSum) * (1 - pinned),
  );
  return fromVector(normalizeWeights(raw.map((w) => Math.max(w, 1e-9))));
}

export function weightsSumPercent(weights: WeightVector): number {
  const sum = SUBSCORE_KEYS.reduce((acc, k) => acc + weights[k], 0);
  return Math.round(sum * 10000) / 100;
}
