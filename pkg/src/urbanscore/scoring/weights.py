"""Preference profiles, bounded-simplex weight normalization, aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import InfeasibleProfile

SUBSCORE_KEYS = ("air", "traffic", "lifestyle", "education", "metro", "surface")
TRAFFIC_INDEX = SUBSCORE_KEYS.index("traffic")

DEFAULT_WEIGHTS = (0.20, 0.20, 0.20, 0.20, 0.10, 0.10)
WEIGHT_FLOOR = 0.05
WEIGHT_CEIL = 0.40
TRAFFIC_SENSITIVITY_BOOST = 1.5

_SUM_TOL = 1e-9
_PIN_EPS = 1e-12


@dataclass(frozen=True)
class SubScores:
    air: float
    traffic: float
    lifestyle: float
    education: float
    metro: float
    surface: float

    def __post_init__(self) -> None:
        for key in SUBSCORE_KEYS:
            value = getattr(self, key)
            if not math.isfinite(value) or not 0.0 <= value <= 100.0:
                raise ValueError(f"sub-score {key} out of [0, 100]: {value}")

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, key) for key in SUBSCORE_KEYS)

    def as_dict(self) -> dict[str, float]:
        return {key: getattr(self, key) for key in SUBSCORE_KEYS}


@dataclass(frozen=True)
class PreferenceProfile:
    """Raw slider weights in sub-score order plus the traffic-sensitivity switch."""

    weights: tuple[float, ...] = DEFAULT_WEIGHTS
    traffic_sensitive: bool = False

    def __post_init__(self) -> None:
        if len(self.weights) != len(SUBSCORE_KEYS):
            raise ValueError(f"expected {len(SUBSCORE_KEYS)} weights")
        if any(not math.isfinite(w) or w <= 0 for w in self.weights):
            raise ValueError("raw weights must be positive and finite")


def normalize_weights(profile: PreferenceProfile) -> tuple[float, ...]:
    """Project the profile onto the bounded simplex (sum 1, each in [0.05, 0.40]).

    Steps: the traffic-sensitivity switch multiplies the traffic weight by 1.5;
    the vector is rescaled to sum 1; components outside [floor, ceiling] are
    clamped and the residual mass is redistributed proportionally across the
    remaining components, repeating (re-pinning or releasing components as the
    common scale changes) until the pin set is stable. With six components the
    loop settles within a handful of iterations.
    """
    raw = list(profile.weights)
    if profile.traffic_sensitive:
        raw[TRAFFIC_INDEX] *= TRAFFIC_SENSITIVITY_BOOST

    n = len(raw)
    pinned: dict[int, float] = {}
    seen_pinsets: set[tuple] = set()
    for _ in range(64):
        free = [i for i in range(n) if i not in pinned]
        residual = 1.0 - sum(pinned.values())
        if not free:
            if abs(residual) <= _SUM_TOL:
                break
            # every component sits on a bound; release the side that can absorb
            side = WEIGHT_FLOOR if residual > 0 else WEIGHT_CEIL
            pinned = {i: b for i, b in pinned.items() if b != side}
            continue
        scale = residual / sum(raw[i] for i in free)
        desired: dict[int, float] = {}
        for i in range(n):
            value = scale * raw[i]
            if value < WEIGHT_FLOOR - _PIN_EPS:
                desired[i] = WEIGHT_FLOOR
            elif value > WEIGHT_CEIL + _PIN_EPS:
                desired[i] = WEIGHT_CEIL
        if desired == pinned:
            weights = [desired.get(i, scale * raw[i]) for i in range(n)]
            return tuple(weights)
        fingerprint = tuple(sorted(desired.items()))
        if fingerprint in seen_pinsets:
            raise InfeasibleProfile("weight normalization did not stabilize")
        seen_pinsets.add(fingerprint)
        pinned = desired
    else:
        raise InfeasibleProfile("weight normalization did not converge")
    return tuple(pinned[i] for i in range(n))


def aggregate(sub: SubScores, weights: tuple[float, ...]) -> int:
    """Round-half-up dot product of the normalized weights and the sub-scores."""
    if len(weights) != len(SUBSCORE_KEYS):
        raise ValueError("weight vector length mismatch")
    total = sum(w * s for w, s in zip(weights, sub.as_tuple()))
    return int(math.floor(total + 0.5))
