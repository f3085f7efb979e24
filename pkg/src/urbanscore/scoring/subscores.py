"""The six component scores. Pure functions over value inputs, all on [0, 100]."""

from __future__ import annotations

import math
from typing import Iterable, Mapping

from ..errors import InvalidSample, NoData
from ..geodata.types import FacilityCategory, Pollutant, TrafficSample
from .calibration import CalibrationConstants, PollutantModel

LIFESTYLE_CATEGORY_COUNT = 4  # supermarkets, restaurants, fast food, parks


def _clamp(value: float, lo: float = 0.0, hi: float = 100.0) -> float:
    return max(lo, min(hi, value))


def shannon_entropy(counts: Mapping) -> float:
    """H = -sum(p ln p) over categories with count > 0; 0 for an empty tally."""
    total = sum(c for c in counts.values() if c > 0)
    if total <= 0:
        return 0.0
    entropy = 0.0
    for count in counts.values():
        if count > 0:
            p = count / total
            entropy -= p * math.log(p)
    return max(0.0, entropy)


def air_score(means: Mapping[Pollutant, float], model: PollutantModel) -> float:
    """Weighted WHO-threshold index over the pollutants that have data.

    Each present pollutant contributes w_i * clamp(100 - 100*conc/threshold, 0, 100);
    the sum is normalised by the total weight of the present pollutants, so
    missing series drop out of both sums. Contributions are clamped at zero:
    a pollutant above its guideline cannot push the index negative.
    """
    contributions = 0.0
    weight_total = 0.0
    for pollutant, weight in model.weights.items():
        mean = means.get(pollutant)
        if mean is None:
            continue
        if mean < 0:
            raise ValueError(f"negative mean for {pollutant.value}")
        threshold = model.thresholds[pollutant]
        contributions += weight * _clamp(100.0 - 100.0 * mean / threshold)
        weight_total += weight
    if weight_total == 0.0:
        raise NoData("no pollutant has a mean concentration")
    return _clamp(contributions / weight_total)


def traffic_point_score(sample: TrafficSample) -> float:
    """Mean of speed ratio and time ratio, penalised by provider confidence."""
    if sample.free_flow_speed <= 0 or sample.current_travel_time <= 0:
        raise InvalidSample("non-positive denominator in traffic sample")
    speed_ratio = sample.current_speed / sample.free_flow_speed
    time_ratio = sample.free_flow_travel_time / sample.current_travel_time
    raw = (speed_ratio + time_ratio) / 2.0
    penalised = raw * sample.confidence
    return _clamp(penalised, 0.0, 1.0) * 100.0


def traffic_score(samples: Iterable[TrafficSample | None]) -> float:
    """Unweighted mean of the per-point scores; missing samples are excluded."""
    scores = [traffic_point_score(s) for s in samples if s is not None]
    if not scores:
        raise NoData("all traffic samples missing")
    return sum(scores) / len(scores)


def lifestyle_score(counts: Mapping[FacilityCategory, int], cal: CalibrationConstants) -> float:
    """Grows with log amenity count and with the entropy of the category mix."""
    total = sum(counts.values())
    if total <= 0:
        return 0.0
    count_term = math.log1p(total) / math.log1p(cal.lifestyle_count_ref)
    entropy_term = shannon_entropy(counts) / math.log(LIFESTYLE_CATEGORY_COUNT)
    value = cal.lifestyle_count_weight * count_term + cal.lifestyle_entropy_weight * entropy_term
    return _clamp(100.0 * value)


def education_score(
    schools: Iterable[tuple[FacilityCategory, float]], cal: CalibrationConstants
) -> float:
    """Saturating sum of distance-decayed school contributions.

    Each school adds g(type) * max(0, 1 - d/decay); the 1 - exp(-sum) envelope
    gives extra schools diminishing returns.
    """
    strength = 0.0
    for category, distance_m in schools:
        if distance_m < 0:
            raise ValueError("school distance must be >= 0")
        weight = cal.education_type_weights.get(category, 0.0)
        strength += weight * max(0.0, 1.0 - distance_m / cal.education_decay_m)
    return _clamp(100.0 * (1.0 - math.exp(-strength)))


def metro_score(nearest_metro_m: float | None, cal: CalibrationConstants | None = None) -> float:
    """Piecewise-linear: full inside 200 m, zero beyond 1 km (defaults)."""
    full = cal.metro_full_m if cal else 200.0
    zero = cal.metro_zero_m if cal else 1000.0
    if nearest_metro_m is None:
        return 0.0
    if nearest_metro_m < 0:
        raise ValueError("metro distance must be >= 0")
    if nearest_metro_m <= full:
        return 100.0
    if nearest_metro_m >= zero:
        return 0.0
    return 100.0 * (zero - nearest_metro_m) / (zero - full)


def surface_score(distinct_routes: int, cal: CalibrationConstants) -> float:
    """Square-root growth in distinct surface routes, clamped at 100."""
    if distinct_routes < 0:
        raise ValueError("route count must be >= 0")
    return _clamp(cal.surface_k * math.sqrt(distinct_routes))
