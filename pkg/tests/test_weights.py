import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from urbanscore.scoring.weights import (
    DEFAULT_WEIGHTS,
    SUBSCORE_KEYS,
    TRAFFIC_INDEX,
    WEIGHT_CEIL,
    WEIGHT_FLOOR,
    PreferenceProfile,
    SubScores,
    aggregate,
    normalize_weights,
)

raw_weight = st.floats(min_value=1e-6, max_value=1e6, allow_nan=False, allow_infinity=False)
raw_vector = st.lists(raw_weight, min_size=6, max_size=6)


def oracle_bounded_simplex(raw: list[float]) -> list[float]:
    """Independent solve: w_i = clamp(t * v_i) with sum(w) = 1, found by
    scanning the piecewise-linear segments of S(t) = sum(clamp(t * v_i))."""
    lo, hi = WEIGHT_FLOOR, WEIGHT_CEIL
    breakpoints = sorted({lo / v for v in raw} | {hi / v for v in raw} | {0.0})

    def total(t):
        return sum(min(hi, max(lo, t * v)) for v in raw)

    # S is non-decreasing from 6*lo to 6*hi; find the segment crossing 1
    for left, right in zip(breakpoints, breakpoints[1:] + [breakpoints[-1] * 2 + 1]):
        if total(right) < 1.0 - 1e-15:
            continue
        # within [left, right] the active set is fixed: solve linearly
        active = [v for v in raw if lo < 0.5 * (left + right) * v < hi]
        fixed = sum(
            lo if 0.5 * (left + right) * v <= lo else hi
            for v in raw
            if not lo < 0.5 * (left + right) * v < hi
        )
        if active:
            t = (1.0 - fixed) / sum(active)
        else:
            t = left
        if left - 1e-12 <= t <= right + 1e-12:
            return [min(hi, max(lo, t * v)) for v in raw]
    raise AssertionError("no solution found by oracle")


class TestNormalizeWeights:
    def test_defaults_unchanged(self):
        weights = normalize_weights(PreferenceProfile())
        assert weights == pytest.approx(DEFAULT_WEIGHTS, abs=1e-12)

    def test_traffic_sensitivity_boost(self):
        weights = normalize_weights(PreferenceProfile(traffic_sensitive=True))
        expected = (0.2 / 1.1, 0.3 / 1.1, 0.2 / 1.1, 0.2 / 1.1, 0.1 / 1.1, 0.1 / 1.1)
        assert weights == pytest.approx(expected, abs=1e-12)

    def test_extreme_profile_clamped_into_bounds(self):
        profile = PreferenceProfile(weights=(0.9, 0.02, 0.02, 0.02, 0.02, 0.02))
        weights = normalize_weights(profile)
        assert sum(weights) == pytest.approx(1.0, abs=1e-9)
        for w in weights:
            assert WEIGHT_FLOOR - 1e-12 <= w <= WEIGHT_CEIL + 1e-12
        assert weights == pytest.approx(oracle_bounded_simplex(list(profile.weights)), abs=1e-6)

    def test_unequal_tiny_components_floor_correctly(self):
        # one component deserves to stay at the floor while its siblings rise
        raw = (0.01, 0.04, 0.04, 0.04, 0.04, 0.9)
        weights = normalize_weights(PreferenceProfile(weights=raw))
        assert weights == pytest.approx(oracle_bounded_simplex(list(raw)), abs=1e-6)
        assert weights[0] == pytest.approx(WEIGHT_FLOOR)
        assert weights[5] == pytest.approx(WEIGHT_CEIL)

    def test_idempotent_on_own_output(self):
        rng = random.Random(7)
        for _ in range(200):
            raw = tuple(rng.uniform(1e-4, 10) for _ in range(6))
            out = normalize_weights(PreferenceProfile(weights=raw, traffic_sensitive=True))
            again = normalize_weights(PreferenceProfile(weights=out))
            assert again == pytest.approx(out, abs=1e-9)

    def test_scale_invariance(self):
        raw = (0.31, 0.11, 0.25, 0.08, 0.15, 0.10)
        base = normalize_weights(PreferenceProfile(weights=raw))
        for factor in (1e-3, 0.5, 7.0, 1e4):
            scaled = tuple(w * factor for w in raw)
            assert normalize_weights(PreferenceProfile(weights=scaled)) == pytest.approx(
                base, abs=1e-9
            )

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            PreferenceProfile(weights=(0.2, 0.2, 0.2, 0.2, 0.2, 0.0))

    @settings(max_examples=300)
    @given(raw_vector, st.booleans())
    def test_matches_oracle_and_invariants(self, raw, sensitive):
        profile = PreferenceProfile(weights=tuple(raw), traffic_sensitive=sensitive)
        weights = normalize_weights(profile)
        assert sum(weights) == pytest.approx(1.0, abs=1e-9)
        for w in weights:
            assert WEIGHT_FLOOR - 1e-9 <= w <= WEIGHT_CEIL + 1e-9
        boosted = list(raw)
        if sensitive:
            boosted[TRAFFIC_INDEX] *= 1.5
        assert weights == pytest.approx(oracle_bounded_simplex(boosted), abs=1e-6)


class TestAggregate:
    def test_all_100(self):
        sub = SubScores(100, 100, 100, 100, 100, 100)
        assert aggregate(sub, DEFAULT_WEIGHTS) == 100

    def test_reference_neighbourhood_default_weights(self):
        sub = SubScores(94.3, 75, 91, 73, 85, 88)
        assert aggregate(sub, DEFAULT_WEIGHTS) == 84

    def test_constant_subscores_any_weights(self):
        # away from the .5 boundary, float noise in the dot product is harmless
        rng = random.Random(3)
        for _ in range(50):
            raw = tuple(rng.uniform(0.01, 5) for _ in range(6))
            weights = normalize_weights(PreferenceProfile(weights=raw))
            for c in (0.0, 13.0, 55.25, 77.8, 100.0):
                sub = SubScores(*(c,) * 6)
                assert aggregate(sub, weights) == int(math.floor(c + 0.5))

    def test_half_up_rounding(self):
        # dyadic weights make the dot product exactly 83.5; half-up gives 84
        weights = (0.5, 0.125, 0.125, 0.125, 0.0625, 0.0625)
        sub = SubScores(83, 84, 84, 84, 84, 84)
        assert sum(w * s for w, s in zip(weights, sub.as_tuple())) == 83.5
        assert aggregate(sub, weights) == 84

    @given(st.lists(st.floats(min_value=0, max_value=100), min_size=6, max_size=6), raw_vector)
    def test_within_minmax_band(self, scores, raw):
        weights = normalize_weights(PreferenceProfile(weights=tuple(raw)))
        sub = SubScores(*scores)
        value = aggregate(sub, weights)
        assert math.floor(min(scores) + 0.5) - 1 <= value <= math.ceil(max(scores)) + 1
        assert 0 <= value <= 100

    @given(st.lists(st.floats(min_value=0, max_value=99), min_size=6, max_size=6),
           st.integers(min_value=0, max_value=5),
           st.floats(min_value=0.1, max_value=50))
    def test_monotone_in_each_subscore(self, scores, index, bump):
        weights = normalize_weights(PreferenceProfile())
        low = SubScores(*scores)
        raised = list(scores)
        raised[index] = min(100.0, raised[index] + bump)
        high = SubScores(*raised)
        assert aggregate(high, weights) >= aggregate(low, weights)
