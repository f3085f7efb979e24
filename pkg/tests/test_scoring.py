import itertools
import math

import pytest
from hypothesis import given, strategies as st

from urbanscore.errors import InvalidSample, NoData
from urbanscore.geo import GeoPoint
from urbanscore.geodata.types import FacilityCategory, Pollutant, TrafficSample
from urbanscore.scoring import (
    CalibrationConstants,
    PollutantModel,
    air_score,
    education_score,
    lifestyle_score,
    metro_score,
    shannon_entropy,
    surface_score,
    traffic_point_score,
    traffic_score,
)

CAL = CalibrationConstants()
MODEL = PollutantModel()
POINT = GeoPoint(44.4, 26.1)


def sample(cur=50.0, free=50.0, cur_tt=60.0, free_tt=60.0, conf=1.0) -> TrafficSample:
    return TrafficSample(POINT, cur, free, cur_tt, free_tt, conf)


class TestAirScore:
    def test_zero_means_scores_100(self):
        means = {p: 0.0 for p in Pollutant}
        assert air_score(means, MODEL) == pytest.approx(100.0)

    def test_means_at_thresholds_score_0(self):
        means = dict(MODEL.thresholds)
        assert air_score(means, MODEL) == pytest.approx(0.0)

    def test_half_thresholds_score_50(self):
        # each term contributes w_i * 50; dividing by the 0.70 weight total -> 50
        means = {p: t / 2 for p, t in MODEL.thresholds.items()}
        assert air_score(means, MODEL) == pytest.approx(50.0)

    def test_missing_pollutants_drop_from_both_sums(self):
        means = {Pollutant.PM25: 0.0}
        assert air_score(means, MODEL) == pytest.approx(100.0)
        means = {Pollutant.PM25: MODEL.thresholds[Pollutant.PM25]}
        assert air_score(means, MODEL) == pytest.approx(0.0)

    def test_above_threshold_clamped_not_negative(self):
        means = {p: t * 10 for p, t in MODEL.thresholds.items()}
        assert air_score(means, MODEL) == 0.0

    def test_no_data_raises(self):
        with pytest.raises(NoData):
            air_score({}, MODEL)

    @given(st.floats(min_value=0, max_value=50), st.floats(min_value=0, max_value=50))
    def test_monotone_nonincreasing_in_any_mean(self, low, delta):
        means = {p: 5.0 for p in Pollutant}
        base = air_score(means, MODEL)
        means[Pollutant.PM25] = low + delta
        worse = air_score({**means, Pollutant.PM25: low + delta}, MODEL)
        better = air_score({**means, Pollutant.PM25: low}, MODEL)
        assert better >= worse
        assert 0.0 <= base <= 100.0


class TestTrafficPointScore:
    def test_free_flow_scores_100(self):
        assert traffic_point_score(sample()) == pytest.approx(100.0)

    def test_half_ratios_with_confidence(self):
        # r_s = 25/50, r_t = 60/120, raw 0.5, penalised by 0.9 -> 45.0
        s = sample(cur=25, free=50, cur_tt=120, free_tt=60, conf=0.9)
        assert traffic_point_score(s) == pytest.approx(45.0)

    def test_zero_confidence_zeroes_score(self):
        assert traffic_point_score(sample(conf=0.0)) == 0.0

    def test_fast_segment_clamped_to_100(self):
        s = sample(cur=80, free=50, cur_tt=30, free_tt=60)
        assert traffic_point_score(s) == 100.0

    def test_invalid_denominator(self):
        s = sample()
        object.__setattr__(s, "free_flow_speed", 0.0)
        with pytest.raises(InvalidSample):
            traffic_point_score(s)

    @given(st.floats(min_value=0, max_value=1), st.floats(min_value=0, max_value=1))
    def test_monotone_in_confidence(self, c1, c2):
        lo, hi = sorted([c1, c2])
        s_lo, s_hi = sample(cur=40, conf=lo), sample(cur=40, conf=hi)
        assert traffic_point_score(s_lo) <= traffic_point_score(s_hi)


class TestTrafficScore:
    def test_identical_free_flow_samples(self):
        assert traffic_score([sample()] * 5) == pytest.approx(100.0)

    def test_missing_samples_excluded(self):
        s45 = sample(cur=25, free=50, cur_tt=120, free_tt=60, conf=0.9)
        assert traffic_score([s45, None, s45, s45, s45]) == pytest.approx(45.0)

    def test_all_missing_raises(self):
        with pytest.raises(NoData):
            traffic_score([None] * 5)


class TestShannonEntropy:
    def test_single_category_zero(self):
        assert shannon_entropy({"a": 10}) == 0.0

    def test_uniform_four_categories(self):
        assert shannon_entropy({"a": 5, "b": 5, "c": 5, "d": 5}) == pytest.approx(math.log(4))

    def test_empty_zero(self):
        assert shannon_entropy({}) == 0.0

    def test_brute_force_oracle_all_count_vectors(self):
        # exhaustive: every count vector with total <= 12 over <= 4 categories
        def oracle(counts):
            total = sum(counts)
            if total == 0:
                return 0.0
            return -sum((c / total) * math.log(c / total) for c in counts if c > 0)

        for n_cats in range(1, 5):
            for counts in itertools.product(range(13), repeat=n_cats):
                if sum(counts) > 12:
                    continue
                tally = {i: c for i, c in enumerate(counts)}
                assert shannon_entropy(tally) == pytest.approx(oracle(counts), abs=1e-12)

    def test_maximal_at_uniform(self):
        uniform = shannon_entropy({i: 3 for i in range(4)})
        for counts in itertools.product(range(13), repeat=4):
            if sum(counts) != 12:
                continue
            assert shannon_entropy(dict(enumerate(counts))) <= uniform + 1e-12


class TestLifestyleScore:
    def test_zero_counts_zero(self):
        counts = {c: 0 for c in FacilityCategory}
        assert lifestyle_score(counts, CAL) == 0.0

    def test_reference_neighbourhood_band(self):
        counts = {
            FacilityCategory.SUPERMARKET: 9,
            FacilityCategory.RESTAURANT: 38,
            FacilityCategory.FAST_FOOD: 4,
            FacilityCategory.PARK: 12,
        }
        assert lifestyle_score(counts, CAL) == pytest.approx(91.0, abs=5.0)

    def test_spread_beats_monoculture(self):
        for total in (4, 8, 20, 40):
            mono = {FacilityCategory.SUPERMARKET: total}
            spread = {
                FacilityCategory.SUPERMARKET: total - 3 * (total // 4),
                FacilityCategory.RESTAURANT: total // 4,
                FacilityCategory.FAST_FOOD: total // 4,
                FacilityCategory.PARK: total // 4,
            }
            assert lifestyle_score(spread, CAL) > lifestyle_score(mono, CAL)

    @given(st.lists(st.integers(min_value=0, max_value=500), min_size=4, max_size=4))
    def test_always_in_range(self, counts):
        tally = dict(zip([FacilityCategory.SUPERMARKET, FacilityCategory.RESTAURANT,
                          FacilityCategory.FAST_FOOD, FacilityCategory.PARK], counts))
        assert 0.0 <= lifestyle_score(tally, CAL) <= 100.0


class TestEducationScore:
    def test_no_schools_zero(self):
        assert education_score([], CAL) == 0.0

    def test_reference_set_in_band(self):
        schools = [
            (FacilityCategory.KINDERGARTEN, 250.0),
            (FacilityCategory.PRIMARY_SCHOOL, 260.0),
            (FacilityCategory.PRIMARY_SCHOOL, 460.0),
            (FacilityCategory.PRIMARY_SCHOOL, 750.0),
            (FacilityCategory.HIGH_SCHOOL, 150.0),
        ]
        assert education_score(schools, CAL) == pytest.approx(73.0, abs=5.0)

    def test_moving_school_away_strictly_decreases(self):
        near = education_score([(FacilityCategory.HIGH_SCHOOL, 200.0)], CAL)
        far = education_score([(FacilityCategory.HIGH_SCHOOL, 900.0)], CAL)
        assert far < near

    def test_beyond_decay_contributes_nothing(self):
        base = education_score([(FacilityCategory.PRIMARY_SCHOOL, 100.0)], CAL)
        extra = education_score(
            [(FacilityCategory.PRIMARY_SCHOOL, 100.0),
             (FacilityCategory.HIGH_SCHOOL, 2000.0)], CAL)
        assert extra == pytest.approx(base)

    @given(st.lists(st.tuples(
        st.sampled_from([FacilityCategory.KINDERGARTEN, FacilityCategory.PRIMARY_SCHOOL,
                         FacilityCategory.HIGH_SCHOOL]),
        st.floats(min_value=0, max_value=5000)), max_size=30))
    def test_always_in_range(self, schools):
        assert 0.0 <= education_score(schools, CAL) <= 100.0


class TestMetroScore:
    def test_inside_plateau(self):
        assert metro_score(150.0) == 100.0

    def test_midpoint(self):
        assert metro_score(600.0) == pytest.approx(50.0)

    def test_absent_zero(self):
        assert metro_score(None) == 0.0

    def test_continuity_at_bounds(self):
        assert metro_score(200.0) == pytest.approx(100.0)
        assert metro_score(200.0 + 1e-9) == pytest.approx(100.0, abs=1e-6)
        assert metro_score(1000.0) == 0.0
        assert metro_score(1000.0 - 1e-9) == pytest.approx(0.0, abs=1e-6)

    @given(st.floats(min_value=0, max_value=5000))
    def test_range_and_monotone(self, d):
        assert 0.0 <= metro_score(d) <= 100.0
        assert metro_score(d) >= metro_score(d + 10.0)


class TestSurfaceScore:
    def test_zero_routes_zero(self):
        assert surface_score(0, CAL) == 0.0

    def test_eleven_routes_in_band(self):
        assert surface_score(11, CAL) == pytest.approx(88.0, abs=3.0)

    def test_eight_routes_near_75(self):
        assert surface_score(8, CAL) == pytest.approx(75.0, abs=3.0)

    def test_concave_growth(self):
        assert surface_score(4, CAL) < surface_score(9, CAL)
        assert (surface_score(9, CAL) - surface_score(8, CAL)
                < surface_score(2, CAL) - surface_score(1, CAL))

    @given(st.integers(min_value=0, max_value=500))
    def test_always_in_range(self, n):
        assert 0.0 <= surface_score(n, CAL) <= 100.0
