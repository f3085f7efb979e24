"""Statistics aggregation over an engineered corpus reproducing the headline
usage figures: 58 % of queries in the top ten districts, 52/31/17 purposes."""

import pytest

from urbanscore.geo import GeoPoint
from urbanscore.persistence import Purpose, SqliteStore
from urbanscore.scoring.weights import SubScores
from urbanscore.service.stats import compute_stats

SUB = SubScores(70, 70, 70, 70, 70, 70)

# 100 queries: ten districts totalling 58, the rest spread thinly
TOP_COUNTS = [13, 9, 7, 6, 5, 5, 4, 3, 3, 3]  # = 58
TAIL_COUNTS = [2] * 14 + [1] * 14  # = 42


@pytest.fixture
def corpus_store(tmp_path):
    store = SqliteStore(tmp_path / "stats.db")
    lat = 44.0
    for rank, count in enumerate(TOP_COUNTS):
        lat += 0.001
        loc = store.upsert_location(GeoPoint(lat, 26.0), f"T{rank}",
                                    district=f"District T{rank}")
        for _ in range(count):
            store.save_score(loc.id, SUB, 70, "h")
    for rank, count in enumerate(TAIL_COUNTS):
        lat += 0.001
        loc = store.upsert_location(GeoPoint(lat, 26.0), f"B{rank}",
                                    district=f"District B{rank}")
        for _ in range(count):
            store.save_score(loc.id, SUB, 70, "h")
    store.flush()

    weights = (0.1, 0.1, 0.3, 0.2, 0.15, 0.15)
    for i in range(52):
        store.save_profile(f"res-{i}", weights, False, Purpose.RESIDENCE)
    for i in range(31):
        store.save_profile(f"inv-{i}", weights, False, Purpose.INVESTMENT)
    for i in range(17):
        store.save_profile(f"short-{i}", weights, False, Purpose.SHORT_TERM)
    yield store
    store.close()


class TestStats:
    def test_top_ten_share_is_58_percent(self, corpus_store):
        report = compute_stats(corpus_store)
        assert len(report.top_districts) == 10
        assert sum(share for _, share in report.top_districts) == pytest.approx(0.58)
        assert report.top_districts[0] == ("District T0", 0.13)

    def test_purpose_split_exact(self, corpus_store):
        report = compute_stats(corpus_store)
        assert report.purpose_distribution == {
            "residence": pytest.approx(0.52),
            "investment": pytest.approx(0.31),
            "short_term": pytest.approx(0.17),
        }

    def test_amenity_preference_order_from_mean_weights(self, corpus_store):
        report = compute_stats(corpus_store)
        assert report.amenity_preference_order == (
            "lifestyle", "education", "metro", "surface", "air", "traffic"
        )

    def test_empty_store_empty_report(self, tmp_path):
        store = SqliteStore(tmp_path / "empty.db")
        try:
            report = compute_stats(store)
            assert report.top_districts == ()
            assert report.purpose_distribution == {}
            assert report.amenity_preference_order == ()
        finally:
            store.close()

    def test_shares_sum_at_most_one(self, corpus_store):
        report = compute_stats(corpus_store)
        assert sum(s for _, s in report.top_districts) <= 1.0
        assert sum(report.purpose_distribution.values()) <= 1.0 + 1e-9
