"""Usage statistics aggregated from persisted scores and profiles."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime

from ..persistence.base import Store
from ..scoring.weights import SUBSCORE_KEYS

TOP_DISTRICT_LIMIT = 10


@dataclass(frozen=True)
class StatsReport:
    top_districts: tuple[tuple[str, float], ...]  # (district, query share)
    amenity_preference_order: tuple[str, ...]
    purpose_distribution: dict[str, float]


def compute_stats(store: Store, since: datetime | None = None,
                  until: datetime | None = None) -> StatsReport:
    """District shares from score history, preference order and declared
    purposes from stored profiles. Empty data yields an empty report."""
    scores = store.iter_scores(since, until)
    district_counts: dict[str, int] = {}
    location_district: dict[int, str | None] = {}
    for record in scores:
        district = location_district.get(record.location_id, _MISSING)
        if district is _MISSING:
            location = store.get_location(record.location_id)
            district = location.district
            location_district[record.location_id] = district
        if district:
            district_counts[district] = district_counts.get(district, 0) + 1

    total_queries = len(scores)
    ranked = sorted(district_counts.items(), key=lambda kv: (-kv[1], kv[0]))
    top_districts = tuple(
        (district, count / total_queries)
        for district, count in ranked[:TOP_DISTRICT_LIMIT]
    )

    profiles = store.iter_profiles()
    purpose_distribution: dict[str, float] = {}
    amenity_order: tuple[str, ...] = ()
    if profiles:
        for record in profiles:
            key = record.declared_purpose.value
            purpose_distribution[key] = purpose_distribution.get(key, 0.0) + 1
        purpose_distribution = {
            k: v / len(profiles) for k, v in purpose_distribution.items()
        }
        mean_weights = [
            sum(p.weights[i] for p in profiles) / len(profiles)
            for i in range(len(SUBSCORE_KEYS))
        ]
        order = sorted(range(len(SUBSCORE_KEYS)), key=lambda i: -mean_weights[i])
        amenity_order = tuple(SUBSCORE_KEYS[i] for i in order)

    return StatsReport(
        top_districts=top_districts,
        amenity_preference_order=amenity_order,
        purpose_distribution=purpose_distribution,
    )


_MISSING = object()
