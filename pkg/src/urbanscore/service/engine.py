"""Evaluation orchestrator: geocode, parallel fan-out, score, persist, explain."""

from __future__ import annotations

import logging
import time
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable

logger = logging.getLogger("urbanscore.engine")

from ..errors import (
    GeocodeFailed,
    InvalidRequest,
    MalformedResponse,
    NoData,
    NoSegment,
    NotFound,
    ProviderUnavailable,
    Unavailable,
)
from ..explain import ExplanationService, build_payload, profile_hash
from ..geo import GeoPoint, sample_points
from ..geodata import air as air_feed
from ..geodata import facilities as facility_feed
from ..geodata import geocoding, traffic as traffic_feed
from ..geodata.transport import (
    OP_AIR_HISTORY,
    OP_FACILITIES_RADIUS,
    OP_GEOCODE_FORWARD,
    OP_GEOCODE_REVERSE,
    OP_TRAFFIC_FLOW,
)
from ..geodata.types import FacilitySummary, ResolvedAddress
from ..persistence.base import Store
from ..resilience.cache import Freshness
from ..resilience.wrapper import call_with_freshness
from ..scoring import (
    CalibrationConstants,
    PollutantModel,
    PreferenceProfile,
    SubScores,
    aggregate as aggregate_score,
    air_score,
    education_score,
    lifestyle_score,
    metro_score,
    normalize_weights,
    surface_score,
    traffic_score,
)
from ..scoring.weights import SUBSCORE_KEYS
from .config import AppConfig

FEEDS = ("geocode", "facilities", "traffic", "air")

# address hierarchy components tried in order when extracting a district
_DISTRICT_KEYS = ("suburb", "city_district", "district", "borough", "city", "town", "village")


@dataclass(frozen=True)
class EvaluateRequest:
    address: str | None = None
    point: GeoPoint | None = None
    radius_m: int = 800
    profile: PreferenceProfile | None = None
    user_id: str | None = None
    locale: str | None = None

    def __post_init__(self) -> None:
        if (self.address is None) == (self.point is None):
            raise InvalidRequest("exactly one of address/point must be given")
        facility_feed.validate_radius(self.radius_m)


@dataclass(frozen=True)
class ScoreReport:
    location: ResolvedAddress
    location_id: int
    sub_scores: SubScores
    aggregate: int
    weights: tuple[float, ...]
    profile_hash: str
    degraded: frozenset[str]
    facilities: FacilitySummary
    explanation: Any
    timings_ms: dict[str, float]
    feed_freshness: dict[str, str]


@dataclass
class _FeedOutcome:
    value: Any = None
    freshness: list[Freshness] = field(default_factory=list)
    failed: bool = False

    def worst_freshness(self) -> str:
        order = [Freshness.LIVE, Freshness.CACHED, Freshness.STALE]
        worst = Freshness.LIVE
        for item in self.freshness:
            if order.index(item) > order.index(worst):
                worst = item
        return worst.value

    @property
    def stale(self) -> bool:
        return Freshness.STALE in self.freshness


class EvaluationEngine:
    """Runs evaluations concurrently; provider calls within one evaluation are
    fanned out on a shared worker pool and joined before scoring."""

    def __init__(
        self,
        transport,
        store: Store,
        config: AppConfig | None = None,
        explain_service: ExplanationService | None = None,
        clock: Callable[[], float] = time.monotonic,
        compute_delay_s: float = 0.0,  # synthetic compute cost injected by benchmarks
    ):
        self.transport = transport
        self.store = store
        self.config = config or AppConfig()
        self.explain_service = explain_service or ExplanationService()
        self._clock = clock
        self._compute_delay_s = compute_delay_s
        self._executor = ThreadPoolExecutor(
            max_workers=self.config.service.io_threads, thread_name_prefix="fanout"
        )

    # -- orchestration -------------------------------------------------------

    def evaluate(self, request: EvaluateRequest) -> ScoreReport:
        timings: dict[str, float] = {}
        freshness: dict[str, str] = {}
        degraded: set[str] = set()
        started = self._clock()

        # 1. geocode; on failure nothing else is attempted
        t0 = self._clock()
        try:
            address, geo_fresh = self._geocode(request)
        except (NotFound, Unavailable, ProviderUnavailable, MalformedResponse) as exc:
            raise GeocodeFailed(str(exc)) from exc
        timings["geocode_ms"] = self._ms_since(t0)
        freshness["geocode"] = geo_fresh.value
        center = address.point

        # 2. concurrent fan-out: facilities, five traffic samples, air history
        t0 = self._clock()
        facilities_future = self._executor.submit(self._fetch_facilities, center, request.radius_m)
        traffic_futures = [
            self._executor.submit(self._fetch_traffic_sample, point)
            for point in sample_points(center)
        ]
        air_future = self._executor.submit(self._fetch_air, center)

        facilities_outcome, facilities_ms = facilities_future.result()
        air_outcome, air_ms = air_future.result()
        traffic_results = [f.result() for f in traffic_futures]
        timings["fanout_ms"] = self._ms_since(t0)
        timings["facilities_ms"] = facilities_ms
        timings["air_ms"] = air_ms
        timings["traffic_ms"] = max(ms for _, ms in traffic_results)

        # 3. sub-scores
        t0 = self._clock()
        report_values = self._compute_scores(
            facilities_outcome, traffic_results, air_outcome, degraded, freshness
        )
        summary, sub_scores, facility_list = report_values

        profile = self._resolve_profile(request)
        weights = normalize_weights(profile)
        total = aggregate_score(sub_scores, weights)
        if self._compute_delay_s > 0:
            time.sleep(self._compute_delay_s)
        timings["compute_ms"] = self._ms_since(t0)

        # 4. persist
        t0 = self._clock()
        normalized_profile = PreferenceProfile(
            weights=weights, traffic_sensitive=profile.traffic_sensitive
        )
        digest = profile_hash(normalized_profile)
        location = self.store.upsert_location(
            center, address.display_name, district=_district(address)
        )
        self.store.save_score(location.id, sub_scores, total, digest)
        timings["persist_ms"] = self._ms_since(t0)

        # 5. explanation
        t0 = self._clock()
        payload = build_payload(
            sub_scores,
            total,
            summary,
            facility_list,
            radius_m=request.radius_m,
            locale=request.locale or self.config.service.locale,
        )
        explanation = self.explain_service.get_explanation(location.id, payload, normalized_profile)
        timings["explain_ms"] = self._ms_since(t0)

        timings["total_ms"] = self._ms_since(started)
        logger.info(
            "evaluation %s",
            {
                "location_id": location.id,
                "aggregate": total,
                "degraded": sorted(degraded),
                "freshness": freshness,
                "total_ms": round(timings["total_ms"], 3),
            },
        )
        return ScoreReport(
            location=address,
            location_id=location.id,
            sub_scores=sub_scores,
            aggregate=total,
            weights=weights,
            profile_hash=digest,
            degraded=frozenset(degraded),
            facilities=summary,
            explanation=explanation,
            timings_ms=timings,
            feed_freshness=freshness,
        )

    def close(self) -> None:
        self._executor.shutdown(wait=False)

    # -- feed calls ----------------------------------------------------------

    def _geocode(self, request: EvaluateRequest):
        if request.address is not None:
            query = geocoding.validate_query(request.address)
            result = call_with_freshness(self.transport, OP_GEOCODE_FORWARD, {"query": query})
            return geocoding.parse_forward(result.body, query), result.freshness
        point = request.point
        result = call_with_freshness(
            self.transport, OP_GEOCODE_REVERSE, {"lat": point.lat, "lon": point.lon}
        )
        return geocoding.parse_reverse(result.body, point), result.freshness

    def _fetch_facilities(self, center: GeoPoint, radius_m: int):
        t0 = self._clock()
        outcome = _FeedOutcome()
        try:
            result = call_with_freshness(
                self.transport,
                OP_FACILITIES_RADIUS,
                {"lat": center.lat, "lon": center.lon, "radius_m": int(radius_m)},
            )
            outcome.freshness.append(result.freshness)
            raw = facility_feed.parse_elements(
                result.body, center, radius_m, self.config.education_keywords
            )
            outcome.value = facility_feed.dedupe_facilities(raw)
        except (ProviderUnavailable, Unavailable, MalformedResponse):
            outcome.failed = True
        return outcome, self._ms_since(t0)

    def _fetch_traffic_sample(self, point: GeoPoint):
        t0 = self._clock()
        outcome = _FeedOutcome()
        try:
            result = call_with_freshness(
                self.transport,
                OP_TRAFFIC_FLOW,
                {"lat": point.lat, "lon": point.lon, "zoom": traffic_feed.FLOW_ZOOM},
            )
            outcome.freshness.append(result.freshness)
            outcome.value = traffic_feed.parse_flow(result.body, point)
        except NoSegment:
            outcome.value = None  # no road nearby: excluded from the mean
        except (ProviderUnavailable, Unavailable, MalformedResponse):
            outcome.failed = True
        return outcome, self._ms_since(t0)

    def _fetch_air(self, center: GeoPoint):
        t0 = self._clock()
        outcome = _FeedOutcome()
        try:
            result = call_with_freshness(
                self.transport,
                OP_AIR_HISTORY,
                {"lat": center.lat, "lon": center.lon, "window_days": air_feed.DEFAULT_WINDOW_DAYS},
            )
            outcome.freshness.append(result.freshness)
            series = air_feed.parse_history(result.body, air_feed.DEFAULT_WINDOW_DAYS)
            outcome.value = air_feed.pollutant_means(series)
        except (ProviderUnavailable, Unavailable, MalformedResponse):
            outcome.failed = True
        return outcome, self._ms_since(t0)

    # -- scoring -------------------------------------------------------------

    def _compute_scores(self, facilities_outcome, traffic_results, air_outcome,
                        degraded: set, freshness: dict):
        cal: CalibrationConstants = self.config.calibration
        model: PollutantModel = self.config.pollutants

        facility_list = facilities_outcome.value or []
        summary = facility_feed.summarize_facilities(facility_list)
        if facilities_outcome.failed or facilities_outcome.stale:
            degraded.add("facilities")
        freshness["facilities"] = facilities_outcome.worst_freshness()

        traffic_outcomes = [outcome for outcome, _ in traffic_results]
        samples = [o.value for o in traffic_outcomes if not o.failed]
        traffic_freshness = [f for o in traffic_outcomes for f in o.freshness]
        if traffic_freshness:
            order = [Freshness.LIVE, Freshness.CACHED, Freshness.STALE]
            freshness["traffic"] = max(traffic_freshness, key=order.index).value
        try:
            traffic_value = traffic_score(samples)
        except NoData:
            traffic_value = 0.0
            degraded.add("traffic")
        if any(o.failed for o in traffic_outcomes) or any(o.stale for o in traffic_outcomes):
            degraded.add("traffic")

        if air_outcome.failed or not air_outcome.value:
            air_value = 0.0
            degraded.add("air")
        else:
            air_value = air_score(air_outcome.value, model)
            if air_outcome.stale:
                degraded.add("air")
        freshness["air"] = air_outcome.worst_freshness()

        lifestyle_counts = {c: summary.counts[c] for c in facility_feed.LIFESTYLE_CATEGORIES}
        sub_scores = SubScores(
            air=air_value,
            traffic=traffic_value,
            lifestyle=lifestyle_score(lifestyle_counts, cal),
            education=education_score(summary.schools, cal),
            metro=metro_score(summary.nearest_metro_m, cal),
            surface=surface_score(len(summary.routes), cal),
        )
        return summary, sub_scores, facility_list

    # -- helpers -------------------------------------------------------------

    def _resolve_profile(self, request: EvaluateRequest) -> PreferenceProfile:
        if request.profile is not None:
            return request.profile
        if request.user_id is not None:
            record = self.store.load_profile(request.user_id)
            return PreferenceProfile(
                weights=tuple(record.weights), traffic_sensitive=record.traffic_sensitive
            )
        return PreferenceProfile()

    def _ms_since(self, t0: float) -> float:
        return (self._clock() - t0) * 1000.0


def _district(address: ResolvedAddress) -> str | None:
    for key in _DISTRICT_KEYS:
        value = address.hierarchy.get(key)
        if value:
            return value
    return None
