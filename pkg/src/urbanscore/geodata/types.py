"""Domain types for the four external feeds."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum

from ..geo import GeoPoint


class FacilityCategory(str, Enum):
    SUPERMARKET = "supermarket"
    RESTAURANT = "restaurant"
    FAST_FOOD = "fast_food"
    PARK = "park"
    KINDERGARTEN = "kindergarten"
    PRIMARY_SCHOOL = "primary_school"
    HIGH_SCHOOL = "high_school"
    METRO_ENTRANCE = "metro_entrance"
    BUS_STOP = "bus_stop"
    TRAM_STOP = "tram_stop"


# Categories feeding the lifestyle sub-score (count + mix entropy).
LIFESTYLE_CATEGORIES = (
    FacilityCategory.SUPERMARKET,
    FacilityCategory.RESTAURANT,
    FacilityCategory.FAST_FOOD,
    FacilityCategory.PARK,
)

SCHOOL_CATEGORIES = (
    FacilityCategory.KINDERGARTEN,
    FacilityCategory.PRIMARY_SCHOOL,
    FacilityCategory.HIGH_SCHOOL,
)

TRANSPORT_STOP_CATEGORIES = (FacilityCategory.BUS_STOP, FacilityCategory.TRAM_STOP)


class Pollutant(str, Enum):
    PM25 = "pm2_5"
    PM10 = "pm10"
    CO = "co"
    NO2 = "no2"
    O3 = "o3"
    NH3 = "nh3"


@dataclass(frozen=True)
class ResolvedAddress:
    point: GeoPoint
    display_name: str
    hierarchy: dict[str, str]  # house number -> ... -> country, provider order kept
    source_query: str

    def __post_init__(self) -> None:
        if not self.display_name:
            raise ValueError("display_name must be non-empty")


@dataclass(frozen=True)
class Facility:
    category: FacilityCategory
    name: str
    point: GeoPoint
    tags: dict[str, str] = field(default_factory=dict)
    route_refs: frozenset[str] = frozenset()
    distance_m: float = 0.0

    def __post_init__(self) -> None:
        if self.distance_m < 0:
            raise ValueError("distance_m must be >= 0")
        if self.route_refs and self.category not in TRANSPORT_STOP_CATEGORIES:
            raise ValueError("route_refs only valid on surface-transport stops")


@dataclass(frozen=True)
class FacilitySummary:
    counts: dict[FacilityCategory, int]
    entropy_nats: float
    routes: tuple[str, ...]  # deduplicated, sorted lexicographically
    nearest_metro_m: float | None
    schools: tuple[tuple[FacilityCategory, float], ...]

    def count(self, category: FacilityCategory) -> int:
        return self.counts.get(category, 0)


@dataclass(frozen=True)
class TrafficSample:
    point: GeoPoint
    current_speed: float  # km/h
    free_flow_speed: float  # km/h
    current_travel_time: float  # s
    free_flow_travel_time: float  # s
    confidence: float

    def __post_init__(self) -> None:
        if self.free_flow_speed <= 0 or self.current_travel_time <= 0:
            raise ValueError("free_flow_speed and current_travel_time must be > 0")
        if self.current_speed <= 0 or self.free_flow_travel_time <= 0:
            raise ValueError("speeds and travel times must be > 0")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must be in [0, 1]")


@dataclass(frozen=True)
class PollutantSeries:
    pollutant: Pollutant
    readings: tuple[tuple[datetime, float], ...]  # (UTC timestamp, µg/m³)
    window_days: int

    def __post_init__(self) -> None:
        prev = None
        for ts, conc in self.readings:
            if conc < 0:
                raise ValueError("concentrations must be >= 0")
            if prev is not None and ts <= prev:
                raise ValueError("timestamps must be strictly increasing")
            prev = ts

    def mean(self) -> float | None:
        """Mean concentration over present readings; None when the series is empty."""
        if not self.readings:
            return None
        return sum(c for _, c in self.readings) / len(self.readings)
