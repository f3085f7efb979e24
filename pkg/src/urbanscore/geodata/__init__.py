"""Provider clients, wire-format parsing and facility post-processing."""

from .air import fetch_air_history, pollutant_means
from .facilities import (
    classify_education,
    dedupe_facilities,
    fetch_facilities,
    summarize_facilities,
)
from .geocoding import geocode_forward, geocode_reverse
from .traffic import fetch_traffic
from .transport import FixtureTransport, HttpTransport, Transport, USER_AGENT
from .types import (
    Facility,
    FacilityCategory,
    FacilitySummary,
    Pollutant,
    PollutantSeries,
    ResolvedAddress,
    TrafficSample,
)

__all__ = [
    "FixtureTransport",
    "HttpTransport",
    "Transport",
    "USER_AGENT",
    "Facility",
    "FacilityCategory",
    "FacilitySummary",
    "Pollutant",
    "PollutantSeries",
    "ResolvedAddress",
    "TrafficSample",
    "classify_education",
    "dedupe_facilities",
    "fetch_air_history",
    "fetch_facilities",
    "fetch_traffic",
    "geocode_forward",
    "geocode_reverse",
    "pollutant_means",
    "summarize_facilities",
]
