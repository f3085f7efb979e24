"""Facility extraction: batched radius query, dedup, classification, summary."""

from __future__ import annotations

import re
import unicodedata
from typing import Any, Iterable, Sequence

from ..errors import InvalidRequest, MalformedResponse
from ..geo import GeoPoint, haversine_m
from .transport import OP_FACILITIES_RADIUS, Transport
from .types import (
    Facility,
    FacilityCategory,
    FacilitySummary,
    LIFESTYLE_CATEGORIES,
    SCHOOL_CATEGORIES,
    TRANSPORT_STOP_CATEGORIES,
)

MIN_RADIUS_M = 100
MAX_RADIUS_M = 5000

# Romanian secondary-education markers, matched case- and diacritic-insensitively
# against name/operator. Extend via configuration for other locales.
HIGH_SCHOOL_KEYWORDS = ("liceu", "liceul", "colegiul", "colegiu national")

_WS = re.compile(r"\s+")


def validate_radius(radius_m: float) -> int:
    if not MIN_RADIUS_M <= radius_m <= MAX_RADIUS_M:
        raise InvalidRequest(
            f"radius_m must be within [{MIN_RADIUS_M}, {MAX_RADIUS_M}], got {radius_m}"
        )
    return int(radius_m)


def normalize_name(name: str) -> str:
    """Trim, casefold and collapse internal whitespace (dedup identity)."""
    return _WS.sub(" ", (name or "").strip()).casefold()


def _fold_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def _match_keywords(text: str, keywords: Sequence[str]) -> bool:
    folded = _fold_diacritics(normalize_name(text))
    return any(kw in folded for kw in keywords)


def _parse_int_tokens(raw: str) -> list[int]:
    return [int(tok) for tok in re.findall(r"\d+", raw or "")]


def classify_education(facility: Facility, keywords: Sequence[str] = HIGH_SCHOOL_KEYWORDS) -> FacilityCategory:
    """Kindergarten / primary / high-school split for a school-like facility.

    High school when `isced:level` includes a level >= 3, `grades` spans grade 9
    or above, or the name/operator carries a secondary-education keyword;
    otherwise primary. Kindergarten tagging wins before that rule applies.
    """
    tags = facility.tags
    if facility.category == FacilityCategory.KINDERGARTEN or tags.get("amenity") == "kindergarten":
        return FacilityCategory.KINDERGARTEN
    return _classify_school(tags, facility.name, keywords)


def _classify_school(tags: dict, name: str, keywords: Sequence[str]) -> FacilityCategory:
    levels = _parse_int_tokens(tags.get("isced:level", ""))
    if any(level >= 3 for level in levels):
        return FacilityCategory.HIGH_SCHOOL
    grades = _parse_int_tokens(tags.get("grades", ""))
    if grades and max(grades) >= 9:
        return FacilityCategory.HIGH_SCHOOL
    for text in (name, tags.get("operator", "")):
        if text and _match_keywords(text, keywords):
            return FacilityCategory.HIGH_SCHOOL
    return FacilityCategory.PRIMARY_SCHOOL


def categorize(tags: dict, name: str, keywords: Sequence[str] = HIGH_SCHOOL_KEYWORDS) -> FacilityCategory | None:
    """Map raw source tags to a facility category; None when out of scope."""
    if tags.get("shop") == "supermarket":
        return FacilityCategory.SUPERMARKET
    amenity = tags.get("amenity")
    if amenity == "restaurant":
        return FacilityCategory.RESTAURANT
    if amenity == "fast_food":
        return FacilityCategory.FAST_FOOD
    if tags.get("leisure") == "park":
        return FacilityCategory.PARK
    if amenity == "kindergarten":
        return FacilityCategory.KINDERGARTEN
    if amenity == "school":
        return _classify_school(tags, name, keywords)
    railway = tags.get("railway")
    if railway == "subway_entrance":
        return FacilityCategory.METRO_ENTRANCE
    if tags.get("highway") == "bus_stop":
        return FacilityCategory.BUS_STOP
    if railway == "tram_stop":
        return FacilityCategory.TRAM_STOP
    return None


def _route_refs(tags: dict) -> frozenset[str]:
    raw = tags.get("route_ref", "")
    return frozenset(tok.strip() for tok in re.split(r"[;,]", raw) if tok.strip())


def parse_elements(
    body: Any,
    center: GeoPoint,
    radius_m: float,
    keywords: Sequence[str] = HIGH_SCHOOL_KEYWORDS,
) -> list[Facility]:
    """Raw bulk-query body -> categorized facilities within the circular radius."""
    if not isinstance(body, dict) or not isinstance(body.get("elements"), list):
        raise MalformedResponse("facilities body must carry an 'elements' array")
    facilities: list[Facility] = []
    for element in body["elements"]:
        tags = element.get("tags") or {}
        if element.get("type") == "node":
            lat, lon = element.get("lat"), element.get("lon")
        else:
            centre = element.get("center") or {}
            lat, lon = centre.get("lat"), centre.get("lon")
        if lat is None or lon is None:
            continue
        name = str(tags.get("name", ""))
        category = categorize(tags, name, keywords)
        if category is None:
            continue
        try:
            point = GeoPoint(float(lat), float(lon))
        except ValueError:
            continue
        distance = haversine_m(center, point)
        if distance > radius_m:
            continue  # circular post-filter regardless of the query shape
        routes = _route_refs(tags) if category in TRANSPORT_STOP_CATEGORIES else frozenset()
        facilities.append(
            Facility(
                category=category,
                name=name,
                point=point,
                tags={str(k): str(v) for k, v in tags.items()},
                route_refs=routes,
                distance_m=distance,
            )
        )
    return facilities


def fetch_facilities(
    transport: Transport,
    center: GeoPoint,
    radius_m: float,
    keywords: Sequence[str] = HIGH_SCHOOL_KEYWORDS,
) -> list[Facility]:
    """One batched facilities query around ``center``; results categorized."""
    radius = validate_radius(radius_m)
    body = transport.call(
        OP_FACILITIES_RADIUS, {"lat": center.lat, "lon": center.lon, "radius_m": radius}
    )
    return parse_elements(body, center, radius, keywords)


def dedupe_facilities(facilities: Iterable[Facility]) -> list[Facility]:
    """Keep the first facility per (normalized name, lat, lon) triple.

    Coordinates are rounded to 6 decimals (~0.11 m), so re-exports of the same
    node merge while genuinely distinct neighbours survive. Order is preserved.
    """
    seen: set[tuple[str, float, float]] = set()
    unique: list[Facility] = []
    for facility in facilities:
        key = (normalize_name(facility.name), *facility.point.rounded())
        if key in seen:
            continue
        seen.add(key)
        unique.append(facility)
    return unique


def summarize_facilities(
    facilities: Sequence[Facility], center: GeoPoint | None = None
) -> FacilitySummary:
    """Counts, lifestyle-mix entropy, sorted route set, metro and school digests.

    Distances come from each facility's precomputed distance_m; passing a
    center recomputes them, for summaries over lists fetched elsewhere.
    """
    from ..scoring.subscores import shannon_entropy

    def dist(facility: Facility) -> float:
        if center is not None:
            return haversine_m(center, facility.point)
        return facility.distance_m

    counts = {category: 0 for category in FacilityCategory}
    routes: set[str] = set()
    nearest_metro: float | None = None
    schools: list[tuple[FacilityCategory, float]] = []

    for facility in facilities:
        counts[facility.category] += 1
        routes.update(facility.route_refs)
        if facility.category == FacilityCategory.METRO_ENTRANCE:
            if nearest_metro is None or dist(facility) < nearest_metro:
                nearest_metro = dist(facility)
        if facility.category in SCHOOL_CATEGORIES:
            schools.append((facility.category, dist(facility)))

    lifestyle_counts = {cat: counts[cat] for cat in LIFESTYLE_CATEGORIES}
    schools.sort(key=lambda item: item[1])
    return FacilitySummary(
        counts=counts,
        entropy_nats=shannon_entropy(lifestyle_counts),
        routes=tuple(sorted(routes)),
        nearest_metro_m=nearest_metro,
        schools=tuple(schools),
    )
