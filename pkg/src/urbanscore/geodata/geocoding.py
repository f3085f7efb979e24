"""Forward and reverse geocoding against an OSM-style search endpoint."""

from __future__ import annotations

from typing import Any

from ..errors import InvalidRequest, MalformedResponse, NotFound
from ..geo import GeoPoint
from .transport import OP_GEOCODE_FORWARD, OP_GEOCODE_REVERSE, Transport
from .types import ResolvedAddress


def validate_query(query: str) -> str:
    query = (query or "").strip()
    if not query:
        raise InvalidRequest("geocode query must be non-empty")
    return query


def parse_forward(body: Any, query: str) -> ResolvedAddress:
    if not isinstance(body, list):
        raise MalformedResponse("forward geocode body must be a JSON array")
    if not body:
        raise NotFound(f"no geocoding result for {query!r}")
    return _parse_place(body[0], query)


def parse_reverse(body: Any, point: GeoPoint) -> ResolvedAddress:
    if not isinstance(body, dict):
        raise MalformedResponse("reverse geocode body must be a JSON object")
    if "error" in body:
        raise NotFound(f"no address at ({point.lat}, {point.lon})")
    return _parse_place(body, f"{point.lat},{point.lon}")


def _parse_place(place: dict, source_query: str) -> ResolvedAddress:
    try:
        lat = float(place["lat"])
        lon = float(place["lon"])
        display_name = str(place["display_name"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedResponse(f"geocode result missing fields: {exc}") from exc
    address = place.get("address") or {}
    hierarchy = {str(k): str(v) for k, v in address.items()}
    try:
        return ResolvedAddress(
            point=GeoPoint(lat, lon),
            display_name=display_name,
            hierarchy=hierarchy,
            source_query=source_query,
        )
    except ValueError as exc:
        raise MalformedResponse(str(exc)) from exc


def geocode_forward(transport: Transport, query: str) -> ResolvedAddress:
    """Resolve free-form address text to a point plus address hierarchy."""
    query = validate_query(query)
    body = transport.call(OP_GEOCODE_FORWARD, {"query": query})
    return parse_forward(body, query)


def geocode_reverse(transport: Transport, point: GeoPoint) -> ResolvedAddress:
    """Resolve a coordinate to the nearest structured address."""
    body = transport.call(OP_GEOCODE_REVERSE, {"lat": point.lat, "lon": point.lon})
    return parse_reverse(body, point)
