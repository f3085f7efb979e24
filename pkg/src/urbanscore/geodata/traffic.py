"""Segment-level traffic metrics from a flow-segment endpoint (zoom fixed at 10)."""

from __future__ import annotations

from typing import Any

from ..errors import MalformedResponse, NoSegment
from ..geo import GeoPoint
from .transport import OP_TRAFFIC_FLOW, Transport
from .types import TrafficSample

FLOW_ZOOM = 10

_FIELDS = ("currentSpeed", "freeFlowSpeed", "currentTravelTime", "freeFlowTravelTime")


def parse_flow(body: Any, point: GeoPoint) -> TrafficSample:
    if not isinstance(body, dict):
        raise MalformedResponse("traffic body must be a JSON object")
    segment = body.get("flowSegmentData")
    if not segment:
        raise NoSegment(f"no road segment near ({point.lat}, {point.lon})")
    values = {}
    for field in _FIELDS:
        raw = segment.get(field)
        if not isinstance(raw, (int, float)):
            raise MalformedResponse(f"traffic segment missing numeric {field}")
        values[field] = float(raw)
    confidence = segment.get("confidence", 1.0)
    if not isinstance(confidence, (int, float)):
        raise MalformedResponse("traffic confidence must be numeric")
    try:
        return TrafficSample(
            point=point,
            current_speed=values["currentSpeed"],
            free_flow_speed=values["freeFlowSpeed"],
            current_travel_time=values["currentTravelTime"],
            free_flow_travel_time=values["freeFlowTravelTime"],
            confidence=float(confidence),
        )
    except ValueError as exc:
        raise MalformedResponse(str(exc)) from exc


def fetch_traffic(transport: Transport, point: GeoPoint) -> TrafficSample:
    """Metrics for the road segment nearest to ``point``."""
    body = transport.call(
        OP_TRAFFIC_FLOW, {"lat": point.lat, "lon": point.lon, "zoom": FLOW_ZOOM}
    )
    return parse_flow(body, point)
