"""Great-circle geometry: points, distances, bearings, traffic sample layout."""

from __future__ import annotations

import math
from dataclasses import dataclass

EARTH_RADIUS_M = 6_371_000.0

# The four intercardinal offsets used when sampling road segments around an
# address. 550 m puts the probes on the surrounding arterials rather than on
# the block the address sits on.
TRAFFIC_OFFSET_BEARINGS_DEG = (45.0, 135.0, 225.0, 315.0)
TRAFFIC_OFFSET_DISTANCE_M = 550.0

COORD_DECIMALS = 6  # ~0.11 m; used for dedup and canonical request params


@dataclass(frozen=True)
class GeoPoint:
    """WGS84 coordinate pair, degrees."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError("coordinates must be finite")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat}")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude out of range: {self.lon}")

    def rounded(self) -> tuple[float, float]:
        return (round(self.lat, COORD_DECIMALS), round(self.lon, COORD_DECIMALS))


def haversine_m(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance between two points in meters."""
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = math.radians(b.lat - a.lat)
    dlam = math.radians(b.lon - a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(min(1.0, math.sqrt(h)))


def destination(origin: GeoPoint, bearing_deg: float, distance_m: float) -> GeoPoint:
    """Point reached from ``origin`` travelling ``distance_m`` along a great circle."""
    delta = distance_m / EARTH_RADIUS_M
    theta = math.radians(bearing_deg)
    phi1 = math.radians(origin.lat)
    lam1 = math.radians(origin.lon)

    sin_phi2 = math.sin(phi1) * math.cos(delta) + math.cos(phi1) * math.sin(delta) * math.cos(theta)
    phi2 = math.asin(max(-1.0, min(1.0, sin_phi2)))
    lam2 = lam1 + math.atan2(
        math.sin(theta) * math.sin(delta) * math.cos(phi1),
        math.cos(delta) - math.sin(phi1) * sin_phi2,
    )
    lon = math.degrees(lam2)
    # wrap to [-180, 180]
    lon = (lon + 540.0) % 360.0 - 180.0
    return GeoPoint(math.degrees(phi2), lon)


def sample_points(center: GeoPoint) -> list[GeoPoint]:
    """Center plus four 550 m intercardinal offsets, in a fixed order."""
    points = [center]
    for bearing in TRAFFIC_OFFSET_BEARINGS_DEG:
        points.append(destination(center, bearing, TRAFFIC_OFFSET_DISTANCE_M))
    return points
