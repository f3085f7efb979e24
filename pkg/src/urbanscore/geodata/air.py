"""Hourly air-pollution history (rolling window, six pollutants)."""

from __future__ import annotations

from datetime import datetime, timezone
from typing import Any

from ..errors import InvalidRequest, MalformedResponse
from ..geo import GeoPoint
from .transport import OP_AIR_HISTORY, Transport
from .types import Pollutant, PollutantSeries

DEFAULT_WINDOW_DAYS = 90


def validate_window(window_days: int) -> int:
    if not 1 <= int(window_days) <= 365:
        raise InvalidRequest(f"window_days must be in [1, 365], got {window_days}")
    return int(window_days)


def parse_history(body: Any, window_days: int) -> list[PollutantSeries]:
    if not isinstance(body, dict) or not isinstance(body.get("list"), list):
        raise MalformedResponse("air history body must carry a 'list' array")
    readings: dict[Pollutant, dict[datetime, float]] = {p: {} for p in Pollutant}
    for entry in body["list"]:
        components = entry.get("components") or {}
        ts_raw = entry.get("dt")
        if not isinstance(ts_raw, (int, float)):
            continue
        ts = datetime.fromtimestamp(int(ts_raw), tz=timezone.utc)
        for pollutant in Pollutant:
            value = components.get(pollutant.value)
            if isinstance(value, (int, float)) and value >= 0:
                readings[pollutant][ts] = float(value)  # last write wins on dup hours
    series = []
    for pollutant in Pollutant:
        ordered = tuple(sorted(readings[pollutant].items()))
        series.append(PollutantSeries(pollutant=pollutant, readings=ordered, window_days=window_days))
    return series


def fetch_air_history(
    transport: Transport, point: GeoPoint, window_days: int = DEFAULT_WINDOW_DAYS
) -> list[PollutantSeries]:
    """Six pollutant series at hourly granularity; missing hours permitted."""
    window = validate_window(window_days)
    body = transport.call(
        OP_AIR_HISTORY, {"lat": point.lat, "lon": point.lon, "window_days": window}
    )
    return parse_history(body, window)


def pollutant_means(series: list[PollutantSeries]) -> dict[Pollutant, float]:
    """Mean concentration per pollutant, dropping pollutants with no readings."""
    means = {}
    for entry in series:
        mean = entry.mean()
        if mean is not None:
            means[entry.pollutant] = mean
    return means
