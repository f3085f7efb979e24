"""Deterministic stub providers for tests and benchmarks.

`SyntheticTransport` answers every provider op with plausible bodies derived
only from the request params, so distinct queries produce distinct locations
and identical queries replay identical bodies. Per-provider delays simulate
stage latencies; `fail(provider)` switches a feed to hard failures mid-run.
"""

from __future__ import annotations

import hashlib
import threading
import time
from collections import Counter

from .errors import ProviderUnavailable
from .geodata.transport import (
    OP_AIR_HISTORY,
    OP_FACILITIES_RADIUS,
    OP_GEOCODE_FORWARD,
    OP_GEOCODE_REVERSE,
    OP_TRAFFIC_FLOW,
    canonical_params,
    provider_of,
)

_BASE_LAT, _BASE_LON = 44.43, 26.10


def _unit(seed: str, salt: str) -> float:
    digest = hashlib.sha256(f"{salt}:{seed}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") / 2**64


class SyntheticTransport:
    def __init__(self, delays_s: dict[str, float] | None = None,
                 sleep=time.sleep):
        self.delays_s = dict(delays_s or {})
        self._sleep = sleep
        self._failing: set[str] = set()
        self._lock = threading.Lock()
        self.calls_by_provider: Counter = Counter()
        self.calls_by_request: Counter = Counter()

    def fail(self, provider: str, failing: bool = True) -> None:
        with self._lock:
            if failing:
                self._failing.add(provider)
            else:
                self._failing.discard(provider)

    def call(self, op: str, params: dict):
        provider = provider_of(op)
        with self._lock:
            self.calls_by_provider[provider] += 1
            self.calls_by_request[(op, canonical_params(params))] += 1
            failing = provider in self._failing
        delay = self.delays_s.get(provider, 0.0)
        if delay > 0:
            self._sleep(delay)
        if failing:
            raise ProviderUnavailable(f"synthetic {provider} outage")
        return self._body(op, params)

    # -- canned bodies --------------------------------------------------------

    def _body(self, op: str, params: dict):
        if op == OP_GEOCODE_FORWARD:
            query = params["query"]
            lat = _BASE_LAT + (_unit(query, "lat") - 0.5) * 0.1
            lon = _BASE_LON + (_unit(query, "lon") - 0.5) * 0.1
            district = f"District {1 + int(_unit(query, 'district') * 20)}"
            return [{
                "lat": f"{lat:.7f}",
                "lon": f"{lon:.7f}",
                "display_name": f"{query}, {district}, Synthetic City",
                "address": {"suburb": district, "city": "Synthetic City"},
            }]
        if op == OP_GEOCODE_REVERSE:
            return {
                "lat": f"{params['lat']:.7f}",
                "lon": f"{params['lon']:.7f}",
                "display_name": f"Point ({params['lat']:.4f}, {params['lon']:.4f}), Synthetic City",
                "address": {"city": "Synthetic City"},
            }
        if op == OP_FACILITIES_RADIUS:
            lat, lon = params["lat"], params["lon"]
            return {"elements": [
                {"type": "node", "lat": lat + 0.001, "lon": lon,
                 "tags": {"shop": "supermarket", "name": "Stub Market"}},
                {"type": "node", "lat": lat, "lon": lon + 0.002,
                 "tags": {"amenity": "restaurant", "name": "Stub Bistro"}},
                {"type": "node", "lat": lat - 0.002, "lon": lon,
                 "tags": {"leisure": "park", "name": "Stub Park"}},
                {"type": "node", "lat": lat, "lon": lon - 0.003,
                 "tags": {"railway": "subway_entrance", "name": "Stub Metro"}},
                {"type": "node", "lat": lat + 0.002, "lon": lon + 0.002,
                 "tags": {"highway": "bus_stop", "name": "Stub Stop",
                          "route_ref": "12;34"}},
                {"type": "node", "lat": lat - 0.001, "lon": lon + 0.001,
                 "tags": {"amenity": "school", "name": "Stub School"}},
            ]}
        if op == OP_TRAFFIC_FLOW:
            seed = canonical_params(params)
            ratio = 0.7 + 0.3 * _unit(seed, "flow")
            return {"flowSegmentData": {
                "currentSpeed": round(50 * ratio, 1),
                "freeFlowSpeed": 50,
                "currentTravelTime": round(60 / ratio, 1),
                "freeFlowTravelTime": 60,
                "confidence": 0.95,
            }}
        if op == OP_AIR_HISTORY:
            base_ts = 1_700_000_000
            components = {"pm2_5": 8.0, "pm10": 18.0, "co": 250.0,
                          "no2": 18.0, "o3": 45.0, "nh3": 6.0}
            return {"list": [
                {"dt": base_ts + hour * 3600, "components": components}
                for hour in range(48)
            ]}
        raise ValueError(f"unknown op: {op}")
