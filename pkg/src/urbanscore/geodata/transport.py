"""Transport layer for provider calls: live HTTP and file-backed fixture replay.

Every provider operation is addressed as ``"<provider>.<op>"`` with a flat
params dict, so the same (op, params) pair drives the live client, the
fixture replay, the cache key and the recorded-call file format.
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path
from typing import Any, Protocol

import requests

from ..errors import MalformedResponse, ProviderUnavailable
from ..geo import COORD_DECIMALS

USER_AGENT = "UrbanScoreApp/1.0"

OP_GEOCODE_FORWARD = "geocode.forward"
OP_GEOCODE_REVERSE = "geocode.reverse"
OP_FACILITIES_RADIUS = "facilities.radius"
OP_TRAFFIC_FLOW = "traffic.flow"
OP_AIR_HISTORY = "air.history"

PROVIDERS = ("geocode", "facilities", "traffic", "air")


def provider_of(op: str) -> str:
    provider = op.split(".", 1)[0]
    if provider not in PROVIDERS:
        raise ValueError(f"unknown provider op: {op}")
    return provider


def canonical_params(params: dict[str, Any]) -> str:
    """Stable JSON form of a params dict; floats rounded to coordinate precision."""

    def norm(value):
        if isinstance(value, float):
            return round(value, COORD_DECIMALS)
        if isinstance(value, dict):
            return {k: norm(v) for k, v in sorted(value.items())}
        if isinstance(value, (list, tuple)):
            return [norm(v) for v in value]
        return value

    return json.dumps(norm(params), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def cache_key(op: str, params: dict[str, Any]) -> str:
    digest = hashlib.sha256(canonical_params(params).encode("utf-8")).hexdigest()[:16]
    return f"v1:{provider_of(op)}:{op.split('.', 1)[1]}:{digest}"


class Transport(Protocol):
    def call(self, op: str, params: dict[str, Any]) -> Any:
        """Issue one provider call and return the raw decoded response body."""
        ...


DEFAULT_BASE_URLS = {
    "geocode": "https://nominatim.openstreetmap.org",
    "facilities": "https://overpass-api.de/api/interpreter",
    "traffic": "https://api.tomtom.com",
    "air": "https://api.openweathermap.org",
}

# Overpass-style bulk query for every category the engine scores. One batched
# statement per evaluation; the circular post-filter happens client-side.
_FACILITY_QUERY = """
[out:json][timeout:25];
(
  node["shop"="supermarket"](around:{r},{lat},{lon});
  way["shop"="supermarket"](around:{r},{lat},{lon});
  node["amenity"="restaurant"](around:{r},{lat},{lon});
  way["amenity"="restaurant"](around:{r},{lat},{lon});
  node["amenity"="fast_food"](around:{r},{lat},{lon});
  node["leisure"="park"](around:{r},{lat},{lon});
  way["leisure"="park"](around:{r},{lat},{lon});
  node["amenity"="kindergarten"](around:{r},{lat},{lon});
  way["amenity"="kindergarten"](around:{r},{lat},{lon});
  node["amenity"="school"](around:{r},{lat},{lon});
  way["amenity"="school"](around:{r},{lat},{lon});
  node["railway"="subway_entrance"](around:{r},{lat},{lon});
  node["highway"="bus_stop"](around:{r},{lat},{lon});
  node["railway"="tram_stop"](around:{r},{lat},{lon});
);
out center tags;
"""


class HttpTransport:
    """Live HTTP client for the four provider feeds.

    Wire formats follow the de-facto public APIs: an OSM-style search endpoint
    for geocoding, an Overpass-compatible bulk POI query, a flow-segment
    traffic endpoint (zoom fixed at 10) and an hourly air-pollution history
    endpoint. Unknown response fields are ignored.
    """

    def __init__(
        self,
        base_urls: dict[str, str] | None = None,
        api_keys: dict[str, str] | None = None,
        timeout_s: float = 10.0,
        session: requests.Session | None = None,
    ):
        self.base_urls = {**DEFAULT_BASE_URLS, **(base_urls or {})}
        self.api_keys = dict(api_keys or {})
        self.timeout_s = timeout_s
        self._session = session or requests.Session()
        self._session.headers["User-Agent"] = USER_AGENT

    def call(self, op: str, params: dict[str, Any]) -> Any:
        method, url, query, data = self._build(op, params)
        try:
            resp = self._session.request(
                method, url, params=query, data=data, timeout=self.timeout_s
            )
        except requests.RequestException as exc:
            raise ProviderUnavailable(f"{op}: {exc}") from exc

        if op == OP_TRAFFIC_FLOW and resp.status_code in (400, 404):
            # flow endpoints reject points with no nearby segment
            return {}
        if resp.status_code >= 500:
            raise ProviderUnavailable(f"{op}: HTTP {resp.status_code}")
        if resp.status_code >= 400:
            raise MalformedResponse(f"{op}: HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            return resp.json()
        except ValueError as exc:
            raise MalformedResponse(f"{op}: body is not JSON") from exc

    def _build(self, op, params):
        if op == OP_GEOCODE_FORWARD:
            return (
                "GET",
                f"{self.base_urls['geocode']}/search",
                {"q": params["query"], "format": "jsonv2", "addressdetails": 1, "limit": 1},
                None,
            )
        if op == OP_GEOCODE_REVERSE:
            return (
                "GET",
                f"{self.base_urls['geocode']}/reverse",
                {
                    "lat": params["lat"],
                    "lon": params["lon"],
                    "format": "jsonv2",
                    "addressdetails": 1,
                },
                None,
            )
        if op == OP_FACILITIES_RADIUS:
            q = _FACILITY_QUERY.format(
                r=int(params["radius_m"]), lat=params["lat"], lon=params["lon"]
            )
            return ("POST", self.base_urls["facilities"], None, {"data": q})
        if op == OP_TRAFFIC_FLOW:
            base = self.base_urls["traffic"]
            url = f"{base}/traffic/services/4/flowSegmentData/absolute/{int(params['zoom'])}/json"
            query = {"point": f"{params['lat']},{params['lon']}"}
            if "traffic" in self.api_keys:
                query["key"] = self.api_keys["traffic"]
            return ("GET", url, query, None)
        if op == OP_AIR_HISTORY:
            end = int(time.time())
            start = end - int(params["window_days"]) * 86400
            query = {"lat": params["lat"], "lon": params["lon"], "start": start, "end": end}
            if "air" in self.api_keys:
                query["appid"] = self.api_keys["air"]
            return ("GET", f"{self.base_urls['air']}/data/2.5/air_pollution/history", query, None)
        raise ValueError(f"unknown op: {op}")


class FixtureTransport:
    """Replays recorded provider calls from ``<root>/<provider>/<name>.json``.

    Each file holds one call:
    ``{"request": {"op": ..., "params": {...}}, "response": <raw body>,
    "recorded_at": <UTC ISO>}``. Lookups match on the canonicalized params,
    so coordinates only have to agree to 6 decimals.
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._index: dict[tuple[str, str], Any] | None = None

    def _load(self) -> dict[tuple[str, str], Any]:
        if self._index is None:
            index: dict[tuple[str, str], Any] = {}
            for path in sorted(self.root.glob("*/*.json")):
                with open(path, encoding="utf-8") as fh:
                    doc = json.load(fh)
                request = doc["request"]
                key = (request["op"], canonical_params(request["params"]))
                index[key] = doc["response"]
            self._index = index
        return self._index

    def call(self, op: str, params: dict[str, Any]) -> Any:
        index = self._load()
        key = (op, canonical_params(params))
        if key not in index:
            raise ProviderUnavailable(f"no fixture recorded for {op} {key[1]}")
        return index[key]


def write_fixture(root: str | Path, provider_dir: str, name: str, op: str,
                  params: dict[str, Any], response: Any, recorded_at: str,
                  compact: bool = False) -> Path:
    """Write one recorded call in the replay format; returns the file path."""
    path = Path(root) / provider_dir / f"{name}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {"request": {"op": op, "params": params}, "response": response, "recorded_at": recorded_at}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False, indent=None if compact else 1)
        fh.write("\n")
    return path
