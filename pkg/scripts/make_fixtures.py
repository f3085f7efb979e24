#!/usr/bin/env python3
"""Regenerate the recorded-call fixture set under fixtures/.

The Tineretului set reproduces the reference audit of that neighbourhood:
facility counts (9 supermarkets, 38 restaurants, 4 fast food, 12 parks, five
schools, two metro entrances, 29+12 surface stops on 11 routes), five traffic
samples averaging 75.0, and a 90-day hourly air trace whose means score 94.3
under the default guideline model. Everything is deterministic; rerunning the
script reproduces byte-identical files.
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from urbanscore.geo import GeoPoint, destination, sample_points
from urbanscore.geodata.transport import (
    OP_AIR_HISTORY,
    OP_FACILITIES_RADIUS,
    OP_GEOCODE_FORWARD,
    OP_GEOCODE_REVERSE,
    OP_TRAFFIC_FLOW,
    write_fixture,
)

ROOT = Path(__file__).resolve().parent.parent / "fixtures"
RECORDED_AT = "2025-04-01T00:00:00Z"

CENTER = GeoPoint(44.409, 26.103)
TINERETULUI_QUERY = "Parcul Tineretului, București"
RADIUS_M = 1000

GOLDEN_ANGLE = 137.50776405003785  # spreads synthetic POIs around the center


def node(name: str, point: GeoPoint, tags: dict, extra: dict | None = None) -> dict:
    element = {
        "type": "node",
        "id": abs(hash((name, round(point.lat, 7), round(point.lon, 7)))) % 10**9,
        "lat": round(point.lat, 7),
        "lon": round(point.lon, 7),
        "tags": {"name": name, **tags},
    }
    if extra:
        element.update(extra)
    return element


def ring(prefix: str, tags: dict, count: int, min_d: float, max_d: float,
         bearing0: float, names: list[str] | None = None) -> list[dict]:
    """Deterministic spiral of POIs between min_d and max_d meters out."""
    elements = []
    for i in range(count):
        distance = min_d + (max_d - min_d) * (i / max(1, count - 1))
        bearing = (bearing0 + i * GOLDEN_ANGLE) % 360.0
        point = destination(CENTER, bearing, distance)
        name = names[i] if names else f"{prefix} {i + 1}"
        elements.append(node(name, point, tags))
    return elements


def geocode_fixtures() -> None:
    write_fixture(
        ROOT, "geocode", "tineretului",
        OP_GEOCODE_FORWARD, {"query": TINERETULUI_QUERY},
        [{
            "place_id": 109237481,
            "lat": "44.4090000",
            "lon": "26.1030000",
            "display_name": "Parcul Tineretului, Tineretului, Sector 4, București, 040441, România",
            "type": "park",
            "address": {
                "leisure": "Parcul Tineretului",
                "suburb": "Tineretului",
                "city_district": "Sector 4",
                "city": "București",
                "postcode": "040441",
                "country": "România",
                "country_code": "ro",
            },
        }],
        RECORDED_AT,
    )
    write_fixture(
        ROOT, "geocode", "tineretului_reverse",
        OP_GEOCODE_REVERSE, {"lat": 44.409, "lon": 26.103},
        {
            "lat": "44.4090000",
            "lon": "26.1030000",
            "display_name": "Parcul Tineretului, Tineretului, Sector 4, București, România",
            "address": {
                "leisure": "Parcul Tineretului",
                "suburb": "Tineretului",
                "city_district": "Sector 4",
                "city": "București",
                "country": "România",
            },
        },
        RECORDED_AT,
    )
    write_fixture(
        ROOT, "geocode", "unknown_address",
        OP_GEOCODE_FORWARD, {"query": "strada care nu exista, nicăieri"},
        [],
        RECORDED_AT,
    )
    write_fixture(
        ROOT, "geocode", "open_ocean",
        OP_GEOCODE_REVERSE, {"lat": 0.0, "lon": 0.0},
        {"error": "Unable to geocode"},
        RECORDED_AT,
    )


def facility_fixture() -> None:
    elements: list[dict] = []

    supermarket_names = [
        "Mega Image Tineretului", "Carrefour Market Văcărești", "Lidl Șincai",
        "Profi City Tineretului", "Penny Market", "Mega Image Timpuri Noi",
        "La Doi Pași", "Annabella", "Kaufland Văcărești",
    ]
    supermarkets = ring("Supermarket", {"shop": "supermarket"}, 9, 150, 900, 10,
                        names=supermarket_names)
    elements += supermarkets
    # the same store exported twice (node + duplicated import) collapses on dedup
    elements.append(dict(supermarkets[0], id=supermarkets[0]["id"] + 1))

    elements += ring("Restaurant", {"amenity": "restaurant"}, 38, 120, 980, 40)
    elements += ring("Fast Food", {"amenity": "fast_food"}, 4, 220, 640, 75)

    park_names = [
        "Parcul Tineretului", "Parcul Carol I", "Parcul Lumea Copiilor",
        "Scuar Văcărești", "Grădina Cositorarilor", "Parc Piața Norilor",
        "Scuar Șincai", "Parc Lânăriei", "Scuar Timpuri Noi",
        "Parc Cuza Vodă", "Grădina Serban Vodă", "Scuar Mărășești",
    ]
    elements += ring("Park", {"leisure": "park"}, 12, 90, 950, 130, names=park_names)

    # education: one kindergarten, three primaries, one high school at pinned
    # distances (the education sub-score depends on them)
    elements.append(node("Grădinița nr. 149",
                         destination(CENTER, 200, 250), {"amenity": "kindergarten"}))
    elements.append(node("Şcoala Gimnazială Nr. 97",
                         destination(CENTER, 250, 260), {"amenity": "school"}))
    elements.append(node("Şcoala Gimnazială Ienăchiță Văcărescu",
                         destination(CENTER, 300, 460), {"amenity": "school"}))
    elements.append(node("Şcoala Gimnazială Nr. 119",
                         destination(CENTER, 340, 750), {"amenity": "school"}))
    elements.append(node("Liceul Teoretic Gheorghe Şincai",
                         destination(CENTER, 20, 150), {"amenity": "school"}))

    # metro entrances: nearest at 320 m drives the metro sub-score
    elements.append(node("Tineretului",
                         destination(CENTER, 290, 320), {"railway": "subway_entrance"}))
    elements.append(node("Timpuri Noi",
                         destination(CENTER, 55, 650), {"railway": "subway_entrance"}))

    # 29 bus stops over seven routes, 12 tram stops over four: 11 distinct refs
    bus_routes = ["11", "47", "102", "116", "141", "312", "381"]
    for i in range(29):
        refs = ";".join(sorted({bus_routes[i % 7], bus_routes[(i + 3) % 7]}))
        point = destination(CENTER, (160 + i * GOLDEN_ANGLE) % 360, 130 + i * 28)
        elements.append(node(f"Stația {i + 1}", point,
                             {"highway": "bus_stop", "route_ref": refs}))
    tram_routes = ["1", "10", "19", "23"]
    for i in range(12):
        refs = ";".join(sorted({tram_routes[i % 4], tram_routes[(i + 1) % 4]}))
        point = destination(CENTER, (80 + i * GOLDEN_ANGLE) % 360, 170 + i * 60)
        elements.append(node(f"Peron {i + 1}", point,
                             {"railway": "tram_stop", "route_ref": refs}))

    write_fixture(
        ROOT, "facilities", "tineretului",
        OP_FACILITIES_RADIUS,
        {"lat": CENTER.lat, "lon": CENTER.lon, "radius_m": RADIUS_M},
        {"version": 0.6, "elements": elements},
        RECORDED_AT,
    )

    write_fixture(
        ROOT, "facilities", "empty_area",
        OP_FACILITIES_RADIUS,
        {"lat": 44.2, "lon": 26.4, "radius_m": 800},
        {"version": 0.6, "elements": []},
        RECORDED_AT,
    )


# (currentSpeed, freeFlowSpeed, currentTravelTime, freeFlowTravelTime, confidence)
# point scores 80.0, 75.0, 72.0, 76.0, 72.0 -> mean 75.0
TRAFFIC_SEGMENTS = [
    (40, 50, 75, 60, 1.0),
    (30, 40, 60, 45, 1.0),
    (36, 50, 75, 54, 1.0),
    (44, 55, 60, 48, 0.95),
    (45, 60, 48, 36, 0.96),
]


def traffic_fixtures() -> None:
    for i, (point, seg) in enumerate(zip(sample_points(CENTER), TRAFFIC_SEGMENTS)):
        cur, free, cur_tt, free_tt, conf = seg
        write_fixture(
            ROOT, "traffic", f"tineretului_p{i}",
            OP_TRAFFIC_FLOW, {"lat": point.lat, "lon": point.lon, "zoom": 10},
            {"flowSegmentData": {
                "frc": "FRC3",
                "currentSpeed": cur,
                "freeFlowSpeed": free,
                "currentTravelTime": cur_tt,
                "freeFlowTravelTime": free_tt,
                "confidence": conf,
                "roadClosure": False,
            }},
            RECORDED_AT,
        )
    write_fixture(
        ROOT, "traffic", "free_flow",
        OP_TRAFFIC_FLOW, {"lat": 44.45, "lon": 26.05, "zoom": 10},
        {"flowSegmentData": {
            "currentSpeed": 50, "freeFlowSpeed": 50,
            "currentTravelTime": 60, "freeFlowTravelTime": 60,
            "confidence": 1.0,
        }},
        RECORDED_AT,
    )
    # probe landing inside the park: provider has no segment to report
    write_fixture(
        ROOT, "traffic", "park_interior",
        OP_TRAFFIC_FLOW, {"lat": 44.4101, "lon": 26.1042, "zoom": 10},
        {},
        RECORDED_AT,
    )


# means chosen so the default guideline model scores the trace at 94.3
AIR_MEANS = {"pm2_5": 1.25, "pm10": 2.5, "co": 50.0, "no2": 0.6, "o3": 2.5, "nh3": 1.2}
AIR_END_TS = 1_743_465_600  # 2025-04-01T00:00:00Z
AIR_HOURS = 90 * 24


def air_fixture() -> None:
    hours = [h for h in range(AIR_HOURS) if h % 19 != 7]  # gaps are allowed
    entries = []
    raw = {name: [] for name in AIR_MEANS}
    for h in hours:
        daily = math.sin(2 * math.pi * (h % 24) / 24)
        weekly = math.sin(2 * math.pi * h / (24 * 7))
        for name in AIR_MEANS:
            raw[name].append(1.0 + 0.35 * daily + 0.10 * weekly)
    # rescale each series so its mean hits the target exactly
    scale = {
        name: AIR_MEANS[name] / (sum(raw[name]) / len(raw[name])) for name in AIR_MEANS
    }
    for idx, h in enumerate(hours):
        components = {
            name: round(raw[name][idx] * scale[name], 6) for name in AIR_MEANS
        }
        entries.append({
            "dt": AIR_END_TS - (AIR_HOURS - h) * 3600,
            "components": components,
        })
    write_fixture(
        ROOT, "air", "tineretului",
        OP_AIR_HISTORY,
        {"lat": CENTER.lat, "lon": CENTER.lon, "window_days": 90},
        {"coord": {"lat": CENTER.lat, "lon": CENTER.lon}, "list": entries},
        RECORDED_AT,
        compact=True,
    )


def targets_file() -> None:
    import json

    doc = {
        "address": TINERETULUI_QUERY,
        "radius_m": RADIUS_M,
        "targets": {"lifestyle": 91.0, "education": 73.0, "surface": 88.0, "metro": 85.0},
    }
    path = ROOT / "tineretului.targets.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def main() -> None:
    geocode_fixtures()
    facility_fixture()
    traffic_fixtures()
    air_fixture()
    targets_file()
    print(f"fixtures written under {ROOT}")


if __name__ == "__main__":
    main()
