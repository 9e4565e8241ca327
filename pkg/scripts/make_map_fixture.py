#!/usr/bin/env python3
"""Generate the bundled synthetic map fixture (Overpass JSON).

Layout in the 1 km x 1 km local frame (origin at the southwest corner):
an L-shaped park occupying the northeast block with an arm running south
(the mission corridor), a primary road on the west side, a secondary road
feeding the arm, a tertiary road in the east, and a few buildings. The
start sits at the park's northeastern border, the goal in the south inside
the arm.
"""

import json
from pathlib import Path

from pmd.geodata import GeoPoint, LocalPoint, unproject

ORIGIN = GeoPoint(50.0, 8.0)

PARK_RING = [
    (540.0, 80.0),
    (700.0, 80.0),
    (700.0, 560.0),
    (940.0, 560.0),
    (940.0, 940.0),
    (560.0, 940.0),
    (560.0, 560.0),
    (540.0, 560.0),
]

PRIMARY = [(320.0, 60.0), (320.0, 940.0)]
SECONDARY = [(60.0, 500.0), (540.0, 500.0)]
TERTIARY = [(700.0, 620.0), (940.0, 620.0)]

BUILDINGS = [
    [(350.0, 200.0), (390.0, 200.0), (390.0, 240.0), (350.0, 240.0)],
    [(350.0, 700.0), (390.0, 700.0), (390.0, 740.0), (350.0, 740.0)],
    [(200.0, 300.0), (240.0, 300.0), (240.0, 340.0), (200.0, 340.0)],
    [(800.0, 200.0), (850.0, 200.0), (850.0, 250.0), (800.0, 250.0)],
]


def main() -> None:
    elements = []
    node_ids = {}

    def node_id(point):
        if point not in node_ids:
            nid = len(node_ids) + 1
            geo = unproject(LocalPoint(*point), ORIGIN)
            node_ids[point] = nid
            elements.append({"type": "node", "id": nid, "lat": geo.lat, "lon": geo.lon})
        return node_ids[point]

    way_id = 1000

    def add_way(points, tags, closed):
        nonlocal way_id
        refs = [node_id(p) for p in points]
        if closed:
            refs.append(refs[0])
        way_id += 1
        elements.append({"type": "way", "id": way_id, "nodes": refs, "tags": tags})

    add_way(PARK_RING, {"leisure": "park", "name": "Corridor Park"}, closed=True)
    add_way(PRIMARY, {"highway": "primary", "name": "West Road"}, closed=False)
    add_way(SECONDARY, {"highway": "secondary", "name": "Feeder Road"}, closed=False)
    add_way(TERTIARY, {"highway": "tertiary", "name": "East Lane"}, closed=False)
    for ring in BUILDINGS:
        add_way(ring, {"building": "yes"}, closed=True)

    doc = {"version": 0.6, "generator": "make_map_fixture", "elements": elements}
    out = Path(__file__).resolve().parents[1] / "src" / "pmd" / "data" / "map.json"
    out.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(elements)} elements)")


if __name__ == "__main__":
    main()
