"""Overpass JSON ingestion and a thin optional fetch client.

Only the response subset the engine needs is read: `node` elements with
(id, lat, lon) and `way` elements with (id, nodes, tags). Tests run on stored
fixture documents; the fetch client exists for convenience and is never used
in the test suite.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .features import (
    ClassMapping,
    Feature,
    MapLayer,
    PointGeometry,
    PolygonGeometry,
    PolylineGeometry,
)
from .projection import GeoPoint, project


class MalformedDocument(ValueError):
    pass


class DanglingNodeReference(KeyError):
    pass


def ingest_overpass(document: str, mapping: ClassMapping, origin: GeoPoint) -> MapLayer:
    """Resolve ways through their node references and project into the local frame.

    Closed ways (first node id == last node id) become polygons, open ways
    polylines; tagged nodes become points. Untagged or unmapped elements drop.
    """
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as err:
        raise MalformedDocument(f"not valid JSON: {err}") from err
    if not isinstance(doc, dict) or not isinstance(doc.get("elements"), list):
        raise MalformedDocument("expected an object with an 'elements' list")

    nodes: dict[int, GeoPoint] = {}
    for el in doc["elements"]:
        if el.get("type") == "node":
            try:
                nodes[int(el["id"])] = GeoPoint(float(el["lat"]), float(el["lon"]))
            except KeyError as err:
                raise MalformedDocument(f"node missing field {err}") from err

    features: list[Feature] = []
    for el in doc["elements"]:
        kind = el.get("type")
        tags = el.get("tags") or {}
        rule = mapping.classify(tags) if tags else None
        if rule is None:
            continue
        if kind == "node":
            local = project(nodes[int(el["id"])], origin)
            features.append(Feature(f"node/{el['id']}", rule.feature_class, PointGeometry(local)))
        elif kind == "way":
            ref_ids = el.get("nodes")
            if not isinstance(ref_ids, list) or len(ref_ids) < 2:
                raise MalformedDocument(f"way {el.get('id')} has no usable node list")
            try:
                points = [project(nodes[int(r)], origin) for r in ref_ids]
            except KeyError as err:
                raise DanglingNodeReference(
                    f"way {el.get('id')} references missing node {err}"
                ) from err
            closed = ref_ids[0] == ref_ids[-1]
            if closed:
                ring = tuple(points[:-1])
                if len(ring) < 3:
                    raise MalformedDocument(f"closed way {el.get('id')} has fewer than 3 vertices")
                geometry = PolygonGeometry(ring)
            else:
                geometry = PolylineGeometry(tuple(points))
            features.append(Feature(f"way/{el['id']}", rule.feature_class, geometry))
    return MapLayer(origin, tuple(features))


OVERPASS_ENDPOINT_VAR = "PMD_OVERPASS_URL"

_QUERY_TEMPLATE = """\
[out:json][timeout:60];
(
{selectors}
);
out body; >; out skel qt;
"""


def build_query(mapping: ClassMapping, bbox: tuple[float, float, float, float]) -> str:
    """Overpass QL for all mapped way classes inside bbox = (south, west, north, east)."""
    box = ",".join(f"{v:.7f}" for v in bbox)
    selectors = []
    for rule in mapping.rules:
        selector = f'["{rule.key}"]' if rule.value == "*" else f'["{rule.key}"="{rule.value}"]'
        selectors.append(f"  way{selector}({box});")
    return _QUERY_TEMPLATE.format(selectors="\n".join(selectors))


def fetch_overpass(
    mapping: ClassMapping,
    bbox: tuple[float, float, float, float],
    endpoint: str | None = None,
    timeout: float = 90.0,
) -> str:
    """Fetch raw Overpass JSON; endpoint comes from the environment by default."""
    import requests

    url = endpoint or os.environ.get(OVERPASS_ENDPOINT_VAR)
    if not url:
        raise RuntimeError(f"no Overpass endpoint configured (set {OVERPASS_ENDPOINT_VAR})")
    response = requests.post(url, data={"data": build_query(mapping, bbox)}, timeout=timeout)
    response.raise_for_status()
    return response.text


def load_map_document(path: str | Path) -> str:
    return Path(path).read_text(encoding="utf-8")
