"""Typed map features in the local mission frame, plus the tag->class mapping."""

from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path

import yaml

from .geometry import (
    ZeroWidth,
    buffer_ring,
    point_in_polygon,
    polygon_distance,
    polyline_distance,
    ring_is_simple,
    segment_distance,
)
from .projection import GeoPoint, LocalPoint


@dataclass(frozen=True)
class PointGeometry:
    point: LocalPoint


@dataclass(frozen=True)
class PolylineGeometry:
    vertices: tuple[LocalPoint, ...]

    def __post_init__(self):
        if len(self.vertices) < 2:
            raise ValueError("polyline needs at least 2 vertices")


@dataclass(frozen=True)
class PolygonGeometry:
    """Simple ring, implicitly closed; first vertex is not repeated at the end."""

    ring: tuple[LocalPoint, ...]

    def __post_init__(self):
        if len(self.ring) < 3:
            raise ValueError("polygon ring needs at least 3 vertices")
        if self.ring[0] == self.ring[-1]:
            raise ValueError("polygon ring must not repeat the first vertex")
        if not ring_is_simple([(p.east, p.north) for p in self.ring]):
            raise ValueError("polygon ring is self-intersecting")


FeatureGeometry = PointGeometry | PolylineGeometry | PolygonGeometry


@dataclass(frozen=True)
class Feature:
    id: str
    feature_class: str
    geometry: FeatureGeometry


@dataclass(frozen=True)
class MapLayer:
    origin: GeoPoint
    features: tuple[Feature, ...]

    def by_class(self, feature_class: str) -> tuple[Feature, ...]:
        return tuple(f for f in self.features if f.feature_class == feature_class)

    def classes(self) -> tuple[str, ...]:
        seen: list[str] = []
        for f in self.features:
            if f.feature_class not in seen:
                seen.append(f.feature_class)
        return tuple(seen)


@dataclass(frozen=True)
class MappingRule:
    key: str
    value: str  # "*" matches any value
    feature_class: str
    buffer_width: float = 0.0

    def matches(self, tags: dict[str, str]) -> bool:
        if self.key not in tags:
            return False
        return self.value == "*" or tags[self.key] == self.value


@dataclass(frozen=True)
class ClassMapping:
    """Ordered tag->class rules; the first matching rule wins."""

    rules: tuple[MappingRule, ...]

    def classify(self, tags: dict[str, str]) -> MappingRule | None:
        for rule in self.rules:
            if rule.matches(tags):
                return rule
        return None

    def buffer_width_for(self, feature_class: str) -> float:
        for rule in self.rules:
            if rule.feature_class == feature_class:
                return rule.buffer_width
        return 0.0


def load_class_mapping(path: str | Path) -> ClassMapping:
    doc = yaml.safe_load(Path(path).read_text(encoding="utf-8"))
    rules = tuple(
        MappingRule(
            key=str(r["key"]),
            value=str(r["value"]),
            feature_class=str(r["class"]),
            buffer_width=float(r.get("buffer_width", 0.0)),
        )
        for r in doc["rules"]
    )
    return ClassMapping(rules)


def _xy(points) -> list[tuple[float, float]]:
    return [(p.east, p.north) for p in points]


def distance_to_feature(p: LocalPoint, feature: Feature) -> float:
    """Point: Euclidean; polyline: nearest segment; polygon: 0 inside else boundary."""
    geom = feature.geometry
    if isinstance(geom, PointGeometry):
        return segment_distance(p.east, p.north, geom.point.east, geom.point.north,
                                geom.point.east, geom.point.north)
    if isinstance(geom, PolylineGeometry):
        return polyline_distance(p.east, p.north, _xy(geom.vertices))
    return polygon_distance(p.east, p.north, _xy(geom.ring))


def point_over_feature(p: LocalPoint, feature: Feature, buffer_width: float = 0.0) -> bool:
    """Areal containment: polygons directly, polylines via their buffer footprint.

    A zero-width polyline and a bare point have no area, so `over` is false for
    them except exact coincidence.
    """
    geom = feature.geometry
    if isinstance(geom, PolygonGeometry):
        return point_in_polygon(p.east, p.north, _xy(geom.ring))
    if isinstance(geom, PolylineGeometry):
        if buffer_width > 0.0:
            ring = buffer_ring(_xy(geom.vertices), buffer_width)
            return point_in_polygon(p.east, p.north, ring)
        return polyline_distance(p.east, p.north, _xy(geom.vertices)) == 0.0
    return p == geom.point


def buffer_polyline(feature: Feature, width: float) -> Feature:
    """Flat-capped footprint polygon of a polyline feature."""
    geom = feature.geometry
    if not isinstance(geom, PolylineGeometry):
        raise TypeError("only polyline features can be buffered")
    if width <= 0:
        raise ZeroWidth(f"buffer width must be positive, got {width}")
    ring = buffer_ring(_xy(geom.vertices), width)
    return replace(
        feature,
        geometry=PolygonGeometry(tuple(LocalPoint(x, y) for x, y in ring)),
    )


def translate_feature(feature: Feature, de: float, dn: float) -> Feature:
    def shift(p: LocalPoint) -> LocalPoint:
        return LocalPoint(p.east + de, p.north + dn)

    geom = feature.geometry
    if isinstance(geom, PointGeometry):
        moved: FeatureGeometry = PointGeometry(shift(geom.point))
    elif isinstance(geom, PolylineGeometry):
        moved = PolylineGeometry(tuple(shift(p) for p in geom.vertices))
    else:
        moved = PolygonGeometry(tuple(shift(p) for p in geom.ring))
    return replace(feature, geometry=moved)
