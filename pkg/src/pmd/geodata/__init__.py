"""Geospatial ingestion, projection and geometry kernels."""

from .features import (
    ClassMapping,
    Feature,
    FeatureGeometry,
    MapLayer,
    MappingRule,
    PointGeometry,
    PolygonGeometry,
    PolylineGeometry,
    buffer_polyline,
    distance_to_feature,
    load_class_mapping,
    point_over_feature,
    translate_feature,
)
from .geometry import (
    ZeroWidth,
    batch_point_in_polygon,
    batch_polygon_distance,
    batch_polyline_distance,
    batch_segment_distance,
    buffer_ring,
    point_in_polygon,
    polygon_distance,
    polyline_distance,
    ring_is_simple,
    segment_distance,
)
from .overpass import (
    OVERPASS_ENDPOINT_VAR,
    DanglingNodeReference,
    MalformedDocument,
    build_query,
    fetch_overpass,
    ingest_overpass,
    load_map_document,
)
from .projection import EARTH_RADIUS_M, GeoPoint, LocalPoint, project, unproject

__all__ = [
    "EARTH_RADIUS_M",
    "OVERPASS_ENDPOINT_VAR",
    "ClassMapping",
    "DanglingNodeReference",
    "Feature",
    "FeatureGeometry",
    "GeoPoint",
    "LocalPoint",
    "MalformedDocument",
    "MapLayer",
    "MappingRule",
    "PointGeometry",
    "PolygonGeometry",
    "PolylineGeometry",
    "ZeroWidth",
    "batch_point_in_polygon",
    "batch_polygon_distance",
    "batch_polyline_distance",
    "batch_segment_distance",
    "buffer_polyline",
    "buffer_ring",
    "build_query",
    "distance_to_feature",
    "fetch_overpass",
    "ingest_overpass",
    "load_class_mapping",
    "load_map_document",
    "point_in_polygon",
    "point_over_feature",
    "polygon_distance",
    "polyline_distance",
    "project",
    "ring_is_simple",
    "segment_distance",
    "translate_feature",
    "unproject",
]
