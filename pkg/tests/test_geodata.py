"""Geometry kernels, projection, and Overpass ingestion."""

import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from pmd.geodata import (
    ClassMapping,
    DanglingNodeReference,
    Feature,
    GeoPoint,
    LocalPoint,
    MappingRule,
    PointGeometry,
    PolygonGeometry,
    PolylineGeometry,
    ZeroWidth,
    batch_point_in_polygon,
    batch_polygon_distance,
    batch_polyline_distance,
    buffer_polyline,
    distance_to_feature,
    ingest_overpass,
    point_in_polygon,
    point_over_feature,
    project,
    ring_is_simple,
    translate_feature,
    unproject,
)

from .oracles import random_convex_polygon, winding_number_contains

UNIT_SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


def square_feature(cls="park"):
    return Feature("t", cls, PolygonGeometry(tuple(LocalPoint(x, y) for x, y in UNIT_SQUARE)))


class TestProjection:
    def test_origin_projects_to_zero(self):
        origin = GeoPoint(48.0, 8.5)
        local = project(origin, origin)
        assert local == LocalPoint(0.0, 0.0)

    def test_equator_longitude_step(self):
        origin = GeoPoint(0.0, 0.0)
        local = project(GeoPoint(0.0, 0.001), origin)
        # R * radians(0.001 deg) * cos(0) = 111.19 m
        assert local.east == pytest.approx(111.1949, abs=1e-3)
        assert local.north == 0.0

    @given(
        st.floats(-80, 80),
        st.floats(-179, 179),
        st.floats(-0.01, 0.01),
        st.floats(-0.01, 0.01),
    )
    def test_unproject_inverts_project(self, lat, lon, dlat, dlon):
        origin = GeoPoint(lat, lon)
        p = GeoPoint(lat + dlat, lon + dlon)
        back = unproject(project(p, origin), origin)
        assert back.lat == pytest.approx(p.lat, abs=1e-12)
        assert back.lon == pytest.approx(p.lon, abs=1e-12)

    def test_latitude_bounds_checked(self):
        with pytest.raises(ValueError):
            GeoPoint(91.0, 0.0)


class TestDistance:
    def test_perpendicular_foot_on_segment(self):
        line = Feature("t", "primary", PolylineGeometry((LocalPoint(0, 0), LocalPoint(10, 0))))
        assert distance_to_feature(LocalPoint(0, 5), line) == 5.0

    def test_point_inside_polygon_is_zero(self):
        assert distance_to_feature(LocalPoint(0.5, 0.5), square_feature()) == 0.0

    def test_distance_past_segment_end(self):
        line = Feature("t", "primary", PolylineGeometry((LocalPoint(0, 0), LocalPoint(10, 0))))
        assert distance_to_feature(LocalPoint(13, 4), line) == 5.0

    def test_point_feature_distance(self):
        pt = Feature("t", "operator", PointGeometry(LocalPoint(3, 4)))
        assert distance_to_feature(LocalPoint(0, 0), pt) == 5.0

    def test_nonnegative_and_zero_iff_on(self):
        line = Feature("t", "x", PolylineGeometry((LocalPoint(0, 0), LocalPoint(10, 0))))
        assert distance_to_feature(LocalPoint(5, 0), line) == 0.0
        assert distance_to_feature(LocalPoint(5, 1e-9), line) > 0.0

    # Dyadic lattice coordinates make float sums exact, so equivariance is bitwise.
    dyadic = st.integers(-400, 400).map(lambda k: k * 0.25)

    @given(dyadic, dyadic, dyadic, dyadic, st.lists(st.tuples(dyadic, dyadic), min_size=2, max_size=6))
    def test_translation_equivariance_exact(self, px, py, te, tn, vertices):
        if len({v for v in vertices}) < 2:
            return
        line = Feature("t", "x", PolylineGeometry(tuple(LocalPoint(x, y) for x, y in vertices)))
        moved = translate_feature(line, te, tn)
        assert distance_to_feature(LocalPoint(px + te, py + tn), moved) == distance_to_feature(
            LocalPoint(px, py), line
        )


class TestPointInPolygon:
    def test_interior(self):
        assert point_in_polygon(0.5, 0.5, UNIT_SQUARE)

    def test_exterior(self):
        assert not point_in_polygon(2.0, 2.0, UNIT_SQUARE)

    def test_boundary_counts_as_inside(self):
        assert point_in_polygon(0.5, 0.0, UNIT_SQUARE)
        assert point_in_polygon(1.0, 1.0, UNIT_SQUARE)

    def test_agrees_with_winding_number_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            ring = random_convex_polygon(rng)
            qx, qy = rng.uniform(-80, 80, 2)
            assert point_in_polygon(qx, qy, ring) == winding_number_contains(qx, qy, ring)

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(11)
        ring = random_convex_polygon(rng)
        pts = rng.uniform(-80, 80, size=(500, 2))
        batch = batch_point_in_polygon(pts, np.asarray(ring))
        scalar = np.array([point_in_polygon(x, y, ring) for x, y in pts])
        assert np.array_equal(np.broadcast_to(batch, scalar.shape), scalar)


class TestBatchKernels:
    def test_polyline_batch_matches_scalar(self):
        rng = np.random.default_rng(3)
        verts = rng.uniform(-50, 50, size=(5, 2))
        feature = Feature("t", "x", PolylineGeometry(tuple(LocalPoint(*v) for v in verts)))
        pts = rng.uniform(-60, 60, size=(200, 2))
        batch = batch_polyline_distance(pts, verts)
        scalar = np.array([distance_to_feature(LocalPoint(*p), feature) for p in pts])
        assert np.array_equal(batch, scalar)

    def test_polygon_batch_matches_scalar(self):
        rng = np.random.default_rng(4)
        ring = np.asarray(random_convex_polygon(rng))
        feature = Feature("t", "x", PolygonGeometry(tuple(LocalPoint(*v) for v in ring)))
        pts = rng.uniform(-80, 80, size=(200, 2))
        batch = batch_polygon_distance(pts, ring)
        scalar = np.array([distance_to_feature(LocalPoint(*p), feature) for p in pts])
        assert np.array_equal(batch, scalar)


class TestBuffer:
    def test_horizontal_segment_buffer(self):
        line = Feature("t", "primary", PolylineGeometry((LocalPoint(0, 0), LocalPoint(10, 0))))
        footprint = buffer_polyline(line, 4.0)
        ring = [(p.east, p.north) for p in footprint.geometry.ring]
        assert point_in_polygon(5.0, 1.0, ring)
        assert point_in_polygon(0.0, 2.0, ring)
        assert not point_in_polygon(5.0, 3.0, ring)
        assert not point_in_polygon(-1.0, 0.0, ring)

    def test_over_uses_buffer_width(self):
        line = Feature("t", "primary", PolylineGeometry((LocalPoint(0, 0), LocalPoint(10, 0))))
        assert point_over_feature(LocalPoint(5, 1), line, buffer_width=4.0)
        assert not point_over_feature(LocalPoint(5, 3), line, buffer_width=4.0)

    def test_zero_width_rejected(self):
        line = Feature("t", "primary", PolylineGeometry((LocalPoint(0, 0), LocalPoint(10, 0))))
        with pytest.raises(ZeroWidth):
            buffer_polyline(line, 0.0)

    def test_bend_buffer_contains_joint_neighborhood(self):
        line = Feature(
            "t", "x", PolylineGeometry((LocalPoint(0, 0), LocalPoint(10, 0), LocalPoint(10, 10)))
        )
        footprint = buffer_polyline(line, 4.0)
        ring = [(p.east, p.north) for p in footprint.geometry.ring]
        assert point_in_polygon(9.0, 1.0, ring)
        assert point_in_polygon(11.0, 9.0, ring)
        assert not point_in_polygon(5.0, 5.0, ring)


class TestIngest:
    MAPPING = ClassMapping(
        (
            MappingRule("leisure", "park", "park", 0.0),
            MappingRule("highway", "primary", "primary", 6.0),
            MappingRule("building", "*", "building", 0.0),
        )
    )
    ORIGIN = GeoPoint(50.0, 8.0)

    def doc(self, elements):
        return json.dumps({"elements": elements})

    def node(self, i, lat, lon, tags=None):
        el = {"type": "node", "id": i, "lat": lat, "lon": lon}
        if tags:
            el["tags"] = tags
        return el

    def test_closed_way_becomes_polygon(self):
        elements = [
            self.node(1, 50.0, 8.0),
            self.node(2, 50.0, 8.001),
            self.node(3, 50.001, 8.001),
            self.node(4, 50.001, 8.0),
            {"type": "way", "id": 10, "nodes": [1, 2, 3, 4, 1], "tags": {"leisure": "park"}},
        ]
        layer = ingest_overpass(self.doc(elements), self.MAPPING, self.ORIGIN)
        assert len(layer.features) == 1
        feature = layer.features[0]
        assert feature.feature_class == "park"
        assert isinstance(feature.geometry, PolygonGeometry)
        assert len(feature.geometry.ring) == 4

    def test_open_way_becomes_polyline(self):
        elements = [
            self.node(1, 50.0, 8.0),
            self.node(2, 50.0, 8.001),
            {"type": "way", "id": 10, "nodes": [1, 2], "tags": {"highway": "primary"}},
        ]
        layer = ingest_overpass(self.doc(elements), self.MAPPING, self.ORIGIN)
        assert isinstance(layer.features[0].geometry, PolylineGeometry)

    def test_empty_document(self):
        layer = ingest_overpass('{"elements": []}', self.MAPPING, self.ORIGIN)
        assert layer.features == ()

    def test_dangling_node_reference(self):
        elements = [
            self.node(1, 50.0, 8.0),
            {"type": "way", "id": 10, "nodes": [1, 99], "tags": {"highway": "primary"}},
        ]
        with pytest.raises(DanglingNodeReference):
            ingest_overpass(self.doc(elements), self.MAPPING, self.ORIGIN)

    def test_unmapped_elements_dropped(self):
        elements = [
            self.node(1, 50.0, 8.0),
            self.node(2, 50.0, 8.001),
            {"type": "way", "id": 10, "nodes": [1, 2], "tags": {"waterway": "river"}},
        ]
        layer = ingest_overpass(self.doc(elements), self.MAPPING, self.ORIGIN)
        assert layer.features == ()

    def test_wildcard_value_matches(self):
        elements = [
            self.node(1, 50.0, 8.0),
            self.node(2, 50.0, 8.0001),
            self.node(3, 50.0001, 8.0001),
            {"type": "way", "id": 10, "nodes": [1, 2, 3, 1], "tags": {"building": "yes"}},
        ]
        layer = ingest_overpass(self.doc(elements), self.MAPPING, self.ORIGIN)
        assert layer.features[0].feature_class == "building"

    def test_malformed_document(self):
        from pmd.geodata import MalformedDocument

        with pytest.raises(MalformedDocument):
            ingest_overpass("not json", self.MAPPING, self.ORIGIN)
        with pytest.raises(MalformedDocument):
            ingest_overpass('{"nope": 1}', self.MAPPING, self.ORIGIN)

    def test_round_trip_preserves_coordinates(self):
        elements = [
            self.node(1, 50.0004, 8.0007),
            self.node(2, 50.0001, 8.0003),
            {"type": "way", "id": 10, "nodes": [1, 2], "tags": {"highway": "primary"}},
        ]
        layer = ingest_overpass(self.doc(elements), self.MAPPING, self.ORIGIN)
        verts = layer.features[0].geometry.vertices
        for vert, (lat, lon) in zip(verts, [(50.0004, 8.0007), (50.0001, 8.0003)]):
            geo = unproject(vert, self.ORIGIN)
            assert geo.lat == pytest.approx(lat, abs=1e-9)
            assert geo.lon == pytest.approx(lon, abs=1e-9)


class TestClassMappingFile:
    def test_bundled_mapping_loads_in_order(self):
        from pmd import data
        from pmd.geodata import load_class_mapping

        mapping = load_class_mapping(data.class_mapping_path())
        assert [r.feature_class for r in mapping.rules] == [
            "park",
            "primary",
            "secondary",
            "tertiary",
            "building",
        ]
        assert mapping.buffer_width_for("primary") == 6.0
        assert mapping.buffer_width_for("park") == 0.0
        assert mapping.classify({"building": "garage"}).feature_class == "building"
        assert mapping.classify({"amenity": "bench"}) is None

    def test_first_matching_rule_wins(self):
        mapping = ClassMapping(
            (
                MappingRule("highway", "primary", "primary", 6.0),
                MappingRule("highway", "*", "road", 3.0),
            )
        )
        assert mapping.classify({"highway": "primary"}).feature_class == "primary"
        assert mapping.classify({"highway": "service"}).feature_class == "road"


class TestOverpassQuery:
    def test_query_template_for_mapped_classes(self):
        from pmd.geodata import build_query

        mapping = ClassMapping(
            (
                MappingRule("highway", "primary", "primary", 6.0),
                MappingRule("building", "*", "building", 0.0),
            )
        )
        query = build_query(mapping, (49.86, 8.63, 49.88, 8.67))
        assert "[out:json]" in query
        assert 'way["highway"="primary"](49.8600000,8.6300000,49.8800000,8.6700000);' in query
        assert 'way["building"](49.8600000,8.6300000,49.8800000,8.6700000);' in query
        assert query.rstrip().endswith("out body; >; out skel qt;")


class TestRingSimple:
    def test_simple(self):
        assert ring_is_simple(UNIT_SQUARE)

    def test_bowtie_rejected(self):
        bowtie = [(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)]
        assert not ring_is_simple(bowtie)

    def test_polygon_constructor_rejects_self_intersection(self):
        with pytest.raises(ValueError):
            PolygonGeometry(
                (LocalPoint(0, 0), LocalPoint(1, 1), LocalPoint(1, 0), LocalPoint(0, 1))
            )
