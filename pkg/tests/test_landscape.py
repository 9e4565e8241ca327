"""Landscape computation, documents, and the content-addressed cache."""

import numpy as np
import pytest

from pmd import data
from pmd.dsl import parse, reassign
from pmd.geodata import GeoPoint
from pmd.inference import ground, query_probability
from pmd.landscape import (
    DEFAULT_QUERY,
    DimensionMismatch,
    LandscapeCache,
    LandscapeError,
    MalformedPmlDocument,
    Pml,
    PmlProvenance,
    compute_pml,
    load_pml,
    pml_to_csv,
    save_pml,
)
from pmd.uncertainty import ClassField, FieldProvenance, Grid, RelationField


def varied_field(n=4) -> RelationField:
    """Small field with per-cell variation in every relation parameter."""
    grid = Grid(GeoPoint(0.0, 0.0), n, n, 40.0)
    cells = grid.cell_count
    rng = np.random.default_rng(5)
    shape = (n, n)

    def raster(lo, hi):
        return rng.uniform(lo, hi, cells).reshape(shape)

    relations = {
        "primary": ClassField(raster(5, 30), raster(1, 25), raster(0, 1)),
        "secondary": ClassField(raster(5, 60), raster(1, 25), raster(0, 1)),
        "tertiary": ClassField(raster(2, 50), raster(1, 25), raster(0, 1)),
        "operator": ClassField(raster(10, 600), raster(4, 100), np.zeros(shape)),
        "park": ClassField(raster(0, 40), raster(1, 9), raster(0, 1)),
    }
    classes = tuple(relations)
    return RelationField(grid, classes, relations, FieldProvenance(321, 100, "varied"))


@pytest.fixture(scope="module")
def listing():
    return parse(data.listing_text())


@pytest.fixture(scope="module")
def field():
    return varied_field()


def simple_pml(values, n=2) -> Pml:
    grid = Grid(GeoPoint(0.0, 0.0), n, n, 10.0)
    return Pml(grid, tuple(values), "landscape(X, Y)", {}, PmlProvenance("p", "f", 0))


class TestComputePml:
    def test_certain_program_is_all_ones(self, field):
        program = parse("1.0::ok.\nlandscape(X, Y) :- ok.")
        pml = compute_pml(program, field)
        assert all(v == 1.0 for v in pml.values)

    def test_impossible_program_is_all_zeros(self, field):
        program = parse("0.0::ok.\nlandscape(X, Y) :- ok.")
        pml = compute_pml(program, field)
        assert all(v == 0.0 for v in pml.values)

    def test_matches_independent_per_cell_queries(self, listing, field):
        pml = compute_pml(listing, field)
        for row in range(field.grid.height_cells):
            for col in range(field.grid.width_cells):
                gp = ground(listing, (row, col), field, DEFAULT_QUERY)
                assert pml.at(row, col) == query_probability(gp)

    def test_parallel_equals_serial(self, listing, field):
        serial = compute_pml(listing, field)
        parallel = compute_pml(listing, field, workers=4)
        assert serial.values == parallel.values
        assert save_pml(serial) == save_pml(parallel)

    def test_assignment_coherence(self, listing, field):
        assignment = {"standard": "special", "day": "night"}
        direct = compute_pml(listing, field, assignment)
        pre = compute_pml(reassign(listing, assignment), field, assignment)
        assert direct.values == pre.values

    def test_assignment_changes_values(self, listing, field):
        std = compute_pml(listing, field, {"standard": "standard", "day": "day"})
        spc = compute_pml(listing, field, {"standard": "special", "day": "day"})
        assert spc.values != std.values
        assert all(a >= b for a, b in zip(spc.values, std.values))

    def test_error_carries_cell_index(self, field):
        program = parse("landscape(X, Y) :- over(X, Y, river).")
        with pytest.raises(LandscapeError) as err:
            compute_pml(program, field)
        assert err.value.cell == (0, 0)


class TestDocuments:
    def test_round_trip(self):
        pml = simple_pml([0.25, 1.0, 0.0, 0.7071067811865476])
        assert load_pml(save_pml(pml)) == pml

    def test_dimension_mismatch(self):
        doc = save_pml(simple_pml([0.1, 0.2, 0.3, 0.4]))
        broken = doc.replace('"values": [', '"values": [0.9,', 1)
        with pytest.raises(DimensionMismatch):
            load_pml(broken)

    def test_range_check(self):
        doc = save_pml(simple_pml([0.1, 0.2, 0.3, 0.4]))
        broken = doc.replace("0.1", "1.5")
        with pytest.raises(MalformedPmlDocument):
            load_pml(broken)

    def test_not_json(self):
        with pytest.raises(MalformedPmlDocument):
            load_pml("certainly not json")

    def test_csv_export(self):
        pml = simple_pml([0.1, 0.2, 0.3, 0.4])
        lines = pml_to_csv(pml).strip().split("\n")
        assert lines == ["0.1,0.2", "0.3,0.4"]

    def test_save_is_deterministic(self, listing, field):
        a = compute_pml(listing, field)
        b = compute_pml(listing, field)
        assert save_pml(a) == save_pml(b)
        assert a.digest() == b.digest()


class TestCache:
    def test_cache_returns_identical_object(self, listing, field):
        cache = LandscapeCache()
        first = cache.get_or_compute(listing, field, {"standard": "special"})
        second = cache.get_or_compute(listing, field, {"standard": "special"})
        assert first is second
        assert len(cache) == 1

    def test_cache_distinguishes_assignments(self, listing, field):
        cache = LandscapeCache()
        a = cache.get_or_compute(listing, field, {"day": "day"})
        b = cache.get_or_compute(listing, field, {"day": "night"})
        assert a is not b
        assert len(cache) == 2
