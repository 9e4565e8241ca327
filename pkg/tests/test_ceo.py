"""Clearance boundary semantics, explanation tables, exhaustive optimization."""

from fractions import Fraction

import pytest

from pmd.ceo import (
    AssignmentMismatch,
    Mission,
    ViaPoint,
    clearance,
    explain,
    optimize,
)
from pmd.geodata import GeoPoint
from pmd.landscape import Pml, PmlProvenance
from pmd.planner import build_graph, shortest_path
from pmd.uncertainty import Grid


def make_pml(values, height, width, assignment=None, cell=10.0) -> Pml:
    grid = Grid(GeoPoint(0.0, 0.0), width, height, cell)
    return Pml(
        grid, tuple(values), "landscape(X, Y)", dict(assignment or {}), PmlProvenance("p", "f", 0)
    )


def mission_on_cells(pml, cells, assignment=None):
    points = tuple(
        ViaPoint(*((c + 0.5) * pml.grid.cell_size, (r + 0.5) * pml.grid.cell_size))
        for r, c in cells
    )
    return Mission(points, dict(assignment or {}))


class StubContext:
    """Mission context over hand-built landscapes, one per assignment."""

    def __init__(self, domains, landscapes, t_p=0.0, t_j=0.1):
        self._domains = domains
        self._landscapes = landscapes
        self.t_p = t_p
        self.t_j = t_j
        self.calls = 0

    def parameter_domains(self):
        return list(self._domains)

    def landscape(self, assignment):
        self.calls += 1
        return self._landscapes[tuple(sorted(assignment.items()))]


class TestClearance:
    def test_perfect_path_clears(self):
        pml = make_pml([1.0] * 4, 2, 2)
        verdict = clearance(mission_on_cells(pml, [(0, 0), (0, 1)]), pml, 0.1)
        assert verdict.j == 0
        assert verdict.cleared

    def test_boundary_is_strict(self):
        pml = make_pml([0.9, 0.8, 1.0, 1.0], 2, 2)
        mission = mission_on_cells(pml, [(0, 0), (0, 1), (1, 1)])
        at_threshold = clearance(mission, pml, 0.1)
        assert at_threshold.j == Fraction(1, 10)
        assert not at_threshold.cleared
        just_above = clearance(mission, pml, 0.1 + 1e-9)
        assert just_above.cleared

    def test_monotone_in_threshold(self):
        pml = make_pml([0.9, 0.8, 1.0, 1.0], 2, 2)
        mission = mission_on_cells(pml, [(0, 0), (0, 1), (1, 1)])
        cleared_at = [t for t in (0.05, 0.1, 0.2, 0.5) if clearance(mission, pml, t).cleared]
        assert cleared_at == [0.2, 0.5]

    def test_assignment_mismatch_rejected(self):
        pml = make_pml([1.0] * 4, 2, 2, assignment={"day": "night"})
        mission = mission_on_cells(pml, [(0, 0)], assignment={"day": "day"})
        with pytest.raises(AssignmentMismatch):
            clearance(mission, pml, 0.1)

    def test_via_point_labels_must_agree(self):
        pml = make_pml([1.0] * 4, 2, 2, assignment={"day": "day"})
        point = ViaPoint(5.0, 5.0, 0.0, (("day", "night"),))
        mission = Mission((point,), {"day": "day"})
        with pytest.raises(AssignmentMismatch):
            clearance(mission, pml, 0.1)

    def test_out_of_grid_via_point(self):
        from pmd.uncertainty import OutOfGrid

        pml = make_pml([1.0] * 4, 2, 2)
        mission = Mission((ViaPoint(500.0, 500.0),), {})
        with pytest.raises(OutOfGrid):
            clearance(mission, pml, 0.1)

    def test_per_point_probabilities_reported(self):
        pml = make_pml([0.9, 0.8, 1.0, 1.0], 2, 2)
        verdict = clearance(mission_on_cells(pml, [(0, 0), (1, 1)]), pml, 0.5)
        assert verdict.per_point == (((0, 0), 0.9), ((1, 1), 1.0))

    def test_mission_from_path_carries_headings(self):
        pml = make_pml([1.0] * 9, 3, 3)
        path = shortest_path(build_graph(pml, 0.0), (0, 0), (2, 2))
        mission = Mission.from_path(path, {})
        assert len(mission.via_points) == len(path.cells)
        assert mission.via_points[0].yaw == pytest.approx(0.7853981633974483)

    def test_mission_yaw_stays_in_half_open_range(self):
        import math

        pml = make_pml([1.0] * 9, 3, 3)
        westward = shortest_path(build_graph(pml, 0.0), (0, 2), (0, 0))
        mission = Mission.from_path(westward, {})
        assert all(-math.pi <= p.yaw < math.pi for p in mission.via_points)
        assert mission.via_points[0].yaw == -math.pi


def two_param_context(t_p=0.5, t_j=0.1):
    """license in {std, spc}, shift in {d, n}; landscapes chosen per assignment."""
    rasters = {
        ("std", "d"): [0.9, 0.8, 1.0, 1.0],
        ("std", "n"): [0.2, 0.2, 0.2, 0.2],  # everything pruned at t_p=0.5
        ("spc", "d"): [1.0, 1.0, 1.0, 1.0],
        ("spc", "n"): [0.9, 0.9, 0.9, 0.9],
    }
    landscapes = {}
    for (lic, shift), values in rasters.items():
        assignment = {"license": lic, "shift": shift}
        landscapes[tuple(sorted(assignment.items()))] = make_pml(
            values, 2, 2, assignment=assignment
        )
    domains = [("license", ("std", "spc")), ("shift", ("d", "n"))]
    return StubContext(domains, landscapes, t_p=t_p, t_j=t_j)


class TestExplain:
    def test_factorial_covers_product(self):
        report = explain(
            two_param_context(), (0, 0), (1, 1), {"license": "std", "shift": "d"}, "factorial"
        )
        assert len(report.rows) == 4
        infeasible = [r for r in report.rows if not r.feasible]
        assert [r.assignment for r in infeasible] == [{"license": "std", "shift": "n"}]

    def test_oat_on_two_binary_parameters(self):
        report = explain(
            two_param_context(), (0, 0), (1, 1), {"license": "std", "shift": "d"}, "oat"
        )
        assert len(report.rows) == 2
        changed = [
            {k: v for k, v in row.assignment.items() if v != {"license": "std", "shift": "d"}[k]}
            for row in report.rows
        ]
        assert all(len(c) == 1 for c in changed)

    def test_delta_j_relative_to_proposed(self):
        report = explain(
            two_param_context(), (0, 0), (1, 1), {"license": "std", "shift": "d"}, "factorial"
        )
        assert report.proposed.delta_j == 0
        best = next(r for r in report.rows if r.assignment == {"license": "spc", "shift": "d"})
        assert best.delta_j == best.j - report.proposed.j
        assert best.delta_j < 0

    def test_zero_parameter_scenario(self):
        pml = make_pml([1.0] * 4, 2, 2)
        context = StubContext([], {(): pml})
        report = explain(context, (0, 0), (1, 1), {}, "oat")
        assert report.rows == ()
        assert report.proposed.feasible

    def test_infeasible_proposed_leaves_absolute_values(self):
        report = explain(
            two_param_context(), (0, 0), (1, 1), {"license": "std", "shift": "n"}, "factorial"
        )
        assert not report.proposed.feasible
        assert all(r.delta_j is None for r in report.rows)
        assert any(r.j is not None for r in report.rows)

    def test_warm_cache_reproduces_report(self):
        context = two_param_context()
        first = explain(context, (0, 0), (1, 1), {"license": "std", "shift": "d"}, "factorial")
        second = explain(context, (0, 0), (1, 1), {"license": "std", "shift": "d"}, "factorial")
        assert first.to_dict() == second.to_dict()


class TestOptimize:
    def test_picks_minimum_and_matches_factorial(self):
        context = two_param_context()
        result = optimize(context, (0, 0), (1, 1))
        report = explain(context, (0, 0), (1, 1), {"license": "std", "shift": "d"}, "factorial")
        feasible = [r.j for r in report.rows if r.j is not None]
        assert result.best_j == min(feasible)
        assert result.best_assignment == {"license": "spc", "shift": "d"}
        assert result.evaluated == 4

    def test_single_feasible_assignment(self):
        pml = make_pml([1.0] * 4, 2, 2, assignment={"license": "std"})
        context = StubContext(
            [("license", ("std",))], {tuple(sorted({"license": "std"}.items())): pml}
        )
        result = optimize(context, (0, 0), (1, 1))
        assert result.best_assignment == {"license": "std"}

    def test_all_infeasible(self):
        values = [0.9, 0.8, 1.0, 1.0]
        pml = make_pml(values, 2, 2, assignment={"license": "std"})
        context = StubContext(
            [("license", ("std",))],
            {tuple(sorted({"license": "std"}.items())): pml},
            t_p=1.0,
        )
        result = optimize(context, (0, 0), (1, 1))
        assert not result.feasible
        assert result.best_assignment is None

    def test_ties_break_in_declaration_order(self):
        pml_a = make_pml([1.0] * 4, 2, 2, assignment={"p": "a"})
        pml_b = make_pml([1.0] * 4, 2, 2, assignment={"p": "b"})
        context = StubContext(
            [("p", ("a", "b"))],
            {
                tuple(sorted({"p": "a"}.items())): pml_a,
                tuple(sorted({"p": "b"}.items())): pml_b,
            },
        )
        result = optimize(context, (0, 0), (1, 1))
        assert result.best_assignment == {"p": "a"}

    def test_parameter_irrelevance_gives_equal_rows(self):
        pml = make_pml([0.9, 0.9, 0.9, 0.9], 2, 2)
        landscapes = {
            tuple(sorted({"p": v}.items())): make_pml(
                [0.9, 0.9, 0.9, 0.9], 2, 2, assignment={"p": v}
            )
            for v in ("a", "b")
        }
        context = StubContext([("p", ("a", "b"))], landscapes)
        report = explain(context, (0, 0), (1, 1), {"p": "a"}, "factorial")
        js = {r.j for r in report.rows}
        assert len(js) == 1
