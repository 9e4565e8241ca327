"""Clearance verdicts, what-if explanation, and exhaustive mission optimization.

Clearance scores a mission against the landscape computed for the same
parameter assignment: J is the average probability of violating the landscape
over all via-points, and the mission is cleared iff J stays strictly below
the threshold. Explanation re-plans under parameter variations; optimization
scans the whole finite assignment space for the cheapest (setting, path) pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import product
from typing import Protocol

from .landscape import Pml
from .planner import Path, path_cost, path_to_dict, shortest_path, build_graph
from .util import decimal_fraction, digest_obj


class AssignmentMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ViaPoint:
    """One mission step: position, yaw, and the semantic labels in effect.

    Yaw is carried for downstream consumers; no bundled constraint reads it.
    """

    east: float
    north: float
    yaw: float = 0.0
    labels: tuple[tuple[str, str], ...] = ()


@dataclass(frozen=True)
class Mission:
    via_points: tuple[ViaPoint, ...]
    assignment: dict[str, str]

    @classmethod
    def from_path(cls, path: Path, assignment: dict[str, str]) -> "Mission":
        import math

        labels = tuple(sorted(assignment.items()))
        points = []
        for i, (east, north) in enumerate(path.via_points):
            if i + 1 < len(path.via_points):
                nxt = path.via_points[i + 1]
                yaw = math.atan2(nxt[1] - north, nxt[0] - east)
                if yaw >= math.pi:  # atan2 yields (-pi, pi]; yaw lives in [-pi, pi)
                    yaw = -math.pi
            elif points:
                yaw = points[-1].yaw
            else:
                yaw = 0.0
            points.append(ViaPoint(east, north, yaw, labels))
        return cls(tuple(points), dict(assignment))


@dataclass(frozen=True)
class ClearanceVerdict:
    j: Fraction
    t_j: Fraction
    cleared: bool
    per_point: tuple[tuple[tuple[int, int], float], ...]

    def to_dict(self) -> dict:
        return {
            "j": float(self.j),
            "t_j": float(self.t_j),
            "cleared": self.cleared,
            "per_point": [
                {"cell": list(cell), "p": p} for cell, p in self.per_point
            ],
        }


def clearance(mission: Mission, pml: Pml, t_j: float) -> ClearanceVerdict:
    """Score a mission on its matching landscape; cleared iff J < t_j (strict)."""
    if mission.assignment != pml.assignment:
        raise AssignmentMismatch(
            f"mission assignment {mission.assignment} does not match "
            f"landscape assignment {pml.assignment}"
        )
    for point in mission.via_points:
        labels = dict(point.labels)
        for name, value in labels.items():
            if pml.assignment.get(name, value) != value:
                raise AssignmentMismatch(
                    f"via-point label {name}={value} disagrees with landscape "
                    f"assignment {pml.assignment}"
                )

    from .geodata import LocalPoint

    per_point = []
    total = Fraction(0)
    for point in mission.via_points:
        cell = pml.grid.snap(LocalPoint(point.east, point.north))
        p = pml.at(*cell)
        per_point.append((cell, p))
        total += 1 - decimal_fraction(p)
    j = total / len(mission.via_points)
    threshold = decimal_fraction(t_j)
    return ClearanceVerdict(j, threshold, j < threshold, tuple(per_point))


class MissionContext(Protocol):
    """What explanation/optimization need from a loaded scenario."""

    def parameter_domains(self) -> list[tuple[str, tuple[str, ...]]]: ...

    def landscape(self, assignment: dict[str, str]) -> Pml: ...

    @property
    def t_p(self) -> float: ...

    @property
    def t_j(self) -> float: ...


@dataclass(frozen=True)
class ReportRow:
    assignment: dict[str, str]
    feasible: bool
    j: Fraction | None
    delta_j: Fraction | None
    path: Path | None
    path_digest: str | None
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "assignment": dict(self.assignment),
            "feasible": self.feasible,
            "j": None if self.j is None else float(self.j),
            "delta_j": None if self.delta_j is None else float(self.delta_j),
            "path_digest": self.path_digest,
            "error": self.error,
        }


@dataclass(frozen=True)
class ExplanationReport:
    proposed: ReportRow
    rows: tuple[ReportRow, ...]
    mode: str  # "oat" | "factorial"

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "mode": self.mode,
            "proposed": self.proposed.to_dict(),
            "rows": [r.to_dict() for r in self.rows],
        }


@dataclass(frozen=True)
class OptimizationResult:
    best_assignment: dict[str, str] | None
    best_path: Path | None
    best_j: Fraction | None
    evaluated: int
    rows: tuple[ReportRow, ...] = dc_field(default=())

    @property
    def feasible(self) -> bool:
        return self.best_assignment is not None

    def to_dict(self) -> dict:
        return {
            "version": 1,
            "feasible": self.feasible,
            "best_assignment": self.best_assignment,
            "best_j": None if self.best_j is None else float(self.best_j),
            "evaluated": self.evaluated,
            "best_path": None if self.best_path is None else [list(c) for c in self.best_path.cells],
        }


def _evaluate_assignment(
    context: MissionContext,
    assignment: dict[str, str],
    start: tuple[int, int],
    goal: tuple[int, int],
) -> ReportRow:
    try:
        pml = context.landscape(assignment)
        path = shortest_path(build_graph(pml, context.t_p), start, goal)
    except Exception as err:  # recorded in-row, never aborts the report
        return ReportRow(assignment, False, None, None, None, None, str(err))
    if path is None:
        return ReportRow(assignment, False, None, None, None, None)
    j = path_cost(path, pml)
    digest = digest_obj(path_to_dict(path, pml))
    return ReportRow(assignment, True, j, None, path, digest)


def _with_delta(row: ReportRow, baseline: Fraction | None) -> ReportRow:
    if baseline is None or row.j is None:
        return row
    return ReportRow(
        row.assignment, row.feasible, row.j, row.j - baseline, row.path, row.path_digest, row.error
    )


def _variants(context: MissionContext, proposed: dict[str, str], mode: str):
    domains = context.parameter_domains()
    if mode == "factorial":
        names = [name for name, _ in domains]
        for combo in product(*(domain for _, domain in domains)):
            yield dict(zip(names, combo))
    elif mode == "oat":
        for name, domain in domains:
            for value in domain:
                if value != proposed.get(name):
                    yield {**proposed, name: value}
    else:
        raise ValueError(f"unknown explanation mode {mode!r}")


def explain(
    context: MissionContext,
    start: tuple[int, int],
    goal: tuple[int, int],
    proposed: dict[str, str],
    mode: str = "oat",
) -> ExplanationReport:
    """Tabulate how each parameter setting moves the optimal route's cost."""
    proposed_row = _evaluate_assignment(context, proposed, start, goal)
    baseline = proposed_row.j
    rows = tuple(
        _with_delta(_evaluate_assignment(context, variant, start, goal), baseline)
        for variant in _variants(context, proposed, mode)
    )
    return ExplanationReport(_with_delta(proposed_row, baseline), rows, mode)


def optimize(
    context: MissionContext,
    start: tuple[int, int],
    goal: tuple[int, int],
) -> OptimizationResult:
    """Exhaustive scan of the assignment space for the minimum-cost pairing.

    Enumeration follows parameter declaration order and domain order, and only
    a strictly smaller J replaces the incumbent, so ties resolve
    lexicographically and repeat runs agree.
    """
    domains = context.parameter_domains()
    names = [name for name, _ in domains]
    best: ReportRow | None = None
    rows = []
    evaluated = 0
    for combo in product(*(domain for _, domain in domains)):
        assignment = dict(zip(names, combo))
        row = _evaluate_assignment(context, assignment, start, goal)
        rows.append(row)
        evaluated += 1
        if row.j is not None and (best is None or row.j < best.j):
            best = row
    if best is None:
        return OptimizationResult(None, None, None, evaluated, tuple(rows))
    return OptimizationResult(best.assignment, best.path, best.j, evaluated, tuple(rows))
