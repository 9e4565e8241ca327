"""Scenario bundles: configuration file, pipeline assembly, engine facade.

A scenario file names the rule program, the map fixture and class mapping,
and fixes the grid, the per-class noise models, the sampling seed, the
operator/start/goal positions and the clearance and pruning thresholds. All
randomness flows from the single scenario seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from pathlib import Path
from threading import Lock

import yaml

from .ceo import ExplanationReport, Mission, OptimizationResult, clearance, explain, optimize
from .dsl import (
    Atom,
    Compare,
    ParameterSpace,
    Pos,
    Neg,
    Program,
    Rule,
    Symbol,
    parse,
    reassign,
    validate,
)
from .geodata import (
    ClassMapping,
    Feature,
    GeoPoint,
    LocalPoint,
    MapLayer,
    PointGeometry,
    ingest_overpass,
    load_class_mapping,
)
from .inference import RELATION_PREDICATES
from .landscape import DEFAULT_QUERY, LandscapeCache, Pml, program_digest
from .planner import Path as PlannedPath, build_graph, shortest_path
from .uncertainty import AffineNoiseModel, Grid, RelationField, SampleConfig, estimate_relations

OPERATOR_CLASS = "operator"


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    program_path: Path
    map_path: Path
    class_mapping_path: Path
    grid: Grid
    noise_default: AffineNoiseModel
    noise_overrides: dict[str, AffineNoiseModel]
    samples: SampleConfig
    operator: LocalPoint | None  # None: operator stands at the start point
    start: LocalPoint
    goal: LocalPoint
    t_j: float
    t_p: float
    assignment: dict[str, str]

    def noise_for(self, feature_class: str) -> AffineNoiseModel:
        return self.noise_overrides.get(feature_class, self.noise_default)

    def operator_position(self) -> LocalPoint:
        return self.operator if self.operator is not None else self.start


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text(encoding="utf-8"))
    except (OSError, yaml.YAMLError) as err:
        raise ScenarioError(f"cannot read scenario {path}: {err}") from err
    if not isinstance(doc, dict) or doc.get("version") != 1:
        raise ScenarioError("scenario file must be a version-1 mapping")
    base = path.parent

    def resolve(key: str) -> Path:
        target = base / str(doc[key])
        if not target.exists():
            raise ScenarioError(f"{key} file {target} does not exist")
        return target

    try:
        grid_doc = doc["grid"]
        grid = Grid(
            GeoPoint(float(grid_doc["origin"]["lat"]), float(grid_doc["origin"]["lon"])),
            int(grid_doc["width_cells"]),
            int(grid_doc["height_cells"]),
            float(grid_doc["cell_size"]),
        )
        noise_doc = dict(doc.get("noise") or {})
        default = AffineNoiseModel.from_dict(noise_doc.pop("default", {}))
        overrides = {cls: AffineNoiseModel.from_dict(d) for cls, d in noise_doc.items()}
        samples_doc = doc.get("samples") or {}
        samples = SampleConfig(int(samples_doc.get("count", 100)), int(samples_doc.get("seed", 0)))
        operator_doc = doc.get("operator", "start")
        operator = None if operator_doc == "start" else LocalPoint(*map(float, operator_doc))
        start = LocalPoint(*map(float, doc["start"]))
        goal = LocalPoint(*map(float, doc["goal"]))
        thresholds = doc["thresholds"]
        t_j = float(thresholds["t_j"])
        t_p = float(thresholds["t_p"])
        assignment = {str(k): str(v) for k, v in (doc.get("assignment") or {}).items()}
    except (KeyError, TypeError, ValueError) as err:
        raise ScenarioError(f"bad scenario field: {err}") from err
    if not 0.0 <= t_j <= 1.0 or not 0.0 <= t_p <= 1.0:
        raise ScenarioError("thresholds must lie in [0, 1]")
    return Scenario(
        program_path=resolve("program"),
        map_path=resolve("map"),
        class_mapping_path=resolve("class_mapping"),
        grid=grid,
        noise_default=default,
        noise_overrides=overrides,
        samples=samples,
        operator=operator,
        start=start,
        goal=goal,
        t_j=t_j,
        t_p=t_p,
        assignment=assignment,
    )


def relation_classes(program: Program) -> tuple[str, ...]:
    """Classes named in distance/over atoms inside rule bodies, in first-use order."""
    classes: list[str] = []

    def visit_atom(atom: Atom):
        if atom.predicate in RELATION_PREDICATES and atom.arity == 3:
            arg = atom.args[2]
            if isinstance(arg, Symbol) and arg.name not in classes:
                classes.append(arg.name)

    for clause in program.clauses:
        if not isinstance(clause, Rule):
            continue
        for conj in clause.body:
            for lit in conj:
                if isinstance(lit, (Pos, Neg)):
                    visit_atom(lit.atom)
                elif isinstance(lit, Compare):
                    for side in (lit.left, lit.right):
                        if isinstance(side, Atom):
                            visit_atom(side)
    return tuple(classes)


@dataclass
class ScenarioEngine:
    """Loaded scenario plus the shared landscape cache; the core behind CLI and service."""

    scenario: Scenario
    program: Program = dc_field(init=False)
    parameters: ParameterSpace = dc_field(init=False)
    mapping: ClassMapping = dc_field(init=False)
    layer: MapLayer = dc_field(init=False)
    classes: tuple[str, ...] = dc_field(init=False)

    def __post_init__(self):
        source = self.scenario.program_path.read_text(encoding="utf-8")
        self.program = parse(source)
        diagnostics = validate(self.program)
        if diagnostics:
            summary = "; ".join(str(d) for d in diagnostics)
            raise ScenarioError(f"program fails validation: {summary}")
        self.parameters = self.program.parameters
        self.mapping = load_class_mapping(self.scenario.class_mapping_path)
        document = self.scenario.map_path.read_text(encoding="utf-8")
        layer = ingest_overpass(document, self.mapping, self.scenario.grid.origin)
        operator = Feature(
            OPERATOR_CLASS, OPERATOR_CLASS, PointGeometry(self.scenario.operator_position())
        )
        self.layer = MapLayer(layer.origin, layer.features + (operator,))
        self.classes = relation_classes(self.program)
        self._field: RelationField | None = None
        self._field_lock = Lock()
        self._cache = LandscapeCache()

    @property
    def t_j(self) -> float:
        return self.scenario.t_j

    @property
    def t_p(self) -> float:
        return self.scenario.t_p

    @property
    def field(self) -> RelationField:
        """Relation field for the scenario, estimated once and shared."""
        with self._field_lock:
            if self._field is None:
                models = {cls: self.scenario.noise_for(cls) for cls in self.classes}
                self._field = estimate_relations(
                    self.layer,
                    self.scenario.grid,
                    list(self.classes),
                    models,
                    self.scenario.samples,
                    self.mapping,
                )
            return self._field

    def parameter_domains(self) -> list[tuple[str, tuple[str, ...]]]:
        return [(p.name, p.domain) for p in self.parameters]

    def full_assignment(self, overrides: dict[str, str] | None = None) -> dict[str, str]:
        """Scenario defaults overlaid with per-request overrides, then validated."""
        assignment = self.parameters.current_assignment()
        assignment.update(self.scenario.assignment)
        assignment.update(overrides or {})
        reassign(self.program, assignment)  # raises on unknown names or values
        return assignment

    def landscape(self, assignment: dict[str, str] | None = None, query=DEFAULT_QUERY) -> Pml:
        full = self.full_assignment(assignment)
        return self._cache.get_or_compute(self.program, self.field, full, query)

    def start_cell(self) -> tuple[int, int]:
        return self.scenario.grid.snap(self.scenario.start)

    def goal_cell(self) -> tuple[int, int]:
        return self.scenario.grid.snap(self.scenario.goal)

    def plan(
        self,
        assignment: dict[str, str] | None = None,
        start: LocalPoint | None = None,
        goal: LocalPoint | None = None,
    ) -> tuple[PlannedPath | None, Pml]:
        pml = self.landscape(assignment)
        grid = self.scenario.grid
        start_cell = grid.snap(start or self.scenario.start)
        goal_cell = grid.snap(goal or self.scenario.goal)
        path = shortest_path(build_graph(pml, self.t_p), start_cell, goal_cell)
        return path, pml

    def clearance_for_path(self, path: PlannedPath, assignment: dict[str, str] | None = None):
        pml = self.landscape(assignment)
        mission = Mission.from_path(path, pml.assignment)
        return clearance(mission, pml, self.t_j)

    def explain(
        self,
        proposed: dict[str, str] | None = None,
        mode: str = "oat",
        start: LocalPoint | None = None,
        goal: LocalPoint | None = None,
    ) -> ExplanationReport:
        grid = self.scenario.grid
        return explain(
            self,
            grid.snap(start or self.scenario.start),
            grid.snap(goal or self.scenario.goal),
            self.full_assignment(proposed),
            mode,
        )

    def optimize(
        self, start: LocalPoint | None = None, goal: LocalPoint | None = None
    ) -> OptimizationResult:
        grid = self.scenario.grid
        return optimize(
            self,
            grid.snap(start or self.scenario.start),
            grid.snap(goal or self.scenario.goal),
        )

    def summary(self) -> dict:
        """Scenario overview served to the workbench and scripts."""
        space = self.parameters
        full = self.full_assignment()
        return {
            "parameters": [
                {"name": p.name, "domain": list(p.domain), "current": full[p.name]}
                for p in space
            ],
            "grid": self.scenario.grid.to_dict(),
            "thresholds": {"t_j": self.t_j, "t_p": self.t_p},
            "start": [self.scenario.start.east, self.scenario.start.north],
            "goal": [self.scenario.goal.east, self.scenario.goal.north],
            "operator": [
                self.scenario.operator_position().east,
                self.scenario.operator_position().north,
            ],
            "classes": list(self.classes),
            "program_digest": program_digest(self.program),
        }

