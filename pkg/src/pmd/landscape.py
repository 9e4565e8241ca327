"""Probabilistic mission landscapes: per-cell query probabilities over the grid."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from threading import Lock

from .dsl import Atom, Program, Variable, parse, pretty_print, reassign
from .inference import ground, query_probability, structural_signature
from .uncertainty import Grid, RelationField
from .util import digest_obj, digest_text, pretty_json

DEFAULT_QUERY = Atom("landscape", (Variable("X"), Variable("Y")))


class MalformedPmlDocument(ValueError):
    pass


class LandscapeError(RuntimeError):
    """Grounding/enumeration failure tagged with the offending cell."""

    def __init__(self, cell: tuple[int, int], cause: Exception):
        self.cell = cell
        self.cause = cause
        super().__init__(f"cell {cell}: {cause}")


class DimensionMismatch(MalformedPmlDocument):
    pass


@dataclass(frozen=True)
class PmlProvenance:
    program_digest: str
    field_digest: str
    seed: int

    def to_dict(self) -> dict:
        return {
            "program_digest": self.program_digest,
            "field_digest": self.field_digest,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class Pml:
    """Scalar raster of query probabilities, row-major from the southwest corner."""

    grid: Grid
    values: tuple[float, ...]
    query: str
    assignment: dict[str, str]
    provenance: PmlProvenance

    def __post_init__(self):
        if len(self.values) != self.grid.cell_count:
            raise DimensionMismatch(
                f"{len(self.values)} values for a {self.grid.cell_count}-cell grid"
            )
        if any(not 0.0 <= v <= 1.0 for v in self.values):
            raise MalformedPmlDocument("probabilities must lie in [0, 1]")

    def at(self, row: int, col: int) -> float:
        return self.values[self.grid.flat_index(row, col)]

    def digest(self) -> str:
        return digest_obj(_pml_payload(self))


def program_digest(program: Program) -> str:
    return digest_text(pretty_print(program))


def compute_pml(
    program: Program,
    field: RelationField,
    assignment: dict[str, str] | None = None,
    query: Atom = DEFAULT_QUERY,
    workers: int | None = None,
) -> Pml:
    """Ground and query every cell; deterministic and schedule-independent.

    Cells are independent; a shared outcome->truth memo (keyed by the ground
    programs' structural signature) removes re-derivation of the rule network
    without changing any result bit.
    """
    assignment = dict(assignment or {})
    assigned = reassign(program, assignment) if assignment else program
    grid = field.grid

    memos: dict[str, dict] = {}
    memo_lock = Lock()

    def cell_value(index: int) -> float:
        row, col = divmod(index, grid.width_cells)
        try:
            gp = ground(assigned, (row, col), field, query)
            signature = structural_signature(gp)
            with memo_lock:
                memo = memos.setdefault(signature, {})
            return query_probability(gp, memo=memo)
        except Exception as err:
            raise LandscapeError((row, col), err) from err

    indices = range(grid.cell_count)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = tuple(pool.map(cell_value, indices))
    else:
        values = tuple(cell_value(i) for i in indices)

    provenance = PmlProvenance(program_digest(program), field.digest(), field.provenance.seed)
    query_text = _format_query(query)
    return Pml(grid, values, query_text, assignment, provenance)


def _format_query(query: Atom) -> str:
    from .dsl import format_atom

    return format_atom(query)


def parse_query(text: str) -> Atom:
    program = parse(text.rstrip().rstrip(".") + ".")
    clause = program.clauses[0]
    return clause.head


def _pml_payload(pml: Pml) -> dict:
    return {
        "version": 1,
        "grid": pml.grid.to_dict(),
        "query": pml.query,
        "assignment": pml.assignment,
        "provenance": pml.provenance.to_dict(),
        "values": list(pml.values),
    }


def save_pml(pml: Pml) -> str:
    return pretty_json(_pml_payload(pml))


def load_pml(document: str) -> Pml:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as err:
        raise MalformedPmlDocument(str(err)) from err
    if doc.get("version") != 1:
        raise MalformedPmlDocument(f"unsupported document version {doc.get('version')}")
    try:
        grid = Grid.from_dict(doc["grid"])
        values = tuple(float(v) for v in doc["values"])
        prov = doc["provenance"]
        provenance = PmlProvenance(
            str(prov["program_digest"]), str(prov["field_digest"]), int(prov["seed"])
        )
        assignment = {str(k): str(v) for k, v in doc["assignment"].items()}
        query = str(doc["query"])
    except (KeyError, TypeError, ValueError) as err:
        raise MalformedPmlDocument(f"bad document field: {err}") from err
    return Pml(grid, values, query, assignment, provenance)


def pml_to_csv(pml: Pml) -> str:
    """Plain comma-separated raster, one line per grid row (south row first)."""
    lines = []
    for row in range(pml.grid.height_cells):
        start = row * pml.grid.width_cells
        lines.append(",".join(repr(v) for v in pml.values[start : start + pml.grid.width_cells]))
    return "\n".join(lines) + "\n"


@dataclass
class LandscapeCache:
    """Content-addressed cache of computed landscapes.

    Keys are (program digest, field digest, assignment), so a stale entry is
    impossible; identical concurrent computations are collapsed or coincide.
    """

    _entries: dict = dc_field(default_factory=dict)
    _lock: Lock = dc_field(default_factory=Lock)

    def get_or_compute(
        self,
        program: Program,
        field: RelationField,
        assignment: dict[str, str] | None = None,
        query: Atom = DEFAULT_QUERY,
        workers: int | None = None,
    ) -> Pml:
        key = (
            program_digest(program),
            field.digest(),
            tuple(sorted((assignment or {}).items())),
            _format_query(query),
        )
        with self._lock:
            hit = self._entries.get(key)
        if hit is not None:
            return hit
        pml = compute_pml(program, field, assignment, query, workers)
        with self._lock:
            return self._entries.setdefault(key, pml)

    def __len__(self) -> int:
        return len(self._entries)
