"""Landscape-to-graph translation and minimum-violation path search.

The landscape raster becomes an 8-connected directed graph; the edge into a
cell weighs 1 - P_L of that cell, and edges into cells below the pruning
threshold are dropped. Dijkstra over these weights yields the path whose
normalized cost J (average violation probability over all via-points) goes to
the clearance check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from heapq import heappop, heappush

from .landscape import Pml
from .uncertainty import OutOfGrid
from .util import decimal_fraction

# Neighbor offsets in fixed scan order (row-major), giving deterministic
# relaxation order and the diagonal-first staircase on uniform landscapes.
_NEIGHBORS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


@dataclass(frozen=True)
class NavGraph:
    pml: Pml
    t_p: float

    def __post_init__(self):
        if not 0.0 <= self.t_p <= 1.0:
            raise ValueError(f"pruning threshold {self.t_p} outside [0, 1]")

    @property
    def height(self) -> int:
        return self.pml.grid.height_cells

    @property
    def width(self) -> int:
        return self.pml.grid.width_cells

    def admissible(self, row: int, col: int) -> bool:
        """A cell can be entered iff its probability clears the pruning threshold."""
        return self.pml.at(row, col) >= self.t_p

    def weight(self, row: int, col: int) -> float:
        return 1.0 - self.pml.at(row, col)

    def neighbors(self, row: int, col: int):
        for dr, dc in _NEIGHBORS:
            r, c = row + dr, col + dc
            if 0 <= r < self.height and 0 <= c < self.width:
                yield r, c

    def edges(self):
        """All directed edges (u, v, weight); v is admissible by construction."""
        for row in range(self.height):
            for col in range(self.width):
                for r, c in self.neighbors(row, col):
                    if self.admissible(r, c):
                        yield (row, col), (r, c), self.weight(r, c)

    def edge_count(self) -> int:
        return sum(1 for _ in self.edges())


def build_graph(pml: Pml, t_p: float) -> NavGraph:
    return NavGraph(pml, t_p)


@dataclass(frozen=True)
class Path:
    cells: tuple[tuple[int, int], ...]
    via_points: tuple[tuple[float, float], ...]
    total_weight: float

    @property
    def n(self) -> int:
        return len(self.cells)


def shortest_path(graph: NavGraph, start: tuple[int, int], goal: tuple[int, int]) -> Path | None:
    """Dijkstra with deterministic tie-breaking; None when no path survives pruning.

    The heap orders by (distance, row, col), and an established predecessor is
    only replaced on strict improvement, so equal-cost cells settle in scan
    order and repeated runs reproduce the same path.
    """
    grid = graph.pml.grid
    for cell in (start, goal):
        if not (0 <= cell[0] < graph.height and 0 <= cell[1] < graph.width):
            raise OutOfGrid(f"cell {cell} outside {graph.height}x{graph.width}")
    if not graph.admissible(*start):
        return None

    dist: dict[tuple[int, int], float] = {start: 0.0}
    pred: dict[tuple[int, int], tuple[int, int]] = {}
    settled: set[tuple[int, int]] = set()
    heap: list[tuple[float, int, int]] = [(0.0, start[0], start[1])]
    while heap:
        d, row, col = heappop(heap)
        cell = (row, col)
        if cell in settled:
            continue
        settled.add(cell)
        if cell == goal:
            break
        for nxt in graph.neighbors(row, col):
            if nxt in settled or not graph.admissible(*nxt):
                continue
            candidate = d + graph.weight(*nxt)
            if candidate < dist.get(nxt, math.inf):
                dist[nxt] = candidate
                pred[nxt] = cell
                heappush(heap, (candidate, nxt[0], nxt[1]))
    if goal not in settled:
        return None

    cells = [goal]
    while cells[-1] != start:
        cells.append(pred[cells[-1]])
    cells.reverse()
    centers = tuple((grid.center(r, c).east, grid.center(r, c).north) for r, c in cells)
    return Path(tuple(cells), centers, dist[goal])


def path_cost(path: Path, pml: Pml) -> Fraction:
    """Average violation probability over all via-points, start and goal included.

    Computed exactly over the decimal values the landscape documents carry, so
    boundary comparisons against the clearance threshold do not drift.
    """
    total = Fraction(0)
    for row, col in path.cells:
        total += 1 - decimal_fraction(pml.at(row, col))
    return total / len(path.cells)


def path_to_dict(path: Path, pml: Pml) -> dict:
    """Path document: ordered (row, col, east, north) points, J, and provenance."""
    j = path_cost(path, pml)
    return {
        "version": 1,
        "points": [
            [row, col, east, north]
            for (row, col), (east, north) in zip(path.cells, path.via_points)
        ],
        "total_weight": path.total_weight,
        "j": float(j),
        "pml_digest": pml.digest(),
    }


def path_from_dict(doc: dict, pml: Pml) -> Path:
    """Rebuild a path from its document; rows/cols rule, centers come from the grid."""
    cells = tuple((int(p[0]), int(p[1])) for p in doc["points"])
    if not cells:
        raise ValueError("path document carries no points")
    if len(set(cells)) != len(cells):
        raise ValueError("path document repeats a cell")
    for (r1, c1), (r2, c2) in zip(cells, cells[1:]):
        if max(abs(r1 - r2), abs(c1 - c2)) != 1:
            raise ValueError(f"cells ({r1},{c1}) and ({r2},{c2}) are not 8-neighbors")
    grid = pml.grid
    centers = tuple((grid.center(r, c).east, grid.center(r, c).north) for r, c in cells)
    total = 0.0
    for cell in cells[1:]:
        total += 1.0 - pml.at(*cell)
    return Path(cells, centers, total)
