"""Navigation grid over the local mission frame."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geodata import GeoPoint, LocalPoint


class OutOfGrid(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    """Row-major cell lattice anchored at the southwest corner of the local frame.

    Cell (i, j) has center ((j + 0.5) * cell_size, (i + 0.5) * cell_size);
    i counts rows northward, j counts columns eastward.
    """

    origin: GeoPoint
    width_cells: int
    height_cells: int
    cell_size: float

    def __post_init__(self):
        if self.width_cells < 1 or self.height_cells < 1:
            raise ValueError("grid needs at least one cell per axis")
        if self.cell_size <= 0:
            raise ValueError("cell size must be positive")

    @property
    def cell_count(self) -> int:
        return self.width_cells * self.height_cells

    def center(self, row: int, col: int) -> LocalPoint:
        if not (0 <= row < self.height_cells and 0 <= col < self.width_cells):
            raise OutOfGrid(f"cell ({row}, {col}) outside {self.height_cells}x{self.width_cells}")
        return LocalPoint((col + 0.5) * self.cell_size, (row + 0.5) * self.cell_size)

    def cell_centers(self) -> np.ndarray:
        """All cell centers, row-major, as an (N, 2) array of (east, north)."""
        cols = (np.arange(self.width_cells) + 0.5) * self.cell_size
        rows = (np.arange(self.height_cells) + 0.5) * self.cell_size
        ee, nn = np.meshgrid(cols, rows)
        return np.column_stack([ee.ravel(), nn.ravel()])

    def flat_index(self, row: int, col: int) -> int:
        return row * self.width_cells + col

    def cell_of(self, row_col: tuple[int, int]) -> int:
        return self.flat_index(*row_col)

    def snap(self, p: LocalPoint) -> tuple[int, int]:
        """Nearest cell for a local point; rejects points beyond one cell of slack."""
        col = int(np.floor(p.east / self.cell_size))
        row = int(np.floor(p.north / self.cell_size))
        col = min(max(col, 0), self.width_cells - 1)
        row = min(max(row, 0), self.height_cells - 1)
        center = self.center(row, col)
        if max(abs(center.east - p.east), abs(center.north - p.north)) > self.cell_size:
            raise OutOfGrid(
                f"point ({p.east}, {p.north}) is more than one cell outside the grid"
            )
        return row, col

    def to_dict(self) -> dict:
        return {
            "origin": {"lat": self.origin.lat, "lon": self.origin.lon},
            "width_cells": self.width_cells,
            "height_cells": self.height_cells,
            "cell_size": self.cell_size,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Grid":
        return cls(
            GeoPoint(doc["origin"]["lat"], doc["origin"]["lon"]),
            int(doc["width_cells"]),
            int(doc["height_cells"]),
            float(doc["cell_size"]),
        )
