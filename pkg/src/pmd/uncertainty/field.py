"""Per-cell estimated relation parameters and their document round-trip."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..util import digest_obj, pretty_json
from .grid import Grid

VARIANCE_FLOOR = 1e-12  # m^2; keeps downstream normal CDFs non-singular


class MalformedFieldDocument(ValueError):
    pass


@dataclass(frozen=True)
class ClassField:
    distance_mean: np.ndarray  # (H, W) meters; +inf when the class has no features
    distance_var: np.ndarray  # (H, W) m^2, floored at VARIANCE_FLOOR
    over_prob: np.ndarray  # (H, W) in [0, 1]

    def __eq__(self, other):
        if not isinstance(other, ClassField):
            return NotImplemented
        return (
            np.array_equal(self.distance_mean, other.distance_mean)
            and np.array_equal(self.distance_var, other.distance_var)
            and np.array_equal(self.over_prob, other.over_prob)
        )


@dataclass(frozen=True)
class FieldProvenance:
    seed: int
    sample_count: int
    model_digest: str

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "sample_count": self.sample_count,
            "model_digest": self.model_digest,
        }


@dataclass(frozen=True)
class RelationField:
    grid: Grid
    classes: tuple[str, ...]
    relations: dict[str, ClassField]
    provenance: FieldProvenance

    def __post_init__(self):
        shape = (self.grid.height_cells, self.grid.width_cells)
        for name, cf in self.relations.items():
            for raster in (cf.distance_mean, cf.distance_var, cf.over_prob):
                if raster.shape != shape:
                    raise ValueError(f"raster for class {name} has shape {raster.shape}, want {shape}")
            if np.any(cf.distance_var < 0):
                raise ValueError(f"negative distance variance for class {name}")
            if np.any((cf.over_prob < 0) | (cf.over_prob > 1)):
                raise ValueError(f"over probability outside [0, 1] for class {name}")

    def parameters_at(self, row: int, col: int, feature_class: str) -> tuple[float, float, float]:
        """(distance mean, distance sigma, over probability) at one cell."""
        cf = self.relations[feature_class]
        return (
            float(cf.distance_mean[row, col]),
            float(np.sqrt(cf.distance_var[row, col])),
            float(cf.over_prob[row, col]),
        )

    def digest(self) -> str:
        return digest_obj(_field_payload(self))


def _field_payload(field: RelationField) -> dict:
    return {
        "version": 1,
        "grid": field.grid.to_dict(),
        "provenance": field.provenance.to_dict(),
        "classes": list(field.classes),
        "relations": {
            name: {
                "distance_mean": cf.distance_mean.ravel().tolist(),
                "distance_var": cf.distance_var.ravel().tolist(),
                "over_prob": cf.over_prob.ravel().tolist(),
            }
            for name, cf in field.relations.items()
        },
    }


def save_field(field: RelationField) -> str:
    return pretty_json(_field_payload(field))


def load_field(document: str) -> RelationField:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as err:
        raise MalformedFieldDocument(str(err)) from err
    if doc.get("version") != 1:
        raise MalformedFieldDocument(f"unsupported field document version {doc.get('version')}")
    grid = Grid.from_dict(doc["grid"])
    shape = (grid.height_cells, grid.width_cells)
    relations = {}
    for name, block in doc["relations"].items():
        arrays = {}
        for key in ("distance_mean", "distance_var", "over_prob"):
            values = block[key]
            if len(values) != grid.cell_count:
                raise MalformedFieldDocument(
                    f"{key} for class {name} has {len(values)} values, want {grid.cell_count}"
                )
            arrays[key] = np.asarray(values, dtype=np.float64).reshape(shape)
        relations[name] = ClassField(**arrays)
    prov = doc["provenance"]
    return RelationField(
        grid,
        tuple(doc["classes"]),
        relations,
        FieldProvenance(int(prov["seed"]), int(prov["sample_count"]), str(prov["model_digest"])),
    )
