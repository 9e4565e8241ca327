"""Affine map-error model and Monte-Carlo relation estimation."""

from .estimate import InvalidConfig, estimate_for_centers, estimate_relations
from .field import (
    VARIANCE_FLOOR,
    ClassField,
    FieldProvenance,
    MalformedFieldDocument,
    RelationField,
    load_field,
    save_field,
)
from .grid import Grid, OutOfGrid
from .noise import AffineNoiseModel, SampleConfig, feature_draws, perturb_vertices, sample_feature

__all__ = [
    "AffineNoiseModel",
    "ClassField",
    "FieldProvenance",
    "Grid",
    "InvalidConfig",
    "MalformedFieldDocument",
    "OutOfGrid",
    "RelationField",
    "SampleConfig",
    "VARIANCE_FLOOR",
    "estimate_for_centers",
    "estimate_relations",
    "feature_draws",
    "load_field",
    "perturb_vertices",
    "sample_feature",
    "save_field",
]
