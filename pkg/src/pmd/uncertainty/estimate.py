"""Monte-Carlo estimation of distance and over relations on the grid.

For every sample, every feature is perturbed once (one affine draw per feature
per sample, shared by all cells), then per cell and class the minimum distance
and areal coverage are reduced. The estimator is vectorized over cells, and
per-cell results depend only on that cell's column of arithmetic, so chunked
or parallel evaluation is bit-identical to a full serial pass.
"""

from __future__ import annotations

import numpy as np

from ..geodata import ClassMapping, MapLayer, PointGeometry, PolygonGeometry, PolylineGeometry
from ..geodata.geometry import (
    batch_point_in_polygon,
    batch_polygon_distance,
    batch_polyline_distance,
    batch_segment_distance,
    buffer_ring,
)
from ..util import digest_obj
from .field import VARIANCE_FLOOR, ClassField, FieldProvenance, RelationField
from .grid import Grid
from .noise import AffineNoiseModel, SampleConfig, feature_draws, perturb_vertices, _geometry_vertices


class InvalidConfig(ValueError):
    pass


def _distance_samples(geom, perturbed: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """(N, M) distances from the M cell centers to each perturbed copy."""
    if isinstance(geom, PointGeometry):
        pts = perturbed[:, 0, :]
        return batch_segment_distance(centers, pts, pts)
    if isinstance(geom, PolylineGeometry):
        return batch_polyline_distance(centers, perturbed)
    return batch_polygon_distance(centers, perturbed)


def _over_samples(geom, perturbed: np.ndarray, centers: np.ndarray, buffer_width: float) -> np.ndarray:
    """(N, M) booleans: cell center covered by the perturbed footprint."""
    n = perturbed.shape[0]
    if isinstance(geom, PolygonGeometry):
        return batch_point_in_polygon(centers, perturbed)
    if isinstance(geom, PolylineGeometry) and buffer_width > 0.0:
        rows = []
        for i in range(n):
            ring = np.asarray(buffer_ring([tuple(v) for v in perturbed[i]], buffer_width))
            rows.append(batch_point_in_polygon(centers, ring))
        return np.stack(rows)
    # Points and zero-width lines have no area.
    return np.zeros((n, centers.shape[0]), dtype=bool)


def estimate_for_centers(
    layer: MapLayer,
    centers: np.ndarray,
    classes: list[str],
    models: dict[str, AffineNoiseModel],
    config: SampleConfig,
    mapping: ClassMapping | None = None,
) -> dict[str, dict[str, np.ndarray]]:
    """Raw per-center estimates; `centers` is (M, 2) in the local frame."""
    n = config.sample_count
    m = centers.shape[0]
    results: dict[str, dict[str, np.ndarray]] = {}
    for cls in classes:
        model = models.get(cls)
        if model is None:
            raise InvalidConfig(f"no noise model for class {cls}")
        indexed = [(i, f) for i, f in enumerate(layer.features) if f.feature_class == cls]
        if not indexed:
            # Documented sentinel: an absent class is infinitely far and never under foot.
            results[cls] = {
                "distance_mean": np.full(m, np.inf),
                "distance_var": np.full(m, VARIANCE_FLOOR),
                "over_prob": np.zeros(m),
            }
            continue
        buffer_width = mapping.buffer_width_for(cls) if mapping is not None else 0.0
        dist = None
        over = np.zeros((n, m), dtype=bool)
        for feature_index, feature in indexed:
            draws = feature_draws(config.seed, feature_index, n)
            verts = _geometry_vertices(feature.geometry)
            perturbed = perturb_vertices(verts, model, draws)
            d = _distance_samples(feature.geometry, perturbed, centers)
            dist = d if dist is None else np.minimum(dist, d)
            over |= _over_samples(feature.geometry, perturbed, centers, buffer_width)
        results[cls] = {
            "distance_mean": dist.mean(axis=0),
            "distance_var": np.maximum(dist.var(axis=0, ddof=1), VARIANCE_FLOOR),
            "over_prob": over.sum(axis=0) / n,
        }
    return results


def estimate_relations(
    layer: MapLayer,
    grid: Grid,
    classes: list[str],
    models: dict[str, AffineNoiseModel],
    config: SampleConfig,
    mapping: ClassMapping | None = None,
) -> RelationField:
    """Estimate the relation parameters for every grid cell.

    Deterministic given (layer, grid, models, config); the class mapping only
    supplies buffer widths for `over` on line features.
    """
    centers = grid.cell_centers()
    shape = (grid.height_cells, grid.width_cells)
    raw = estimate_for_centers(layer, centers, classes, models, config, mapping)
    relations = {
        cls: ClassField(
            distance_mean=block["distance_mean"].reshape(shape),
            distance_var=block["distance_var"].reshape(shape),
            over_prob=block["over_prob"].reshape(shape),
        )
        for cls, block in raw.items()
    }
    model_digest = digest_obj({cls: models[cls].to_dict() for cls in classes})
    provenance = FieldProvenance(config.seed, config.sample_count, model_digest)
    return RelationField(grid, tuple(classes), relations, provenance)
