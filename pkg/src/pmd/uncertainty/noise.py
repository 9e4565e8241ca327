"""Affine perturbation model for map features with counter-based sampling.

Each feature draws one (rotation, scale, translation) tuple per sample; all of
its vertices share that tuple, so the spatial error stays correlated across
the feature. Draws are keyed (seed, feature index) on a counter-based Philox
stream with the sample index as row, which makes any evaluation schedule
reproduce identical samples bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..geodata import Feature, PointGeometry, PolygonGeometry, PolylineGeometry
from ..geodata.features import FeatureGeometry
from ..geodata.projection import LocalPoint


@dataclass(frozen=True)
class AffineNoiseModel:
    translation_cov: tuple[tuple[float, float], tuple[float, float]] = ((0.0, 0.0), (0.0, 0.0))
    rotation_sigma: float = 0.0
    scale_sigma: float = 0.0

    def __post_init__(self):
        cov = np.asarray(self.translation_cov, dtype=np.float64)
        if cov.shape != (2, 2):
            raise ValueError("translation covariance must be 2x2")
        if not np.allclose(cov, cov.T):
            raise ValueError("translation covariance must be symmetric")
        if np.linalg.eigvalsh(cov).min() < -1e-9:
            raise ValueError("translation covariance must be positive semi-definite")
        if self.rotation_sigma < 0 or self.scale_sigma < 0:
            raise ValueError("rotation and scale sigmas must be non-negative")

    @property
    def is_zero(self) -> bool:
        return (
            self.rotation_sigma == 0.0
            and self.scale_sigma == 0.0
            and all(v == 0.0 for row in self.translation_cov for v in row)
        )

    def translation_factor(self) -> np.ndarray:
        """Lower-triangular-ish factor L with L @ L.T = translation_cov."""
        cov = np.asarray(self.translation_cov, dtype=np.float64)
        if not cov.any():
            return np.zeros((2, 2))
        try:
            return np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            # Semi-definite covariance: factor through the eigendecomposition.
            values, vectors = np.linalg.eigh(cov)
            return vectors @ np.diag(np.sqrt(np.clip(values, 0.0, None)))

    def to_dict(self) -> dict:
        return {
            "translation_cov": [list(row) for row in self.translation_cov],
            "rotation_sigma": self.rotation_sigma,
            "scale_sigma": self.scale_sigma,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "AffineNoiseModel":
        cov = doc.get("translation_cov", [[0.0, 0.0], [0.0, 0.0]])
        return cls(
            translation_cov=tuple(tuple(float(v) for v in row) for row in cov),
            rotation_sigma=float(doc.get("rotation_sigma", 0.0)),
            scale_sigma=float(doc.get("scale_sigma", 0.0)),
        )


@dataclass(frozen=True)
class SampleConfig:
    sample_count: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.sample_count < 2:
            raise ValueError("variance estimation needs at least 2 samples")


def feature_draws(seed: int, feature_index: int, sample_count: int) -> np.ndarray:
    """(sample_count, 4) standard normals on the feature's own Philox stream."""
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, feature_index & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.standard_normal((sample_count, 4))


def _geometry_vertices(geom: FeatureGeometry) -> np.ndarray:
    if isinstance(geom, PointGeometry):
        return np.array([[geom.point.east, geom.point.north]])
    if isinstance(geom, PolylineGeometry):
        return np.array([[p.east, p.north] for p in geom.vertices])
    return np.array([[p.east, p.north] for p in geom.ring])


def _rebuild_geometry(geom: FeatureGeometry, verts: np.ndarray) -> FeatureGeometry:
    points = tuple(LocalPoint(float(e), float(n)) for e, n in verts)
    if isinstance(geom, PointGeometry):
        return PointGeometry(points[0])
    if isinstance(geom, PolylineGeometry):
        return PolylineGeometry(points)
    return PolygonGeometry(points)


def perturb_vertices(
    verts: np.ndarray, model: AffineNoiseModel, draws: np.ndarray
) -> np.ndarray:
    """Apply per-sample affine maps to (V, 2) vertices; draws is (N, 4).

    Returns (N, V, 2). Rotation and scale act about the vertex centroid; with
    zero rotation/scale noise the spatial part is skipped entirely so that a
    zero-noise model reproduces the input bits.
    """
    n = draws.shape[0]
    factor = model.translation_factor()
    translations = draws[:, :2] @ factor.T

    if model.rotation_sigma == 0.0 and model.scale_sigma == 0.0:
        base = np.broadcast_to(verts, (n,) + verts.shape)
        if not factor.any():
            return base.copy()
        return base + translations[:, None, :]

    centroid = verts.mean(axis=0)
    centered = verts - centroid
    theta = draws[:, 2] * model.rotation_sigma
    scale = 1.0 + draws[:, 3] * model.scale_sigma
    cos = np.cos(theta) * scale
    sin = np.sin(theta) * scale
    rotated = np.empty((n,) + verts.shape)
    rotated[:, :, 0] = cos[:, None] * centered[:, 0] - sin[:, None] * centered[:, 1]
    rotated[:, :, 1] = sin[:, None] * centered[:, 0] + cos[:, None] * centered[:, 1]
    return rotated + centroid + translations[:, None, :]


def sample_feature(feature: Feature, model: AffineNoiseModel, draw: np.ndarray) -> Feature:
    """One perturbed copy of a feature from a single (4,) standard-normal draw."""
    verts = _geometry_vertices(feature.geometry)
    perturbed = perturb_vertices(verts, model, draw.reshape(1, 4))[0]
    return Feature(feature.id, feature.feature_class, _rebuild_geometry(feature.geometry, perturbed))
