"""Exact 2D geometry kernels: segment distance, point-in-polygon, buffering.

Scalar kernels are pure Python and shape the semantics (boundary counts as
inside, polygons have zero interior distance). The batch variants vectorize
the same formulas with numpy for the Monte-Carlo estimator; both use
identical arithmetic so results agree bit-for-bit.
"""

from __future__ import annotations

import math

import numpy as np


def segment_distance(px: float, py: float, ax: float, ay: float, bx: float, by: float) -> float:
    """Distance from point p to segment a-b.

    Works on coordinates relative to the segment start, so translating point
    and segment together cannot change the result.
    """
    ex, ey = px - ax, py - ay
    dx, dy = bx - ax, by - ay
    length_sq = dx * dx + dy * dy
    if length_sq == 0.0:
        return math.sqrt(ex * ex + ey * ey)
    t = (ex * dx + ey * dy) / length_sq
    t = min(1.0, max(0.0, t))
    rx, ry = ex - t * dx, ey - t * dy
    return math.sqrt(rx * rx + ry * ry)


def point_on_segment(px: float, py: float, ax: float, ay: float, bx: float, by: float) -> bool:
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    if cross != 0.0:
        return False
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def point_in_polygon(px: float, py: float, ring: list[tuple[float, float]]) -> bool:
    """Even-odd (ray casting) containment; boundary points count as inside."""
    n = len(ring)
    for i in range(n):
        ax, ay = ring[i]
        bx, by = ring[(i + 1) % n]
        if point_on_segment(px, py, ax, ay, bx, by):
            return True
    inside = False
    j = n - 1
    for i in range(n):
        ax, ay = ring[i]
        bx, by = ring[j]
        if (ay > py) != (by > py):
            x_cross = (bx - ax) * (py - ay) / (by - ay) + ax
            if px < x_cross:
                inside = not inside
        j = i
    return inside


def polyline_distance(px: float, py: float, vertices: list[tuple[float, float]]) -> float:
    best = math.inf
    for (ax, ay), (bx, by) in zip(vertices, vertices[1:]):
        best = min(best, segment_distance(px, py, ax, ay, bx, by))
    return best


def polygon_distance(px: float, py: float, ring: list[tuple[float, float]]) -> float:
    """0 for points inside or on the boundary, else distance to the boundary."""
    if point_in_polygon(px, py, ring):
        return 0.0
    closed = list(ring) + [ring[0]]
    return polyline_distance(px, py, closed)


def ring_is_simple(ring: list[tuple[float, float]]) -> bool:
    """True when no two non-adjacent edges intersect and no vertex repeats."""
    n = len(ring)
    if n < 3 or len(set(ring)) != n:
        return False
    edges = [(ring[i], ring[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                continue
            if _segments_intersect(edges[i], edges[j]):
                return False
    return True


def _orient(ax, ay, bx, by, cx, cy) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _segments_intersect(e1, e2) -> bool:
    (a, b), (c, d) = e1, e2
    o1 = _orient(*a, *b, *c)
    o2 = _orient(*a, *b, *d)
    o3 = _orient(*c, *d, *a)
    o4 = _orient(*c, *d, *b)
    if ((o1 > 0) != (o2 > 0) and o1 != 0 and o2 != 0) and (
        (o3 > 0) != (o4 > 0) and o3 != 0 and o4 != 0
    ):
        return True
    for p, (u, v) in ((c, (a, b)), (d, (a, b)), (a, (c, d)), (b, (c, d))):
        if point_on_segment(p[0], p[1], u[0], u[1], v[0], v[1]):
            return True
    return False


class ZeroWidth(ValueError):
    pass


def buffer_ring(vertices: list[tuple[float, float]], width: float) -> list[tuple[float, float]]:
    """Flat-capped offset ring of half-width width/2 around a polyline.

    Joints are mitered (intersection of adjacent offset lines); near-reversal
    joints fall back to the averaged normal so the ring stays usable.
    """
    if width <= 0:
        raise ZeroWidth(f"buffer width must be positive, got {width}")
    if len(vertices) < 2:
        raise ValueError("polyline needs at least two vertices")
    h = width / 2.0

    dirs = []
    for (ax, ay), (bx, by) in zip(vertices, vertices[1:]):
        dx, dy = bx - ax, by - ay
        norm = math.sqrt(dx * dx + dy * dy)
        if norm == 0.0:
            continue
        dirs.append((dx / norm, dy / norm))
    if not dirs:
        raise ValueError("polyline is degenerate (zero length)")

    def offset_side(sign: float) -> list[tuple[float, float]]:
        pts = []
        nx0, ny0 = -dirs[0][1] * sign, dirs[0][0] * sign
        pts.append((vertices[0][0] + nx0 * h, vertices[0][1] + ny0 * h))
        for i in range(1, len(dirs)):
            vx, vy = vertices[i]
            n1 = (-dirs[i - 1][1] * sign, dirs[i - 1][0] * sign)
            n2 = (-dirs[i][1] * sign, dirs[i][0] * sign)
            mx, my = n1[0] + n2[0], n1[1] + n2[1]
            denom = 1.0 + (n1[0] * n2[0] + n1[1] * n2[1])
            if denom < 1e-9:
                pts.append((vx + n1[0] * h, vy + n1[1] * h))
                pts.append((vx + n2[0] * h, vy + n2[1] * h))
            else:
                pts.append((vx + mx / denom * h, vy + my / denom * h))
        nxe, nye = -dirs[-1][1] * sign, dirs[-1][0] * sign
        pts.append((vertices[-1][0] + nxe * h, vertices[-1][1] + nye * h))
        return pts

    left = offset_side(1.0)
    right = offset_side(-1.0)
    return left + right[::-1]


# --- batch kernels (numpy), used by the Monte-Carlo relation estimator ---


def batch_segment_distance(points: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distances from points (M,2) to segments a->b; a, b broadcast as (...,2).

    Returns an array broadcast over (..., M).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    d = b - a
    length_sq = d[..., 0] ** 2 + d[..., 1] ** 2
    ex = points[:, 0] - a[..., 0:1]
    ey = points[:, 1] - a[..., 1:2]
    with np.errstate(invalid="ignore", divide="ignore"):
        t = (ex * d[..., 0:1] + ey * d[..., 1:2]) / length_sq[..., None]
    t = np.where(length_sq[..., None] == 0.0, 0.0, t)
    t = np.minimum(1.0, np.maximum(0.0, t))
    rx = ex - t * d[..., 0:1]
    ry = ey - t * d[..., 1:2]
    return np.sqrt(rx * rx + ry * ry)


def batch_polyline_distance(points: np.ndarray, vertices: np.ndarray) -> np.ndarray:
    """Min distance from points (M,2) to a polyline; vertices (..., V, 2)."""
    best = None
    v = np.asarray(vertices, dtype=np.float64)
    for i in range(v.shape[-2] - 1):
        dist = batch_segment_distance(points, v[..., i, :], v[..., i + 1, :])
        best = dist if best is None else np.minimum(best, dist)
    return best


def batch_point_in_polygon(points: np.ndarray, ring: np.ndarray) -> np.ndarray:
    """Even-odd containment of points (M,2) in rings (..., V, 2); boundary inside."""
    r = np.asarray(ring, dtype=np.float64)
    px = points[:, 0]
    py = points[:, 1]
    n = r.shape[-2]
    inside = np.zeros(np.broadcast_shapes(r.shape[:-2] + (1,), (points.shape[0],)), dtype=bool)
    boundary = np.zeros_like(inside)
    for i in range(n):
        ax = r[..., i, 0:1]
        ay = r[..., i, 1:2]
        bx = r[..., (i + 1) % n, 0:1]
        by = r[..., (i + 1) % n, 1:2]
        cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
        on_seg = (
            (cross == 0.0)
            & (px >= np.minimum(ax, bx))
            & (px <= np.maximum(ax, bx))
            & (py >= np.minimum(ay, by))
            & (py <= np.maximum(ay, by))
        )
        boundary |= on_seg
        crosses = (ay > py) != (by > py)
        with np.errstate(invalid="ignore", divide="ignore"):
            x_cross = (bx - ax) * (py - ay) / (by - ay) + ax
        inside ^= crosses & (px < x_cross)
    return inside | boundary


def batch_polygon_distance(points: np.ndarray, ring: np.ndarray) -> np.ndarray:
    """0 inside/on rings, else boundary distance; ring (..., V, 2)."""
    r = np.asarray(ring, dtype=np.float64)
    closed = np.concatenate([r, r[..., 0:1, :]], axis=-2)
    dist = batch_polyline_distance(points, closed)
    return np.where(batch_point_in_polygon(points, r), 0.0, dist)
