"""WGS84 <-> local tangent-plane conversion.

Equirectangular projection about the mission origin: exact to invert, and
accurate to well under a meter at the ~1 km mission scale this engine targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EARTH_RADIUS_M = 6_371_000.0


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude {self.lon} outside [-180, 180]")


@dataclass(frozen=True)
class LocalPoint:
    east: float
    north: float

    def __post_init__(self):
        if not (math.isfinite(self.east) and math.isfinite(self.north)):
            raise ValueError("local coordinates must be finite")


def project(p: GeoPoint, origin: GeoPoint) -> LocalPoint:
    scale = math.cos(math.radians(origin.lat)) * EARTH_RADIUS_M
    east = math.radians(p.lon - origin.lon) * scale
    north = math.radians(p.lat - origin.lat) * EARTH_RADIUS_M
    return LocalPoint(east, north)


def unproject(p: LocalPoint, origin: GeoPoint) -> GeoPoint:
    scale = math.cos(math.radians(origin.lat)) * EARTH_RADIUS_M
    lon = origin.lon + math.degrees(p.east / scale)
    lat = origin.lat + math.degrees(p.north / EARTH_RADIUS_M)
    return GeoPoint(lat, lon)
