"""Plane geometry of constellations.

Point sets are ``(n, 2)`` float64 arrays of IQ coordinates; a single
``PlanePoint`` is a row. Symbols handed to the modem are the same points
read as complex numbers ``x + jy``.
"""

from typing import Sequence

import attr
import numpy as np
from scipy.spatial.distance import pdist

from ecmod.curves.arith import CurvePoint
from ecmod.errors import (
    DegenerateAllZero,
    EmptyInput,
    GeometryError,
    InfinityPoint,
    TooFewPoints,
)

ZERO_MEAN_TOL = 1e-9
UNIT_ENERGY_TOL = 1e-9
DISTANCE_SLACK = 1e-12


def as_points(points) -> np.ndarray:
    array = np.asarray(points, dtype=np.float64)
    if array.size == 0:
        return array.reshape(0, 2)
    if array.ndim != 2 or array.shape[1] != 2:
        raise GeometryError(f"expected (n, 2) coordinates, got {array.shape}")
    if not np.isfinite(array).all():
        raise GeometryError("coordinates must be finite")
    return array


def lift_to_plane(points: Sequence[CurvePoint], p: int) -> np.ndarray:
    """Read affine curve points as real pairs scaled by 1/p into [0, 1)^2.

    Integer true division rounds correctly, so 256-bit coordinates keep full
    double precision.

    Raises:
        InfinityPoint: One of the points is the point at infinity.
    """
    lifted = np.empty((len(points), 2), dtype=np.float64)
    for i, point in enumerate(points):
        if point.is_infinity:
            raise InfinityPoint(f"point {i} is the point at infinity")
        lifted[i, 0] = point.x / p
        lifted[i, 1] = point.y / p
    return lifted


def centroid(points) -> np.ndarray:
    points = as_points(points)
    if len(points) == 0:
        raise EmptyInput("cannot take the centroid of no points")
    return points.mean(axis=0)


def center(points) -> np.ndarray:
    """Translate a point set so its centroid is the origin."""
    points = as_points(points)
    return points - centroid(points)


def average_energy(points) -> float:
    points = as_points(points)
    if len(points) == 0:
        raise EmptyInput("cannot take the energy of no points")
    return float(np.mean(np.sum(points * points, axis=1)))


def normalize_energy(points) -> np.ndarray:
    """Scale a point set uniformly to unit average energy.

    Raises:
        DegenerateAllZero: Every point is the origin.
    """
    energy = average_energy(points)
    if energy == 0.0:
        raise DegenerateAllZero("all points are at the origin")
    return as_points(points) / np.sqrt(energy)


def min_pairwise_distance(points) -> float:
    """Exact minimum Euclidean distance over all unordered pairs.

    Raises:
        TooFewPoints: Fewer than two points.
    """
    points = as_points(points)
    if len(points) < 2:
        raise TooFewPoints(f"need at least 2 points, got {len(points)}")
    return float(pdist(points).min())


def rotate(points, angle: float) -> np.ndarray:
    points = as_points(points)
    c, s = np.cos(angle), np.sin(angle)
    return points @ np.array([[c, s], [-s, c]])


def to_complex(points) -> np.ndarray:
    points = as_points(points)
    return points[:, 0] + 1j * points[:, 1]


def from_complex(symbols) -> np.ndarray:
    symbols = np.asarray(symbols, dtype=np.complex128)
    return np.column_stack((symbols.real, symbols.imag))


def format_float(value: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    return format(float(value), ".17g")


@attr.s(frozen=True, eq=False)
class Constellation:
    """Ordered M-point constellation with a declared minimum distance.

    Args:
        np.ndarray points: ``(M, 2)`` coordinates, index order is the symbol
            order.
        float d_min: Declared minimum pairwise distance.
    """

    points: np.ndarray = attr.ib(converter=as_points)
    d_min: float = attr.ib(converter=float)

    @property
    def m(self) -> int:
        return len(self.points)

    @property
    def symbols(self) -> np.ndarray:
        return to_complex(self.points)

    def check(self) -> None:
        """Raise ``GeometryError`` unless centred, unit energy, d_min apart."""
        if np.abs(centroid(self.points)).max() > ZERO_MEAN_TOL:
            raise GeometryError("constellation is not centred")
        if abs(average_energy(self.points) - 1.0) > UNIT_ENERGY_TOL:
            raise GeometryError("constellation is not unit energy")
        if min_pairwise_distance(self.points) < self.d_min - DISTANCE_SLACK:
            raise GeometryError(f"points closer than d_min={self.d_min}")
