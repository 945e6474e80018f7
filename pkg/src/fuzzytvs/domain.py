"""Boxed lattice domains in R^n and affine maps between them."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


def as_points(x, dimension: int) -> np.ndarray:
    """Coerce a single point or an array of points to shape (m, dimension)."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        if dimension == 1 and arr.shape[0] != 1:
            arr = arr.reshape(-1, 1)
        else:
            arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] != dimension:
        raise ValueError(
            f"expected points of dimension {dimension}, got shape {np.shape(x)}"
        )
    return arr


def extended_dot(points: np.ndarray, matrix_t: np.ndarray, offset=None) -> np.ndarray:
    """``points @ matrix_t + offset`` accumulated in extended precision and
    rounded to float64 once.

    Rounding once keeps lattice points that sit a few ulps outside a
    boundary from being classified inside it.
    """
    acc = np.asarray(points, dtype=np.longdouble) @ np.asarray(matrix_t, dtype=np.longdouble)
    if offset is not None:
        acc = acc + np.asarray(offset, dtype=np.longdouble)
    return acc.astype(float)


def euclidean_length(vectors: np.ndarray) -> np.ndarray:
    """Row-wise Euclidean length, accumulated in extended precision."""
    v = np.asarray(vectors, dtype=np.longdouble)
    return np.sqrt(np.sum(v * v, axis=1)).astype(float)


@dataclass(frozen=True)
class Domain:
    """A closed box in R^n sampled by a uniform lattice.

    ``bounds`` holds one ``(lower, upper)`` pair per axis and ``resolution``
    the number of lattice points per axis (endpoints included).  When
    ``unbounded`` is set the box is only a sampling window: memberships are
    not forced to zero outside it and grid data extend by nearest-point
    lookup.
    """

    bounds: tuple[tuple[float, float], ...]
    resolution: tuple[int, ...]
    unbounded: bool = False

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        resolution = tuple(int(r) for r in self.resolution)
        if not bounds:
            raise ValueError("domain needs at least one axis")
        if len(bounds) != len(resolution):
            raise ValueError("bounds and resolution must have the same length")
        for lo, hi in bounds:
            if not (np.isfinite(lo) and np.isfinite(hi)) or not lo < hi:
                raise ValueError(f"invalid axis bounds ({lo}, {hi})")
        if any(r < 2 for r in resolution):
            raise ValueError("resolution must be at least 2 per axis")
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "resolution", resolution)

    @classmethod
    def cube(cls, dimension: int, lower: float, upper: float, resolution: int,
             unbounded: bool = False) -> "Domain":
        return cls(((lower, upper),) * dimension, (resolution,) * dimension, unbounded)

    @property
    def dimension(self) -> int:
        return len(self.bounds)

    @property
    def size(self) -> int:
        return int(np.prod(self.resolution))

    @property
    def lower(self) -> np.ndarray:
        return np.array([b[0] for b in self.bounds])

    @property
    def upper(self) -> np.ndarray:
        return np.array([b[1] for b in self.bounds])

    @property
    def spacing(self) -> np.ndarray:
        return (self.upper - self.lower) / (np.array(self.resolution) - 1)

    @cached_property
    def axes(self) -> tuple[np.ndarray, ...]:
        # (lo (r-1-i) + hi i) / (r - 1): one rounding for integer bounds, and
        # symmetric boxes are centred exactly on 0
        out = []
        for (lo, hi), r in zip(self.bounds, self.resolution):
            i = np.arange(r, dtype=float)
            ax = (lo * (r - 1 - i) + hi * i) / (r - 1)
            ax.flags.writeable = False
            out.append(ax)
        return tuple(out)

    @cached_property
    def points(self) -> np.ndarray:
        """All lattice points, shape (size, dimension), C order over axes."""
        grids = np.meshgrid(*self.axes, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=1)
        pts.flags.writeable = False
        return pts

    def contains(self, points: np.ndarray) -> np.ndarray:
        points = as_points(points, self.dimension)
        return np.all((points >= self.lower) & (points <= self.upper), axis=1)

    def nearest_index(self, points: np.ndarray, clamp: bool = False):
        """Flat lattice index of the nearest lattice point.

        Returns ``(index, inside)``; ``inside`` is False for points outside
        the box (their index is clamped to the boundary).
        """
        points = as_points(points, self.dimension)
        inside = self.contains(points)
        res = np.array(self.resolution)
        with np.errstate(invalid="ignore"):
            frac = (points - self.lower) / (self.upper - self.lower) * (res - 1)
        frac = np.nan_to_num(frac, nan=0.0, posinf=np.inf, neginf=-np.inf)
        idx = np.clip(np.rint(frac), 0, res - 1).astype(np.int64)
        flat = np.ravel_multi_index(tuple(idx.T), self.resolution)
        if clamp:
            inside = np.ones_like(inside)
        return flat, inside

    def product(self, other: "Domain") -> "Domain":
        return Domain(self.bounds + other.bounds, self.resolution + other.resolution,
                      self.unbounded and other.unbounded)

    def as_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "bounds": [list(b) for b in self.bounds],
            "resolution": list(self.resolution),
            "unbounded": self.unbounded,
        }


@dataclass(frozen=True, eq=False)
class AffineMap:
    """x -> matrix @ x + offset, from R^n to R^m."""

    matrix: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        matrix = np.atleast_2d(np.asarray(self.matrix, dtype=float)).copy()
        offset = np.asarray(self.offset, dtype=float).reshape(-1).copy()
        if offset.shape[0] != matrix.shape[0]:
            raise ValueError("offset length must equal the number of matrix rows")
        if not (np.all(np.isfinite(matrix)) and np.all(np.isfinite(offset))):
            raise ValueError("affine map entries must be finite")
        matrix.flags.writeable = False
        offset.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "offset", offset)

    @classmethod
    def linear(cls, matrix) -> "AffineMap":
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        return cls(matrix, np.zeros(matrix.shape[0]))

    @classmethod
    def identity(cls, dimension: int) -> "AffineMap":
        return cls.linear(np.eye(dimension))

    @property
    def source_dimension(self) -> int:
        return self.matrix.shape[1]

    @property
    def target_dimension(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_linear(self) -> bool:
        return not np.any(self.offset)

    def __call__(self, points) -> np.ndarray:
        points = as_points(points, self.source_dimension)
        return extended_dot(points, self.matrix.T, self.offset)
