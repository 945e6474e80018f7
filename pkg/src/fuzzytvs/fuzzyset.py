"""Fuzzy sets on a boxed lattice domain, represented as expression trees.

Every node knows how to evaluate its membership formula on an array of
points (``raw``).  Same-domain composites (meet, join, scale, translate)
compose their children's formulas directly; nodes that cross domains
(pullback, product) go through the child's public evaluation, which is zero
outside the child's box.  :meth:`FuzzySet.__call__` applies the outside-box
rule of the set's own domain.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np

from .domain import AffineMap, Domain, as_points, euclidean_length, extended_dot


def _frozen(arr) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.flags.writeable = False
    return arr


# ---------------------------------------------------------------- predicates


@dataclass(frozen=True, eq=False)
class Ball:
    """Euclidean ball; ``closed`` selects <= over <."""

    center: np.ndarray
    radius: float
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(self.center).reshape(-1))
        if self.radius < 0:
            raise ValueError("ball radius must be non-negative")

    @property
    def dimension(self) -> int:
        return self.center.shape[0]

    def contains(self, points):
        dist = euclidean_length(np.asarray(points, dtype=np.longdouble) - self.center)
        return dist <= self.radius if self.closed else dist < self.radius

    @property
    def is_open(self) -> bool:
        return not self.closed

    @property
    def is_closed(self) -> bool:
        # an open ball of radius 0 is empty, hence also closed
        return self.closed or self.radius == 0


@dataclass(frozen=True, eq=False)
class Box:
    lower: np.ndarray
    upper: np.ndarray
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lower", _frozen(self.lower).reshape(-1))
        object.__setattr__(self, "upper", _frozen(self.upper).reshape(-1))
        if self.lower.shape != self.upper.shape:
            raise ValueError("box corners must have equal length")

    @property
    def dimension(self) -> int:
        return self.lower.shape[0]

    @property
    def empty(self) -> bool:
        if self.closed:
            return bool(np.any(self.lower > self.upper))
        return bool(np.any(self.lower >= self.upper))

    def contains(self, points):
        if self.closed:
            return np.all((points >= self.lower) & (points <= self.upper), axis=1)
        return np.all((points > self.lower) & (points < self.upper), axis=1)

    @property
    def is_open(self) -> bool:
        return not self.closed or self.empty

    @property
    def is_closed(self) -> bool:
        return self.closed or self.empty


@dataclass(frozen=True, eq=False)
class Halfspace:
    """{x : normal . x < offset}, or <= when closed."""

    normal: np.ndarray
    offset: float
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "normal", _frozen(self.normal).reshape(-1))

    @property
    def dimension(self) -> int:
        return self.normal.shape[0]

    def contains(self, points):
        s = extended_dot(points, self.normal)
        return s <= self.offset if self.closed else s < self.offset

    @property
    def _trivial(self) -> bool:
        return not np.any(self.normal)

    @property
    def is_open(self) -> bool:
        return not self.closed or self._trivial

    @property
    def is_closed(self) -> bool:
        return self.closed or self._trivial


@dataclass(frozen=True, eq=False)
class NormBall:
    """{y : ||y - center||^+_alpha < radius} for a Felbin norm.

    With ``alpha=None`` the upper endpoint is taken as the supremum over the
    norm's sampled level grid.
    """

    norm: object
    center: np.ndarray
    radius: float
    alpha: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "center", _frozen(self.center).reshape(-1))

    @property
    def dimension(self) -> int:
        return self.center.shape[0]

    def contains(self, points):
        diff = points - self.center
        if self.alpha is None:
            length = self.norm.sup_upper(diff)
        else:
            length = self.norm.upper(diff, self.alpha)
        return length < self.radius

    # strict sublevel set of a continuous length
    is_open = True
    is_closed = False


# --------------------------------------------------------------------- nodes


class Node:
    """Base class for expression nodes; subclasses are frozen dataclasses."""

    kind = "node"

    def raw(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def children(self) -> tuple["FuzzySet", ...]:
        return ()


@dataclass(frozen=True, eq=False)
class Constant(Node):
    value: float
    kind = "constant"

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"constant membership {self.value} outside [0, 1]")

    def raw(self, points):
        return np.full(points.shape[0], float(self.value))


@dataclass(frozen=True, eq=False)
class CrispIndicator(Node):
    predicate: object
    kind = "indicator"

    def raw(self, points):
        return self.predicate.contains(points).astype(float)


@dataclass(frozen=True, eq=False)
class Triangular(Node):
    a: float
    b: float
    c: float
    kind = "triangular"

    def __post_init__(self):
        if not self.a <= self.b <= self.c:
            raise ValueError("triangular needs a <= b <= c")

    def raw(self, points):
        x = points[:, 0]
        a, b, c = self.a, self.b, self.c
        out = np.zeros_like(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            if b > a:
                left = (x >= a) & (x < b)
                out[left] = (x[left] - a) / (b - a)
            if c > b:
                right = (x > b) & (x <= c)
                out[right] = (c - x[right]) / (c - b)
        out[x == b] = 1.0
        return out


@dataclass(frozen=True, eq=False)
class GridSample(Node):
    """Membership values on the lattice of ``domain``; nearest-point lookup."""

    domain: Domain
    values: np.ndarray
    kind = "grid"

    def __post_init__(self):
        values = _frozen(self.values).reshape(-1)
        if values.shape[0] != self.domain.size:
            raise ValueError(
                f"grid sample needs {self.domain.size} values, got {values.shape[0]}"
            )
        if np.any(values < 0) or np.any(values > 1) or not np.all(np.isfinite(values)):
            raise ValueError("grid values must lie in [0, 1]")
        object.__setattr__(self, "values", values)

    def raw(self, points):
        idx, inside = self.domain.nearest_index(points, clamp=self.domain.unbounded)
        return np.where(inside, self.values[idx], 0.0)


@dataclass(frozen=True, eq=False)
class Meet(Node):
    operands: tuple
    kind = "meet"

    def raw(self, points):
        return np.minimum.reduce([op.node.raw(points) for op in self.operands])

    def children(self):
        return tuple(self.operands)


@dataclass(frozen=True, eq=False)
class Join(Node):
    operands: tuple
    kind = "join"

    def raw(self, points):
        return np.maximum.reduce([op.node.raw(points) for op in self.operands])

    def children(self):
        return tuple(self.operands)


@dataclass(frozen=True, eq=False)
class Scale(Node):
    """(t mu)(x) = mu(x / t), t != 0."""

    factor: float
    operand: "FuzzySet"
    kind = "scale"

    def __post_init__(self):
        if self.factor == 0:
            raise ValueError("Scale needs a non-zero factor; use scalar_mul for t = 0")

    def raw(self, points):
        return self.operand.node.raw(points / self.factor)

    def children(self):
        return (self.operand,)


@dataclass(frozen=True, eq=False)
class Translate(Node):
    """(v + mu)(y) = mu(y - v)."""

    shift: np.ndarray
    operand: "FuzzySet"
    kind = "translate"

    def __post_init__(self):
        object.__setattr__(self, "shift", _frozen(self.shift).reshape(-1))

    def raw(self, points):
        return self.operand.node.raw(points - self.shift)

    def children(self):
        return (self.operand,)


@dataclass(frozen=True, eq=False)
class Pullback(Node):
    """f^{-1}(eta)(x) = eta(f(x)) for an affine f into eta's domain."""

    mapping: AffineMap
    operand: "FuzzySet"
    kind = "pullback"

    def raw(self, points):
        return self.operand(self.mapping(points))

    def children(self):
        return (self.operand,)


@dataclass(frozen=True, eq=False)
class Product(Node):
    left: "FuzzySet"
    right: "FuzzySet"
    kind = "product"

    def raw(self, points):
        n = self.left.domain.dimension
        return np.minimum(self.left(points[:, :n]), self.right(points[:, n:]))

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class SupMinSum(Node):
    """Sup-min convolution of two sets, materialized on ``domain``'s lattice."""

    left: "FuzzySet"
    right: "FuzzySet"
    domain: Domain
    kind = "supmin"

    @cached_property
    def values(self) -> np.ndarray:
        pts = self.domain.points
        left = self.left(pts)
        keep = left > 0
        out = np.zeros(pts.shape[0])
        if not np.any(keep):
            return out
        first, lv = pts[keep], left[keep]
        # chunked over target points to bound memory at O(chunk * support)
        chunk = max(1, 2_000_000 // max(1, first.shape[0]))
        for start in range(0, pts.shape[0], chunk):
            x = pts[start:start + chunk]
            diff = (x[:, None, :] - first[None, :, :]).reshape(-1, pts.shape[1])
            rv = self.right(diff).reshape(x.shape[0], first.shape[0])
            out[start:start + chunk] = np.max(np.minimum(lv[None, :], rv), axis=1)
        out.flags.writeable = False
        return out

    def raw(self, points):
        idx, inside = self.domain.nearest_index(points, clamp=self.domain.unbounded)
        return np.where(inside, self.values[idx], 0.0)

    def children(self):
        return (self.left, self.right)


# ------------------------------------------------------------------ carrier


@dataclass(frozen=True, eq=False)
class FuzzySet:
    """A membership function on ``domain`` given by an expression ``node``."""

    domain: Domain
    node: Node

    def __call__(self, x) -> np.ndarray | float:
        arr = np.asarray(x, dtype=float)
        single = arr.ndim <= 1 and (self.domain.dimension > 1 or arr.size == 1)
        points = as_points(arr, self.domain.dimension)
        values = self.node.raw(points)
        if not self.domain.unbounded:
            values = np.where(self.domain.contains(points), values, 0.0)
        return float(values[0]) if single else values

    @cached_property
    def lattice_values(self) -> np.ndarray:
        vals = np.asarray(self(self.domain.points), dtype=float).reshape(-1)
        vals.flags.writeable = False
        return vals

    @property
    def kind(self) -> str:
        return self.node.kind

    def __and__(self, other: "FuzzySet") -> "FuzzySet":
        from .algebra import meet
        return meet([self, other])

    def __or__(self, other: "FuzzySet") -> "FuzzySet":
        from .algebra import join
        return join([self, other])

    def __add__(self, other: "FuzzySet") -> "FuzzySet":
        from .algebra import add
        return add(self, other)

    def __rmul__(self, t: float) -> "FuzzySet":
        from .algebra import scalar_mul
        return scalar_mul(t, self)

    def __repr__(self):
        return f"FuzzySet({self.node.kind}, dim={self.domain.dimension})"


# ------------------------------------------------------------- constructors


def constant(domain: Domain, value: float) -> FuzzySet:
    return FuzzySet(domain, Constant(float(value)))


def zero(domain: Domain) -> FuzzySet:
    return constant(domain, 0.0)


def indicator(domain: Domain, predicate) -> FuzzySet:
    if predicate.dimension != domain.dimension:
        raise ValueError("predicate dimension does not match the domain")
    return FuzzySet(domain, CrispIndicator(predicate))


def ball(domain: Domain, center=None, radius: float = 1.0, closed: bool = False) -> FuzzySet:
    center = np.zeros(domain.dimension) if center is None else center
    return indicator(domain, Ball(center, float(radius), closed))


def box(domain: Domain, lower, upper, closed: bool = False) -> FuzzySet:
    return indicator(domain, Box(np.atleast_1d(lower), np.atleast_1d(upper), closed))


def interval(domain: Domain, lower: float, upper: float, closed: bool = False) -> FuzzySet:
    return box(domain, [lower], [upper], closed)


def halfspace(domain: Domain, normal, offset: float, closed: bool = False) -> FuzzySet:
    return indicator(domain, Halfspace(np.atleast_1d(normal), float(offset), closed))


def singleton(domain: Domain, point=None, value: float = 1.0) -> FuzzySet:
    """Crisp point mass: ``value`` at ``point`` (default origin), 0 elsewhere."""
    point = np.zeros(domain.dimension) if point is None else point
    pin = ball(domain, point, 0.0, closed=True)
    if value == 1.0:
        return pin
    return FuzzySet(domain, Meet((constant(domain, value), pin)))


def triangular(domain: Domain, a: float, b: float, c: float) -> FuzzySet:
    if domain.dimension != 1:
        raise ValueError("triangular fuzzy numbers live on R only")
    return FuzzySet(domain, Triangular(float(a), float(b), float(c)))


def grid_sample(domain: Domain, values) -> FuzzySet:
    return FuzzySet(domain, GridSample(domain, values))


def from_function(domain: Domain, fn) -> FuzzySet:
    """Sample ``fn`` on the lattice (values clipped to [0, 1])."""
    vals = np.clip(np.asarray(fn(domain.points), dtype=float).reshape(-1), 0.0, 1.0)
    return grid_sample(domain, vals)


def iter_nodes(mu: FuzzySet):
    """Depth-first walk over every FuzzySet in the tree rooted at ``mu``."""
    stack = [mu]
    while stack:
        cur = stack.pop()
        yield cur
        stack.extend(reversed(cur.node.children()))
