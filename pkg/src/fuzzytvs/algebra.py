"""Fuzzy-set algebra: images, preimages, sup-min sums, dilations, lattice ops.

All suprema are maxima over the domain lattice.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .domain import AffineMap, Domain, as_points
from .fuzzyset import (
    FuzzySet,
    GridSample,
    Join,
    Meet,
    Product,
    Pullback,
    Scale,
    SupMinSum,
    Translate,
    singleton,
)


def evaluate(mu: FuzzySet, x) -> np.ndarray | float:
    """Membership degree of ``x`` (a point or an array of points)."""
    return mu(x)


def height(mu: FuzzySet) -> float:
    """Maximum membership over the lattice."""
    return float(np.max(mu.lattice_values))


def _as_map(f) -> AffineMap:
    if isinstance(f, AffineMap):
        return f
    if hasattr(f, "as_affine"):
        return f.as_affine()
    return AffineMap.linear(f)


def image(f, mu: FuzzySet, target: Domain) -> FuzzySet:
    """f(mu)(y) = sup over x in f^{-1}(y) of mu(x), binned on target cells.

    Each source lattice point is sent to the target lattice point nearest to
    f(x); points mapped outside the target box are dropped.  Cells that
    receive nothing get 0.
    """
    f = _as_map(f)
    if f.source_dimension != mu.domain.dimension:
        raise ValueError("map source dimension does not match the fuzzy set's domain")
    if f.target_dimension != target.dimension:
        raise ValueError("map target dimension does not match the target domain")
    mapped = f(mu.domain.points)
    idx, inside = target.nearest_index(mapped)
    out = np.zeros(target.size)
    np.maximum.at(out, idx[inside], mu.lattice_values[inside])
    return FuzzySet(target, GridSample(target, out))


def preimage(f, eta: FuzzySet, domain: Domain) -> FuzzySet:
    """f^{-1}(eta)(x) = eta(f(x)), evaluated lazily."""
    f = _as_map(f)
    if f.source_dimension != domain.dimension:
        raise ValueError("map source dimension does not match the domain")
    if f.target_dimension != eta.domain.dimension:
        raise ValueError("map target dimension does not match eta's domain")
    return FuzzySet(domain, Pullback(f, eta))


def _same_domain(sets: Sequence[FuzzySet]) -> Domain:
    domain = sets[0].domain
    for s in sets[1:]:
        if s.domain != domain:
            raise ValueError("fuzzy sets live on different domains")
    return domain


def meet(sets: Iterable[FuzzySet]) -> FuzzySet:
    sets = tuple(sets)
    if not sets:
        raise ValueError("meet of an empty family")
    if len(sets) == 1:
        return sets[0]
    return FuzzySet(_same_domain(sets), Meet(sets))


def join(sets: Iterable[FuzzySet]) -> FuzzySet:
    sets = tuple(sets)
    if not sets:
        raise ValueError("join of an empty family")
    if len(sets) == 1:
        return sets[0]
    return FuzzySet(_same_domain(sets), Join(sets))


def add(mu1: FuzzySet, mu2: FuzzySet) -> FuzzySet:
    """Sup-min convolution (mu1 + mu2)(x) = sup_{x = x1 + x2} mu1(x1) ^ mu2(x2)."""
    domain = _same_domain([mu1, mu2])
    return FuzzySet(domain, SupMinSum(mu1, mu2, domain))


def scalar_mul(t: float, mu: FuzzySet) -> FuzzySet:
    """(t mu)(x) = mu(x / t); for t = 0 a point mass of height(mu) at 0."""
    t = float(t)
    if t == 0.0:
        return singleton(mu.domain, value=height(mu))
    if t == 1.0:
        return mu
    if isinstance(mu.node, Scale):
        return scalar_mul(t * mu.node.factor, mu.node.operand)
    return FuzzySet(mu.domain, Scale(t, mu))


def translate(v, mu: FuzzySet) -> FuzzySet:
    """(v + mu)(y) = mu(y - v)."""
    v = as_points(v, mu.domain.dimension)[0]
    if isinstance(mu.node, Translate):
        v = v + mu.node.shift
        mu = mu.node.operand
    if not np.any(v):
        return mu
    return FuzzySet(mu.domain, Translate(v, mu))


def product(mu1: FuzzySet, mu2: FuzzySet) -> FuzzySet:
    """(mu1 x mu2)(x1, x2) = min(mu1(x1), mu2(x2)) on the product domain."""
    return FuzzySet(mu1.domain.product(mu2.domain), Product(mu1, mu2))


@dataclass(frozen=True, eq=False)
class AlphaCut:
    """Lattice points whose membership is at least ``level``."""

    domain: Domain
    level: float
    members: np.ndarray

    @property
    def points(self) -> np.ndarray:
        return self.domain.points[self.members]

    def __len__(self):
        return int(np.count_nonzero(self.members))

    def issubset(self, other: "AlphaCut") -> bool:
        return bool(np.all(~self.members | other.members))


def alpha_cut(mu: FuzzySet, alpha: float) -> AlphaCut:
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    members = mu.lattice_values >= alpha
    members.flags.writeable = False
    return AlphaCut(mu.domain, float(alpha), members)
