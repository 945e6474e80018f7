"""Weak fuzzy topologies of finite-dimensional dual pairs.

Vectors live in R^n; functionals are coefficient vectors acting by the dot
product.  Scalar-side fuzzy sets live on a one-dimensional ``Domain``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import linalg
from .algebra import height, image, meet, preimage, translate
from .domain import AffineMap, Domain, as_points
from .fuzzyset import FuzzySet, interval
from .properties import is_lsc
from .report import FAIL, PASS, CheckReport
from .topology import base_neighborhood, default_base_catalog, is_bounded

RESIDUAL_TOL = 1e-9
SEPARATION_GAP = 1e-12


@dataclass(frozen=True, eq=False)
class LinearFunctional:
    """x -> sum_i c_i x_i."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float).reshape(-1)
        if c.size == 0 or not np.all(np.isfinite(c)):
            raise ValueError("functional coefficients must be finite and non-empty")
        c.flags.writeable = False
        object.__setattr__(self, "coefficients", c)

    @property
    def dimension(self) -> int:
        return self.coefficients.shape[0]

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coefficients)

    def as_affine(self) -> AffineMap:
        return AffineMap.linear(self.coefficients.reshape(1, -1))

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        single = arr.ndim == 0 or (arr.ndim == 1 and arr.size == self.dimension)
        # same arithmetic path as a pullback, so the two agree bit for bit
        vals = self.as_affine()(as_points(arr, self.dimension))[:, 0]
        return float(vals[0]) if single else vals

    def scaled(self, t: float) -> "LinearFunctional":
        return LinearFunctional(float(t) * self.coefficients)

    def __repr__(self):
        return f"LinearFunctional({self.coefficients.tolist()})"


def _functional(f) -> LinearFunctional:
    return f if isinstance(f, LinearFunctional) else LinearFunctional(f)


@dataclass(frozen=True, eq=False)
class DualPairScenario:
    """R^n paired with a finite catalog of functionals.

    No functional may be zero.  With ``separates_points`` the catalog must
    span the dual, so that no non-zero vector is annihilated by all of it.
    """

    dimension: int
    functionals: tuple
    scalar_domain: Domain
    separates_points: bool = False

    def __post_init__(self):
        fs = tuple(_functional(f) for f in self.functionals)
        object.__setattr__(self, "functionals", fs)
        if self.scalar_domain.dimension != 1:
            raise ValueError("the scalar domain must be one-dimensional")
        for k, f in enumerate(fs):
            if f.dimension != self.dimension:
                raise ValueError(f"functional {k} has dimension {f.dimension}, expected {self.dimension}")
            if f.is_zero:
                raise ValueError(f"functional {k} is zero")
        if self.separates_points:
            r = linalg.rank(self.matrix) if fs else 0
            if r < self.dimension:
                raise ValueError(
                    f"catalog spans a {r}-dimensional subspace; point separation needs {self.dimension}")

    @property
    def matrix(self) -> np.ndarray:
        return np.array([f.coefficients for f in self.functionals]).reshape(-1, self.dimension)


@dataclass(frozen=True, eq=False)
class WeakNeighborhood:
    """Finite meet of pullbacks f_i^{-1}(mu_i)."""

    pairs: tuple

    def __post_init__(self):
        pairs = tuple((_functional(f), mu) for f, mu in self.pairs)
        if not pairs:
            raise ValueError("a weak neighbourhood needs at least one pair")
        dims = {f.dimension for f, _ in pairs}
        if len(dims) != 1:
            raise ValueError("functionals of one neighbourhood must share a dimension")
        for _, mu in pairs:
            if mu.domain.dimension != 1:
                raise ValueError("scalar fuzzy sets must live on a 1-D domain")
        object.__setattr__(self, "pairs", pairs)

    @property
    def dimension(self) -> int:
        return self.pairs[0][0].dimension

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        single = arr.ndim == 0 or (arr.ndim == 1 and arr.size == self.dimension)
        pts = as_points(arr, self.dimension)
        vals = np.min([np.asarray(mu(f(pts)), dtype=float).reshape(-1) for f, mu in self.pairs],
                      axis=0)
        return float(vals[0]) if single else vals

    def translated(self, x) -> "WeakNeighborhood":
        """x + V: each mu_i is shifted by f_i(x)."""
        x = as_points(x, self.dimension)[0]
        return WeakNeighborhood(tuple((f, translate([f(x)], mu)) for f, mu in self.pairs))

    def as_fuzzy_set(self, domain: Domain) -> FuzzySet:
        if domain.dimension != self.dimension:
            raise ValueError("domain dimension does not match the neighbourhood")
        return meet([preimage(f, mu, domain) for f, mu in self.pairs])


def weak_eval(V: WeakNeighborhood, x):
    """min over pairs of mu_i(f_i(x))."""
    if as_points(x, V.dimension).shape[1] != V.dimension:
        raise ValueError("dimension mismatch")
    return V(x)


def scalar_unit_ball(scalar_domain: Domain) -> FuzzySet:
    """Indicator of the open interval (-1, 1)."""
    return interval(scalar_domain, -1.0, 1.0)


def weak_base_neighborhood(functionals, thetas, ts, scalar_domain: Domain) -> WeakNeighborhood:
    """meet_i f_i^{-1}(theta_i ^ (t_i rho)) with rho the open unit interval."""
    functionals, thetas, ts = list(functionals), list(thetas), list(ts)
    if not (len(functionals) == len(thetas) == len(ts)):
        raise ValueError("functionals, thetas and ts must have equal length")
    rho = scalar_unit_ball(scalar_domain)
    return WeakNeighborhood(tuple(
        (_functional(f), base_neighborhood(th, t, rho))
        for f, th, t in zip(functionals, thetas, ts)
    ))


# ------------------------------------------------------------------ nets


DEFAULT_NET_RADII = (1.0, 0.1, 0.01)
DEFAULT_R_FRACTIONS = (0.5, 0.9, 0.99)


def default_net_catalog(scenario: DualPairScenario, radii=DEFAULT_NET_RADII):
    """One neighbourhood per (functional, radius), plus the meet over all
    functionals at the smallest radius."""
    dom = scenario.scalar_domain
    catalog = [weak_base_neighborhood([f], [1.0], [t], dom)
               for f in scenario.functionals for t in radii]
    k = len(scenario.functionals)
    catalog.append(weak_base_neighborhood(scenario.functionals, [1.0] * k, [min(radii)] * k, dom))
    return catalog


def net_converges_weakly(sequence, x, scenario: DualPairScenario, catalog=None, tail: int = 0,
                         r_fractions=DEFAULT_R_FRACTIONS,
                         scalar_tolerances=DEFAULT_NET_RADII) -> CheckReport:
    """Certify weak convergence of a finite net tail ``sequence[tail:]`` to x.

    Neighbourhood criterion: for every catalog V (a neighbourhood of zero)
    and every sampled r < (x + V)(x), each tail entry has (x + V)(x_j) > r.
    Scalar criterion: |f_i(x_j) - f_i(x)| < eps for every catalog functional,
    sampled eps and tail entry.  Passes when both criteria hold.
    """
    seq = as_points(np.asarray(sequence, dtype=float), scenario.dimension) if len(sequence) else None
    if seq is None or seq.shape[0] == 0:
        raise ValueError("empty sequence")
    if not 0 <= tail < seq.shape[0]:
        raise ValueError(f"tail index {tail} outside a sequence of length {seq.shape[0]}")
    x = as_points(x, scenario.dimension)[0]
    catalog = default_net_catalog(scenario) if catalog is None else list(catalog)
    tail_pts = seq[tail:]

    nbhd_ok, nbhd_witness = True, {}
    for k, V in enumerate(catalog):
        Vx = V.translated(x)
        top = Vx(x)
        vals = np.asarray(Vx(tail_pts), dtype=float).reshape(-1)
        for frac in r_fractions:
            r = frac * top
            bad = np.flatnonzero(~(vals > r))
            if bad.size and nbhd_ok:
                nbhd_ok = False
                nbhd_witness = {"neighborhood": k, "r": r, "index": tail + int(bad[0]),
                                "value": vals[bad[0]]}

    F = scenario.matrix
    dev = np.abs((tail_pts - x) @ F.T) if F.size else np.zeros((tail_pts.shape[0], 0))
    worst_dev = float(dev.max()) if dev.size else 0.0
    scalar_ok, scalar_witness = True, {}
    for eps in sorted(scalar_tolerances, reverse=True):
        bad = np.argwhere(~(dev < eps))
        if bad.size:
            j, i = bad[0]
            scalar_ok = False
            scalar_witness = {"eps": eps, "index": tail + int(j), "functional": int(i),
                              "deviation": dev[j, i]}
            break

    status = PASS if (nbhd_ok and scalar_ok) else FAIL
    return CheckReport(
        "net_converges_weakly", status, worst_dev, float(min(scalar_tolerances)),
        nbhd_witness or scalar_witness,
        {
            "neighborhood_criterion": PASS if nbhd_ok else FAIL,
            "scalar_criterion": PASS if scalar_ok else FAIL,
            "criteria_agree": nbhd_ok == scalar_ok,
            "catalog_size": len(catalog),
            "r_fractions": list(r_fractions),
            "scalar_tolerances": list(scalar_tolerances),
            "tail": tail,
            "tail_length": int(tail_pts.shape[0]),
            "scalar_witness": scalar_witness,
        },
    )


# ------------------------------------------------------ span membership


@dataclass(frozen=True)
class DecomposeResult:
    """Either coefficients with f0 = sum lambda_i f_i, or a witness a with
    f0(a) = 1 and f_i(a) = 0."""

    coefficients: Optional[np.ndarray] = None
    witness: Optional[np.ndarray] = None
    residual: float = 0.0

    def __post_init__(self):
        if (self.coefficients is None) == (self.witness is None):
            raise ValueError("exactly one branch must be populated")

    @property
    def in_span(self) -> bool:
        return self.coefficients is not None


def _coeffs(f) -> np.ndarray:
    return f.coefficients if isinstance(f, LinearFunctional) else np.asarray(f, dtype=float).reshape(-1)


def decompose_or_witness(f0, fs: Sequence) -> DecomposeResult:
    """Write f0 as a combination of fs, or find a vector that f0 sends to 1
    while every f_i sends it to 0."""
    g = _coeffs(f0)
    n = g.shape[0]
    F = np.array([_coeffs(f) for f in fs], dtype=float).reshape(-1, n)
    k = F.shape[0]

    lam = linalg.solve(F.T, g) if k else (np.zeros(0) if not np.any(g) else None)
    if lam is not None:
        residual = float(np.max(np.abs(g - F.T @ lam))) if n else 0.0
        if residual <= RESIDUAL_TOL:
            return DecomposeResult(coefficients=lam, residual=residual)

    system = np.vstack([F, g])
    rhs = np.zeros(k + 1)
    rhs[-1] = 1.0
    a = linalg.solve(system, rhs)
    if a is None:
        raise ArithmeticError("elimination found neither a decomposition nor a witness")
    residual = float(np.max(np.abs(system @ a - rhs)))
    return DecomposeResult(witness=a, residual=residual)


# ------------------------------------------------------------ separation


def hausdorff_witness(x, y, scenario: DualPairScenario):
    """(f, beta, eta): open intervals around f(x) and f(y) of radius half the
    gap, sharing the midpoint as a common excluded endpoint."""
    x = as_points(x, scenario.dimension)[0]
    y = as_points(y, scenario.dimension)[0]
    if np.array_equal(x, y):
        raise ValueError("hausdorff_witness needs x != y")
    for f in scenario.functionals:
        a, b = f(x), f(y)
        if abs(a - b) > SEPARATION_GAP:
            break
    else:
        raise ValueError("no separating functional in the catalog for this pair")
    mid = 0.5 * (a + b)
    dom = scenario.scalar_domain
    if a < b:
        beta = interval(dom, a - (mid - a), mid)
        eta = interval(dom, mid, b + (b - mid))
    else:
        beta = interval(dom, mid, a + (a - mid))
        eta = interval(dom, b - (mid - b), mid)
    return f, beta, eta


def weakly_lsc_check(V: WeakNeighborhood, domain: Domain, radii=None) -> CheckReport:
    """Run the lsc falsifier on x -> weak_eval(V, x) over ``domain``."""
    premises = [is_lsc(mu) for _, mu in V.pairs]
    rep = is_lsc(V.as_fuzzy_set(domain), radii)
    rep.name = "weakly_lsc"
    rep.details["premises"] = [p.status for p in premises]
    rep.details["premises_hold"] = all(p.passed for p in premises)
    return rep


# ------------------------------------------------------------- adjoints


def adjoint(T) -> np.ndarray:
    """Matrix of y' -> y' o T on coefficient vectors."""
    return np.asarray(T, dtype=float).T


def adjoint_functional(T, y) -> LinearFunctional:
    return LinearFunctional(adjoint(T) @ _coeffs(y))


def weakly_continuous_check(T, E_functionals: Sequence, F_functionals: Sequence) -> CheckReport:
    """T*(y') lies in span(E catalog) for every y' in the F catalog."""
    T = np.atleast_2d(np.asarray(T, dtype=float))
    failures, residual = [], 0.0
    for k, y in enumerate(F_functionals):
        g = adjoint(T) @ _coeffs(y)
        res = decompose_or_witness(g, E_functionals)
        if res.in_span:
            residual = max(residual, res.residual)
        else:
            failures.append({"functional": k, "image": g, "witness": res.witness})
    return CheckReport(
        "weakly_continuous", FAIL if failures else PASS, float(len(failures)), 0.0,
        failures[0] if failures else {},
        {"images_outside_span": len(failures), "max_residual": residual,
         "catalog_sizes": {"E": len(E_functionals), "F": len(F_functionals)}},
    )


# ------------------------------------------------------------ seminorm


DEGENERACY_NOTE = (
    "phi(x') is the height of the image fuzzy set x'(mu); whenever x' maps the "
    "support of mu into the scalar box this equals height(mu), so phi is "
    "constant in x'. The formula is implemented literally."
)


def _scalar_target(mu: FuzzySet, f: LinearFunctional, scalar_domain: Domain) -> Domain:
    """Scalar lattice for the image f(mu).

    For a bounded source this is the scenario's scalar domain.  An unbounded
    source continues past its box, so its image is taken on exactly f(box),
    flagged unbounded so that edge values extend outward, at a resolution no
    finer than the source's so that every target cell receives a point.
    """
    if not mu.domain.unbounded:
        return scalar_domain
    c = f.coefficients
    lo = float(np.sum(np.minimum(c * mu.domain.lower, c * mu.domain.upper)))
    hi = float(np.sum(np.maximum(c * mu.domain.lower, c * mu.domain.upper)))
    res = min(scalar_domain.resolution[0], max(mu.domain.resolution))
    return Domain(((lo, hi),), (res,), unbounded=True)


def weak_seminorm(mu: FuzzySet, functional, scalar_domain: Domain) -> float:
    f = _functional(functional)
    if f.dimension != mu.domain.dimension:
        raise ValueError("dimension mismatch")
    return height(image(f, mu, scalar_domain))


def weak_seminorm_check(mu: FuzzySet, functional, scalar_domain: Domain,
                        scales=(-1.0, -0.5, -0.1, 0.1, 0.5, 1.0)) -> CheckReport:
    """Scaling invariance for sampled 0 < |t| <= 1 and phi(0) = height(mu)."""
    f = _functional(functional)
    base = weak_seminorm(mu, f, scalar_domain)
    worst, witness = 0.0, {}
    for t in scales:
        if not 0 < abs(t) <= 1:
            raise ValueError("scales must satisfy 0 < |t| <= 1")
        d = abs(weak_seminorm(mu, f.scaled(t), scalar_domain) - base)
        if d > worst:
            worst, witness = d, {"t": t}
    at_zero = weak_seminorm(mu, np.zeros(f.dimension), scalar_domain)
    zero_gap = abs(at_zero - height(mu))
    if zero_gap > worst:
        worst, witness = zero_gap, {"t": 0.0}
    return CheckReport.from_violation(
        "weak_seminorm", worst, 0.0, witness,
        value=base, value_at_zero=at_zero, height=height(mu), scales=list(scales),
        note=DEGENERACY_NOTE,
    )


def weakly_bounded_check(mu: FuzzySet, scenario: DualPairScenario, base=None) -> CheckReport:
    """Each image x'(mu) on the scalar domain is bounded against the scalar
    base catalog (by default the one built on the open unit interval)."""
    per, worst, witness = [], 0.0, {}
    for k, f in enumerate(scenario.functionals):
        target = _scalar_target(mu, f, scenario.scalar_domain)
        catalog = default_base_catalog(scalar_unit_ball(target)) if base is None else list(base)
        rep = is_bounded(image(f, mu, target), catalog)
        per.append({"functional": k, "status": rep.status})
        if not rep.passed and rep.max_violation >= worst:
            worst, witness = rep.max_violation, {"functional": k, **rep.witness}
    return CheckReport(
        "weakly_bounded", PASS if all(p["status"] == PASS for p in per) else FAIL,
        worst, 1e-9, witness, {"functionals": per},
    )


def product_topology_check(mu1: FuzzySet, mu2: FuzzySet, points) -> CheckReport:
    """Coordinate-projection neighbourhood {(P1, mu1), (P2, mu2)} on R^2
    against min(mu1(a), mu2(b))."""
    pts = as_points(points, 2)
    V = WeakNeighborhood(((LinearFunctional([1.0, 0.0]), mu1), (LinearFunctional([0.0, 1.0]), mu2)))
    lhs = np.asarray(V(pts), dtype=float).reshape(-1)
    rhs = np.minimum(np.asarray(mu1(pts[:, :1]), dtype=float).reshape(-1),
                     np.asarray(mu2(pts[:, 1:]), dtype=float).reshape(-1))
    diff = np.abs(lhs - rhs)
    k = int(np.argmax(diff))
    return CheckReport.from_violation(
        "product_topology", float(diff[k]), 0.0,
        {"point": pts[k]} if diff[k] > 0 else {}, points=int(pts.shape[0]),
    )
