"""Katsaras norms, neighbourhood bases and the Felbin-to-Katsaras conversion.

Also hosts the finite-family checkers: fuzzy-topology axioms, the fuzzy
Hausdorff property, neighbourhoods, linearly-open sets and boundedness.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .algebra import meet, scalar_mul, translate
from .domain import Domain, as_points
from .fuzzyset import (
    Constant,
    CrispIndicator,
    FuzzySet,
    Meet,
    NormBall,
    constant,
)
from .properties import (
    BALANCED_T_GRID,
    CONVEX_T_GRID,
    SUP_TOL,
    T_GRID,
    THETA_GRID,
    absorbs,
    is_absorbing,
    is_balanced,
    is_convex,
    probe_directions,
    vanishing_dilation_check,
)
from .reals import FelbinNorm
from .report import FAIL, PASS, CheckReport


@dataclass(frozen=True, eq=False)
class KatsarasNorm:
    """An absolutely convex, absorbing fuzzy set whose dilations vanish off 0.

    The axioms are not verified on construction; see :meth:`validate`.
    """

    rho: FuzzySet

    @property
    def domain(self) -> Domain:
        return self.rho.domain

    def __call__(self, x):
        return self.rho(x)

    def validate(self, **grids) -> list[CheckReport]:
        return katsaras_axioms_check(self.rho, **grids)


def _rho_set(rho) -> FuzzySet:
    return rho.rho if isinstance(rho, KatsarasNorm) else rho


@dataclass(frozen=True, eq=False)
class BaseNeighborhood:
    """theta ^ (t rho), a member of the neighbourhood base at zero."""

    theta: float
    t: float
    rho: KatsarasNorm

    def __post_init__(self):
        if not 0 < self.theta <= 1:
            raise ValueError("theta must lie in (0, 1]")
        if not self.t > 0:
            raise ValueError("t must be positive")

    def fuzzy_set(self) -> FuzzySet:
        return base_neighborhood(self.theta, self.t, self.rho)


def katsaras_from_felbin(norm: FelbinNorm, domain: Domain) -> KatsarasNorm:
    """rho(x) = 1 when ||x||^+_alpha < 1 for every sampled alpha, else 0."""
    if norm.dimension != domain.dimension:
        raise ValueError("norm and domain dimensions differ")
    pred = NormBall(norm, np.zeros(domain.dimension), 1.0, alpha=None)
    return KatsarasNorm(FuzzySet(domain, CrispIndicator(pred)))


def alpha_sphere(norm: FelbinNorm, alpha: float, x, eps: float, domain: Domain) -> FuzzySet:
    """alpha on {y : ||y - x||^+_alpha < eps}, 0 elsewhere."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    if not eps > 0:
        raise ValueError("eps must be positive")
    center = as_points(x, domain.dimension)[0]
    pred = NormBall(norm, center, float(eps), alpha=float(alpha))
    return FuzzySet(domain, Meet((constant(domain, alpha), FuzzySet(domain, CrispIndicator(pred)))))


def base_neighborhood(theta: float, t: float, rho) -> FuzzySet:
    """theta ^ (t rho)."""
    if not 0 < theta <= 1:
        raise ValueError("theta must lie in (0, 1]")
    if not t > 0:
        raise ValueError("t must be positive")
    rho = _rho_set(rho)
    dilated = scalar_mul(t, rho)
    if theta == 1:
        return dilated
    return meet([constant(rho.domain, theta), dilated])


def default_base_catalog(rho, thetas=(0.25, 0.5, 1.0), ts=(0.25, 0.5, 1.0)):
    rho = rho if isinstance(rho, KatsarasNorm) else KatsarasNorm(rho)
    return [BaseNeighborhood(th, t, rho) for th in thetas for t in ts]


def katsaras_axioms_check(rho, convex_t=CONVEX_T_GRID, balanced_t=BALANCED_T_GRID,
                          t_grid=T_GRID, absorption_box=None) -> list[CheckReport]:
    """Convex, balanced, absorbing and vanishing-dilation sweeps."""
    rho = _rho_set(rho)
    return [
        is_convex(rho, convex_t),
        is_balanced(rho, balanced_t),
        is_absorbing(rho, t_grid, absorption_box),
        vanishing_dilation_check(rho, t_grid),
    ]


def base_equivalence_check(norm: FelbinNorm, rho, alphas: Sequence[float],
                           epsilons: Sequence[float]) -> CheckReport:
    """max over sampled (alpha, eps) and the lattice of
    |alpha_sphere(alpha, 0, eps) - alpha ^ (eps rho)|; passes only at 0."""
    rho = _rho_set(rho)
    domain = rho.domain
    pts = domain.points
    origin = np.zeros(domain.dimension)
    worst, witness = 0.0, {}
    for a in alphas:
        for e in epsilons:
            sphere = alpha_sphere(norm, a, origin, e, domain)(pts)
            base = base_neighborhood(a, e, rho)(pts)
            diff = np.abs(sphere - base)
            k = int(np.argmax(diff))
            if diff[k] > worst:
                worst = float(diff[k])
                witness = {"alpha": a, "eps": e, "y": pts[k],
                           "sphere": sphere[k], "base": base[k]}
    return CheckReport.from_violation(
        "base_equivalence", worst, 0.0, witness,
        alphas=list(alphas), epsilons=list(epsilons), lattice_points=domain.size,
        norm=norm.describe(),
    )


def is_neighborhood_of(mu: FuzzySet, x, rho, thetas=THETA_GRID, t_grid=T_GRID) -> CheckReport:
    """Is there a sampled (theta, t) with x + theta ^ (t rho) <= mu?

    Containment is checked on mu's lattice and on the images x + t p of
    rho's supported lattice points p, so a dilate finer than the lattice
    spacing is still seen.  Images leaving a bounded box are ignored, as the
    topology is relative to the box.  The sweep starts from the smallest
    dilation, so a pass reports the smallest sampled t that fits (with the
    largest theta at that t).
    """
    rho = _rho_set(rho)
    domain = mu.domain
    x = as_points(x, domain.dimension)[0]
    rho_support = rho.domain.points[rho.lattice_values > 0]
    thetas = sorted((th for th in np.asarray(thetas, dtype=float) if th > 0), reverse=True)
    best = (np.inf, None)
    for t in sorted(np.asarray(t_grid, dtype=float)):
        dilate = translate(x, scalar_mul(t, rho))
        if float(dilate(x)) <= 0:
            continue
        probes = np.vstack([domain.points, x + t * rho_support])
        if not domain.unbounded:
            probes = probes[domain.contains(probes)]
        shifted = np.asarray(dilate(probes), dtype=float)
        target = np.asarray(mu(probes), dtype=float)
        for th in thetas:
            excess = float(np.max(np.minimum(th, shifted) - target))
            if excess <= 0:
                return CheckReport(
                    "is_neighborhood_of", PASS, 0.0, 0.0,
                    {"theta": th, "t": t}, {"x": x},
                )
            if excess < best[0]:
                best = (excess, {"theta": th, "t": t})
    return CheckReport("is_neighborhood_of", FAIL, float(best[0]), 0.0,
                       best[1] or {}, {"x": x})


def default_eps_grid(domain: Domain, count: int = 40) -> np.ndarray:
    diameter = float(np.linalg.norm(domain.upper - domain.lower))
    return diameter * np.logspace(0, -9, count)


_PROBE_FRACTIONS = np.array([0.25, 0.5, 0.75, 0.9, 0.999])


LEVEL_MARGIN = 1e-9


def is_linearly_open(mu: FuzzySet, norm: FelbinNorm, alphas=None, eps_grid=None,
                     level_margin: float = LEVEL_MARGIN) -> CheckReport:
    """For every supported lattice x and sampled alpha < mu(x), search a
    decreasing eps grid for an alpha-open sphere mu_alpha(x, eps) <= mu.

    Containment is checked on the lattice points inside the sphere and on
    probe points at fractions of eps around x, so a sphere never reduces to
    its centre.  Levels within ``level_margin`` of mu(x) count as equal to
    it: their admissible radius is below floating-point resolution.
    """
    domain = mu.domain
    if norm.dimension != domain.dimension:
        raise ValueError("norm and domain dimensions differ")
    alphas = norm.alphas if alphas is None else np.asarray(alphas, dtype=float)
    eps_grid = default_eps_grid(domain) if eps_grid is None else np.asarray(eps_grid, dtype=float)
    eps_grid = np.sort(eps_grid)[::-1]
    pts, vals = domain.points, mu.lattice_values
    dirs = probe_directions(domain.dimension)
    unit = (_PROBE_FRACTIONS[:, None, None] * dirs[None, :, :]).reshape(-1, domain.dimension)

    worst, witness, failures, tested = 0.0, {}, 0, 0
    for i in np.flatnonzero(vals > 0):
        x = pts[i]
        probes = x + eps_grid[:, None, None] * unit[None, :, :]
        flat = probes.reshape(-1, domain.dimension)
        probe_vals = np.asarray(mu(flat), dtype=float)
        in_box = np.ones(flat.shape[0], bool) if domain.unbounded else domain.contains(flat)
        diff = pts - x
        dist, order, n_inside, probe_dist = None, None, None, None
        for a in alphas[alphas < vals[i] - level_margin]:
            tested += 1
            if dist is None or not norm.level_independent:
                new = norm.upper(diff, a)
                probe_dist = norm.upper(flat - x, a)
                if dist is None or not np.array_equal(new, dist):
                    dist = new
                    order = np.argsort(dist, kind="stable")
                    n_inside = np.searchsorted(dist[order], eps_grid, side="left")
            deficit = np.maximum(a - vals, 0.0)
            # lattice deficit of the sphere of radius eps: points with dist < eps
            run = np.maximum.accumulate(deficit[order])
            lattice_part = np.where(n_inside > 0, run[np.maximum(n_inside - 1, 0)], 0.0)

            inside = (probe_dist < np.repeat(eps_grid, unit.shape[0])) & in_box
            probe_def = np.where(inside, np.maximum(a - probe_vals, 0.0), 0.0)
            probe_part = probe_def.reshape(len(eps_grid), -1).max(axis=1)

            per_eps = np.maximum(lattice_part, probe_part)
            k = int(np.argmin(per_eps))
            if per_eps[k] > 0:
                failures += 1
                if per_eps[k] > worst:
                    worst = float(per_eps[k])
                    witness = {"x": x, "alpha": a, "smallest_eps": eps_grid[-1]}
    return CheckReport.from_violation(
        "is_linearly_open", worst, 0.0, witness,
        norm=norm.describe(), pairs_tested=tested, pairs_failed=failures,
        eps_grid={"max": eps_grid.max(), "min": eps_grid.min(), "count": len(eps_grid)},
        level_margin=level_margin,
    )


def is_bounded(mu: FuzzySet, base, thetas=None, t_grid=T_GRID, tol: float = SUP_TOL) -> CheckReport:
    """Absorbed by every member of a finite neighbourhood catalog at zero."""
    base = list(base)
    if not base:
        raise ValueError("is_bounded needs a non-empty base catalog")
    worst, witness, per_member = 0.0, {}, []
    for k, member in enumerate(base):
        nu = member.fuzzy_set() if isinstance(member, BaseNeighborhood) else member
        rep = absorbs(nu, mu, thetas, t_grid, tol)
        label = ({"theta": member.theta, "t": member.t}
                 if isinstance(member, BaseNeighborhood) else {"index": k})
        per_member.append({**label, "status": rep.status})
        violation = rep.max_violation if rep.max_violation is not None else np.inf
        if not rep.passed and violation >= worst:
            worst = float(violation) if np.isfinite(violation) else 1.0
            witness = {**label, **rep.witness}
    return CheckReport.from_violation("is_bounded", worst, tol, witness, members=per_member)


def _row_key(row: np.ndarray) -> bytes:
    return np.ascontiguousarray(row, dtype=float).tobytes()


def topology_axioms_check(family: Sequence[FuzzySet], constants: Sequence[float]) -> CheckReport:
    """Sampled constants, pairwise meets and pairwise joins all lie in the
    family (pointwise on the lattice).  Pairwise closure gives every finite
    meet and join by induction."""
    family = list(family)
    if not family:
        raise ValueError("empty family")
    rows = np.array([mu.lattice_values for mu in family])
    keys = {_row_key(r) for r in rows}
    size = rows.shape[1]
    missing = []
    for c in constants:
        if _row_key(np.full(size, float(c))) not in keys:
            missing.append({"axiom": "constant", "value": float(c)})
    for i in range(len(family)):
        for j in range(i + 1, len(family)):
            if _row_key(np.minimum(rows[i], rows[j])) not in keys:
                missing.append({"axiom": "meet", "pair": [i, j]})
            if _row_key(np.maximum(rows[i], rows[j])) not in keys:
                missing.append({"axiom": "join", "pair": [i, j]})
    return CheckReport.from_violation(
        "topology_axioms", float(len(missing)), 0.0,
        missing[0] if missing else {},
        family_size=len(family), constants=list(constants), missing=missing[:20],
    )


def hausdorff_check(family: Sequence[FuzzySet], x, y) -> CheckReport:
    """Some eta, beta in the family with eta(x) = beta(y) = 1 and eta ^ beta = 0."""
    family = list(family)
    if not family:
        raise ValueError("empty family")
    dim = family[0].domain.dimension
    x, y = as_points(x, dim)[0], as_points(y, dim)[0]
    if np.array_equal(x, y):
        raise ValueError("hausdorff_check needs distinct points")
    at_x = [float(mu(x)) for mu in family]
    at_y = [float(mu(y)) for mu in family]
    best, witness = np.inf, {}
    for i, eta in enumerate(family):
        for j, beta in enumerate(family):
            overlap = float(np.max(np.minimum(eta.lattice_values, beta.lattice_values)))
            score = max(1.0 - at_x[i], 1.0 - at_y[j], overlap)
            if score < best:
                best, witness = score, {"eta": i, "beta": j, "overlap": overlap}
            if score == 0:
                return CheckReport("hausdorff", PASS, 0.0, 0.0, witness, {"x": x, "y": y})
    return CheckReport("hausdorff", FAIL, best, 0.0, witness, {"x": x, "y": y})
