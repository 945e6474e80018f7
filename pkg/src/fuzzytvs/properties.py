"""Lattice checkers for convex, balanced, absorbing and lsc fuzzy sets."""
from __future__ import annotations

from itertools import product as cartesian

import numpy as np

from .algebra import scalar_mul
from .fuzzyset import (
    Constant,
    CrispIndicator,
    FuzzySet,
    Join,
    Meet,
    Product,
    Pullback,
    Scale,
    Translate,
    Triangular,
)
from .report import FAIL, NOT_APPLICABLE, PASS, UNKNOWN, CheckReport

#: log-spaced dilation factors for absorption-type sweeps
T_GRID = np.logspace(-3, 3, 61)
# sixteenths: on a dyadic lattice every convex combination is then exact
CONVEX_T_GRID = np.arange(17) / 16.0
BALANCED_T_GRID = np.linspace(-1.0, 1.0, 21)
THETA_GRID = np.round(0.05 * np.arange(1, 21), 12)
SUP_TOL = 1e-9

_PAIR_BUDGET = 400_000


def origin_value(mu: FuzzySet) -> float:
    return float(mu(np.zeros(mu.domain.dimension)))


def is_convex(mu: FuzzySet, t_grid=CONVEX_T_GRID) -> CheckReport:
    """mu(t a + (1 - t) b) >= min(mu(a), mu(b)) over lattice pairs and t.

    Only pairs inside the support can violate the inequality, so the sweep
    runs over support pairs a < b.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    pts = mu.domain.points
    vals = mu.lattice_values
    supp = np.flatnonzero(vals > 0)
    P, V = pts[supp], vals[supp]
    m = len(supp)
    worst, witness = 0.0, {}
    block = max(1, _PAIR_BUDGET // max(m, 1))
    for start in range(0, m, block):
        rows = np.arange(start, min(start + block, m))
        ii, jj = np.meshgrid(rows, np.arange(m), indexing="ij")
        keep = jj > ii
        ii, jj = ii[keep], jj[keep]
        if ii.size == 0:
            continue
        floor = np.minimum(V[ii], V[jj])
        for t in t_grid:
            mid = t * P[ii] + (1.0 - t) * P[jj]
            gap = floor - mu(mid)
            k = int(np.argmax(gap))
            if gap[k] > worst:
                worst = float(gap[k])
                witness = {"a": P[ii[k]], "b": P[jj[k]], "t": t}
    return CheckReport.from_violation(
        "is_convex", worst, 0.0, witness,
        t_grid=t_grid, support_points=m,
        form="pairwise: mu(ta+(1-t)b) >= min(mu(a), mu(b))",
    )


def is_balanced(mu: FuzzySet, t_grid=BALANCED_T_GRID) -> CheckReport:
    """mu(t x) >= mu(x) over the lattice and sampled |t| <= 1."""
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.abs(t_grid) > 1):
        raise ValueError("balanced check needs |t| <= 1")
    pts, vals = mu.domain.points, mu.lattice_values
    worst, witness = 0.0, {}
    for t in t_grid:
        gap = vals - mu(t * pts)
        k = int(np.argmax(gap))
        if gap[k] > worst:
            worst, witness = float(gap[k]), {"x": pts[k], "t": t}
    return CheckReport.from_violation("is_balanced", worst, 0.0, witness, t_grid=t_grid)


def _dilations(mu: FuzzySet, t_grid, points) -> np.ndarray:
    """Row k holds (t_k mu)(points)."""
    return np.array([scalar_mul(t, mu)(points) for t in t_grid]).reshape(len(t_grid), -1)


def _box_mask(domain, box):
    if box is None:
        return np.ones(domain.size, dtype=bool)
    lo, hi = np.asarray(box, dtype=float).T
    pts = domain.points
    return np.all((pts >= lo) & (pts <= hi), axis=1)


def is_absorbing(mu: FuzzySet, t_grid=T_GRID, box=None, tol: float = SUP_TOL) -> CheckReport:
    """sup over sampled t > 0 of (t mu)(x) reaches 1 - tol on the absorption box.

    ``box`` is a list of (lower, upper) per axis; default is the whole lattice.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid <= 0):
        raise ValueError("dilation factors must be positive")
    pts = mu.domain.points[_box_mask(mu.domain, box)]
    sup = np.max(_dilations(mu, t_grid, pts), axis=0)
    gap = 1.0 - sup
    k = int(np.argmax(gap))
    return CheckReport.from_violation(
        "is_absorbing", max(float(gap[k]), 0.0), tol,
        {"x": pts[k], "sup": sup[k]} if gap[k] > tol else {},
        t_grid={"min": t_grid.min(), "max": t_grid.max(), "count": len(t_grid)},
        absorption_box=box if box is not None else [list(b) for b in mu.domain.bounds],
    )


def vanishing_dilation_check(mu: FuzzySet, t_grid=T_GRID, tol: float = SUP_TOL) -> CheckReport:
    """inf over sampled t > 0 of (t mu)(x) is 0 at every lattice x != 0."""
    t_grid = np.asarray(t_grid, dtype=float)
    pts = mu.domain.points
    pts = pts[np.any(pts != 0, axis=1)]
    inf = np.min(_dilations(mu, t_grid, pts), axis=0)
    k = int(np.argmax(inf))
    return CheckReport.from_violation(
        "vanishing_dilation", float(inf[k]), tol,
        {"x": pts[k], "inf": inf[k]} if inf[k] > tol else {},
        t_grid={"min": t_grid.min(), "max": t_grid.max(), "count": len(t_grid)},
    )


def absorbs(mu: FuzzySet, eta: FuzzySet, thetas=None, t_grid=T_GRID,
            tol: float = SUP_TOL) -> CheckReport:
    """Does mu absorb eta: for every sampled theta < mu(0) some sampled t > 0
    gives theta ^ (t eta) <= mu on the lattice?

    The defining inequality is strict; the lattice check uses <= (within
    ``tol``), since strictness at a boundary is invisible on a finite lattice.
    """
    mu0 = origin_value(mu)
    note = "strict '<' relaxed to '<=' on the lattice"
    if mu0 <= 0:
        return CheckReport("absorbs", NOT_APPLICABLE, None, tol,
                           {}, {"reason": "mu(0) = 0", "note": note})
    if thetas is None:
        thetas = [th for th in THETA_GRID if th < mu0] or [mu0 / 2]
    thetas = np.asarray(thetas, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    pts, target = mu.domain.points, mu.lattice_values
    dil = _dilations(eta, t_grid, pts)
    chosen, worst, witness = {}, 0.0, {}
    for th in thetas:
        excess = np.max(np.minimum(th, dil) - target, axis=1)
        ok = np.flatnonzero(excess <= tol)
        if ok.size:
            chosen[f"{th:g}"] = t_grid[ok[0]]
            continue
        k = int(np.argmin(excess))
        if excess[k] > worst:
            worst = float(excess[k])
            witness = {"theta": th, "best_t": t_grid[k], "excess": excess[k]}
    return CheckReport.from_violation(
        "absorbs", worst, tol, witness,
        thetas=thetas, chosen_t=chosen, note=note,
        t_grid={"min": t_grid.min(), "max": t_grid.max(), "count": len(t_grid)},
    )


# ------------------------------------------------------------------- lsc


def _stays_inside(mapping, source, target) -> bool:
    """Does the affine image of the source box lie in the target box?"""
    if target.unbounded:
        return True
    if source.unbounded:
        return False
    center = 0.5 * (source.lower + source.upper)
    half = 0.5 * (source.upper - source.lower)
    mid = mapping.matrix @ center + mapping.offset
    reach = np.abs(mapping.matrix) @ half
    return bool(np.all(mid - reach >= target.lower) and np.all(mid + reach <= target.upper))


def lsc_structure(mu: FuzzySet):
    """Structural verdict on lower semi-continuity: True, False or None.

    A pullback reads its operand through the operand's box, which cuts the
    composite off along a closed set; it inherits lsc only when the map
    keeps the whole source box inside that box.
    """
    node = mu.node
    if isinstance(node, (Constant, Triangular)):
        return True
    if isinstance(node, CrispIndicator):
        pred = node.predicate
        if pred.is_open:
            return True
        return False if pred.is_closed else None
    if isinstance(node, (Meet, Join)):
        verdicts = [lsc_structure(op) for op in node.operands]
        return True if all(v is True for v in verdicts) else None
    if isinstance(node, (Scale, Translate)):
        return lsc_structure(node.operand)
    if isinstance(node, Pullback):
        inner = lsc_structure(node.operand)
        if inner is True and _stays_inside(node.mapping, mu.domain, node.operand.domain):
            return True
        return None
    if isinstance(node, Product):
        both = (lsc_structure(node.left), lsc_structure(node.right))
        return True if both == (True, True) else None
    return None


def probe_directions(dimension: int) -> np.ndarray:
    if dimension <= 3:
        dirs = np.array([d for d in cartesian((-1, 0, 1), repeat=dimension) if any(d)],
                        dtype=float)
    else:
        eye = np.eye(dimension)
        ones = np.ones((1, dimension))
        dirs = np.vstack([eye, -eye, ones, -ones])
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def refinement_radii(domain, levels: int = 25, depth: float = 1e-12) -> np.ndarray:
    h = float(np.max(domain.spacing))
    return h * np.logspace(0, np.log10(depth), levels)


def lsc_falsify(mu: FuzzySet, radii=None, tol: float = SUP_TOL):
    """Probe shrinking spheres around lattice points.

    Returns the worst witness ``(x, value, local_inf)`` whose local infimum
    stays below ``mu(x) - tol`` at every radius, or None.  Probes leaving a
    bounded domain box are ignored (the topology is relative to the box).
    """
    domain = mu.domain
    radii = refinement_radii(domain) if radii is None else np.asarray(radii, dtype=float)
    dirs = probe_directions(domain.dimension)
    vals = mu.lattice_values
    cand = np.flatnonzero(vals > tol)
    if cand.size == 0:
        return None
    offsets = (radii[:, None, None] * dirs[None, :, :]).reshape(-1, domain.dimension)
    per_point = offsets.shape[0]
    chunk = max(1, 500_000 // per_point)
    best = None
    for start in range(0, cand.size, chunk):
        idx = cand[start:start + chunk]
        x = domain.points[idx]
        probes = (x[:, None, :] + offsets[None, :, :]).reshape(-1, domain.dimension)
        pv = np.asarray(mu(probes), dtype=float)
        if not domain.unbounded:
            pv = np.where(domain.contains(probes), pv, np.inf)
        pv = pv.reshape(len(idx), len(radii), len(dirs))
        local_inf = np.min(pv, axis=2)
        deficit = vals[idx][:, None] - local_inf
        stuck = np.all(deficit > tol, axis=1)
        if np.any(stuck):
            score = np.where(stuck, np.min(deficit, axis=1), -np.inf)
            k = int(np.argmax(score))
            if best is None or score[k] > best[3]:
                best = (x[k], vals[idx][k], float(local_inf[k, -1]), float(score[k]))
    return None if best is None else best[:3]


def is_lsc(mu: FuzzySet, radii=None, tol: float = SUP_TOL) -> CheckReport:
    """Three-valued lower semi-continuity check.

    A structural argument on the expression tree decides where it applies.
    Otherwise the numeric falsifier decides: a witness fails the check, no
    witness leaves it ``unknown``.  The falsifier runs in every case; a
    witness against a structurally lsc set can only come from floating-point
    resolution at a boundary and is recorded without changing the verdict.
    """
    structure = lsc_structure(mu)
    radii = refinement_radii(mu.domain) if radii is None else np.asarray(radii, dtype=float)
    found = lsc_falsify(mu, radii, tol)
    details = {
        "structural": {True: "lsc", False: "not lsc", None: "undecided"}[structure],
        "refinement_levels": len(radii),
        "finest_radius": float(radii.min()),
    }
    witness = {}
    if found is not None:
        x, value, local_inf = found
        witness = {"x": x, "value": value, "local_inf": local_inf}
    if structure is True:
        if witness:
            details["float_resolution_witness"] = witness
        return CheckReport("is_lsc", PASS, 0.0, tol, {}, details)
    if witness:
        return CheckReport("is_lsc", FAIL, witness["value"] - witness["local_inf"], tol,
                           witness, details)
    if structure is False:
        details["note"] = "structurally not lsc; no lattice point exposes it"
        return CheckReport("is_lsc", FAIL, None, tol, {}, details)
    return CheckReport("is_lsc", UNKNOWN, None, tol, {}, details)
