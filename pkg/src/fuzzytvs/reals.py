"""Fuzzy real numbers as sampled alpha-cut families, and Felbin fuzzy norms."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian
from typing import Callable, Optional, Sequence

import numpy as np

from .domain import as_points, euclidean_length
from .report import FAIL, PASS, CheckReport

#: 0.01, then 0.05 to 1.0 in steps of 0.05
DEFAULT_ALPHAS = np.round(np.concatenate([[0.01], 0.05 * np.arange(1, 21)]), 12)
DEFAULT_SCALES = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)

_LEVEL_SLACK = 1e-12


def level_index(alphas: np.ndarray, alpha: float) -> int:
    """Index of the nearest sampled level at or below ``alpha``."""
    k = int(np.searchsorted(alphas, alpha + _LEVEL_SLACK, side="right")) - 1
    return max(k, 0)


@dataclass(frozen=True, eq=False)
class FuzzyReal:
    """A fuzzy real sampled through its alpha-cuts [lower_k, upper_k].

    No invariant is enforced on construction; use :func:`validate_fuzzy_real`.
    ``membership`` optionally gives the exact membership function; otherwise
    membership is recovered from the sampled cuts.
    """

    alphas: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    normal_point: float
    membership: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        alphas = np.asarray(self.alphas, dtype=float).reshape(-1)
        lower = np.asarray(self.lower, dtype=float).reshape(-1)
        upper = np.asarray(self.upper, dtype=float).reshape(-1)
        if not (alphas.shape == lower.shape == upper.shape):
            raise ValueError("alphas, lower and upper must have equal length")
        order = np.argsort(alphas, kind="stable")
        for name, arr in (("alphas", alphas[order]), ("lower", lower[order]),
                          ("upper", upper[order])):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "normal_point", float(self.normal_point))

    @classmethod
    def crisp(cls, value: float, alphas=DEFAULT_ALPHAS) -> "FuzzyReal":
        value = float(value)
        alphas = np.asarray(alphas, dtype=float)
        full = np.full(alphas.shape, value)
        return cls(alphas, full, full, value,
                   lambda t: (np.asarray(t, dtype=float) == value).astype(float))

    @classmethod
    def from_cuts(cls, cuts: dict, normal_point: Optional[float] = None) -> "FuzzyReal":
        """Build from ``{alpha: (lower, upper)}``."""
        alphas = sorted(cuts)
        lower = [cuts[a][0] for a in alphas]
        upper = [cuts[a][1] for a in alphas]
        if normal_point is None:
            normal_point = lower[-1]
        return cls(np.array(alphas), np.array(lower), np.array(upper), normal_point)

    def cut(self, alpha: float) -> tuple[float, float]:
        k = level_index(self.alphas, alpha)
        return float(self.lower[k]), float(self.upper[k])

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.membership is not None:
            return self.membership(t)
        inside = (t[..., None] >= self.lower) & (t[..., None] <= self.upper)
        return np.max(np.where(inside, self.alphas, 0.0), axis=-1)

    @property
    def is_crisp_zero(self) -> bool:
        return bool(np.all(self.lower == 0) and np.all(self.upper == 0))


def validate_fuzzy_real(eta: FuzzyReal, nonnegative: bool = False) -> CheckReport:
    """Check N2 (bounded closed cuts), cut nesting, N1 (a normal point) and,
    optionally, non-negativity.  Violations are returned, never raised."""
    problems = []
    a, lo, hi = eta.alphas, eta.lower, eta.upper

    finite = np.isfinite(lo) & np.isfinite(hi)
    for k in np.flatnonzero(~finite):
        problems.append(("N2", 1.0, {"alpha": a[k], "reason": "unbounded cut"}))
    for k in np.flatnonzero(finite & (lo > hi)):
        problems.append(("N2", lo[k] - hi[k], {"alpha": a[k], "lower": lo[k], "upper": hi[k]}))

    for k in range(len(a) - 1):
        grow = max(lo[k] - lo[k + 1], hi[k + 1] - hi[k])
        if grow > 0:
            problems.append(("nesting", grow, {"alphas": [a[k], a[k + 1]]}))

    if len(a) == 0 or a[-1] != 1.0:
        problems.append(("N1", 1.0, {"reason": "no cut sampled at alpha = 1"}))
    else:
        gap = max(lo[-1] - eta.normal_point, eta.normal_point - hi[-1], 0.0)
        if gap > 0:
            problems.append(("N1", gap, {"normal_point": eta.normal_point,
                                         "cut": [lo[-1], hi[-1]]}))

    if nonnegative and np.any(lo < 0):
        k = int(np.argmin(lo))
        problems.append(("nonnegative", -lo[k], {"alpha": a[k], "lower": lo[k]}))

    if not problems:
        return CheckReport("fuzzy_real", PASS, 0.0)
    axiom, _, witness = problems[0]
    return CheckReport(
        "fuzzy_real", FAIL, max(p[1] for p in problems), 0.0,
        {"axiom": axiom, **witness},
        {"violations": [{"axiom": p[0], "magnitude": p[1], **p[2]} for p in problems]},
    )


def scalar_scale(r: float, eta: FuzzyReal) -> FuzzyReal:
    """|r| (.) eta: every cut scaled by |r|."""
    r = abs(float(r))
    if r == 0.0:
        return FuzzyReal.crisp(0.0, eta.alphas)
    membership = None
    if eta.membership is not None:
        inner = eta.membership
        membership = lambda t: inner(np.asarray(t, dtype=float) / r)  # noqa: E731
    return FuzzyReal(eta.alphas, r * eta.lower, r * eta.upper, r * eta.normal_point,
                     membership)


# -------------------------------------------------------------- Felbin norms


class FelbinNorm:
    """A map from vectors of R^n to non-negative fuzzy reals with left/right
    combination maps ``L`` and ``R`` (default min and max).

    Subclasses implement :meth:`__call__`; the vectorized endpoint queries
    fall back to per-point evaluation.
    """

    name = "felbin"

    def __init__(self, dimension: int, alphas=DEFAULT_ALPHAS,
                 L: Callable = np.minimum, R: Callable = np.maximum):
        if dimension < 1:
            raise ValueError("dimension must be at least 1")
        self.dimension = int(dimension)
        self.alphas = np.asarray(alphas, dtype=float)
        self.L = L
        self.R = R

    def __call__(self, x) -> FuzzyReal:
        raise NotImplementedError

    # True when the alpha-cuts do not depend on alpha (crisp values)
    level_independent = False

    def upper(self, points, alpha: float) -> np.ndarray:
        """||x||^+_alpha for each row of ``points``."""
        pts = as_points(points, self.dimension)
        return np.array([self(p).cut(alpha)[1] for p in pts])

    def lower(self, points, alpha: float) -> np.ndarray:
        pts = as_points(points, self.dimension)
        return np.array([self(p).cut(alpha)[0] for p in pts])

    def sup_upper(self, points) -> np.ndarray:
        """Supremum over the sampled levels of ||x||^+_alpha."""
        return np.max([self.upper(points, a) for a in self.alphas], axis=0)

    def membership(self, x, t) -> np.ndarray:
        """||x||(t) for one vector ``x`` and an array of ``t``."""
        return np.asarray(self(x)(t), dtype=float)

    def describe(self) -> dict:
        return {"kind": self.name, "dimension": self.dimension}


class CallableFelbinNorm(FelbinNorm):
    """Felbin norm given by an arbitrary ``x -> FuzzyReal`` callable."""

    name = "callable"

    def __init__(self, fn: Callable[[np.ndarray], FuzzyReal], dimension: int, **kw):
        super().__init__(dimension, **kw)
        self._fn = fn

    def __call__(self, x) -> FuzzyReal:
        return self._fn(as_points(x, self.dimension)[0])


class CrispNorm(FelbinNorm):
    """||x|| is the crisp fuzzy real at ``length(x) + offset``.

    A non-zero ``offset`` breaks F1 on purpose; it exists to exercise the
    axiom checker.
    """

    def __init__(self, dimension: int, length: Callable[[np.ndarray], np.ndarray],
                 name: str = "crisp", offset: float = 0.0, **kw):
        super().__init__(dimension, **kw)
        self._length = length
        self.name = name
        self.offset = float(offset)

    def length(self, points) -> np.ndarray:
        pts = as_points(points, self.dimension)
        return self._length(pts) + self.offset

    def __call__(self, x) -> FuzzyReal:
        return FuzzyReal.crisp(float(self.length(x)[0]), self.alphas)

    level_independent = True

    def upper(self, points, alpha):
        return self.length(points)

    lower = upper

    def sup_upper(self, points):
        return self.length(points)

    def membership(self, x, t):
        return (np.asarray(t, dtype=float) == self.length(x)[0]).astype(float)

    def describe(self):
        out = super().describe()
        if self.offset:
            out["offset"] = self.offset
        return out


def _euclidean(points):
    return euclidean_length(points)


def euclidean_felbin_norm(n: int, alphas=DEFAULT_ALPHAS) -> CrispNorm:
    """Crisp norm at the Euclidean length, with L = min and R = max."""
    return CrispNorm(n, _euclidean, name="euclidean", alphas=alphas)


def crisp_norm(n: int, p: float = 2.0, weights=None, offset: float = 0.0,
               alphas=DEFAULT_ALPHAS) -> CrispNorm:
    """Crisp weighted p-norm (p = 1, 2, ... or inf)."""
    w = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    if w.shape != (n,) or np.any(w <= 0):
        raise ValueError("weights must be n positive numbers")
    p = float(p)
    if p < 1:
        raise ValueError("p must be >= 1")

    def length(points):
        a = np.abs(np.asarray(points, dtype=np.longdouble)) * w
        if np.isinf(p):
            return np.max(a, axis=1).astype(float)
        if p == 2.0:
            return euclidean_length(a)
        if p == 1.0:
            return np.sum(a, axis=1).astype(float)
        return (np.sum(a ** p, axis=1) ** (1.0 / p)).astype(float)

    name = "euclidean" if (p == 2.0 and weights is None) else f"crisp_p{p:g}"
    return CrispNorm(n, length, name=name, offset=offset, alphas=alphas)


class StarNorm(FelbinNorm):
    """||x||*(t) = 1 - t/|x| on [0, |x|] (x != 0); ||0||* is crisp 0.

    Cuts are [0, |x|(1 - alpha)].
    """

    name = "star"

    def __init__(self, dimension: int = 1, alphas=DEFAULT_ALPHAS):
        super().__init__(dimension, alphas=alphas)

    def _snap(self, alpha: float) -> float:
        return float(self.alphas[level_index(self.alphas, alpha)])

    def __call__(self, x) -> FuzzyReal:
        size = float(_euclidean(as_points(x, self.dimension))[0])
        if size == 0.0:
            return FuzzyReal.crisp(0.0, self.alphas)

        def membership(t, size=size):
            t = np.asarray(t, dtype=float)
            return np.where((t >= 0) & (t <= size), 1.0 - t / size, 0.0)

        return FuzzyReal(self.alphas, np.zeros_like(self.alphas),
                         size * (1.0 - self.alphas), 0.0, membership)

    def upper(self, points, alpha):
        return _euclidean(as_points(points, self.dimension)) * (1.0 - self._snap(alpha))

    def lower(self, points, alpha):
        return np.zeros(as_points(points, self.dimension).shape[0])

    def sup_upper(self, points):
        return _euclidean(as_points(points, self.dimension)) * (1.0 - self.alphas[0])


def star_norm_on_K(alphas=DEFAULT_ALPHAS) -> StarNorm:
    return StarNorm(1, alphas)


# --------------------------------------------------------------- axiom check


def felbin_axioms_check(norm: FelbinNorm, vectors: Sequence, t_values: Sequence,
                        scales: Sequence = DEFAULT_SCALES,
                        tolerance: float = 1e-12) -> CheckReport:
    """Sample F1, F2, F3R and F3L (and the fuzzy-real axioms of every value).

    A failure is conclusive; a pass only covers the samples.
    """
    vectors = [as_points(v, norm.dimension)[0] for v in vectors]
    if not vectors or len(t_values) == 0:
        raise ValueError("felbin_axioms_check needs non-empty samples")
    t = np.asarray(t_values, dtype=float)
    worst: dict[str, tuple[float, dict]] = {}

    def record(axiom, violation, witness):
        violation = float(violation)
        if axiom not in worst or violation > worst[axiom][0]:
            worst[axiom] = (violation, witness)

    values = [norm(v) for v in vectors]
    for v, val in zip(vectors, values):
        rep = validate_fuzzy_real(val, nonnegative=True)
        record("fuzzy_real", rep.max_violation, {"x": v, **rep.witness})

        is_zero = not np.any(v)
        if is_zero and not val.is_crisp_zero:
            record("F1", max(np.max(np.abs(val.lower)), np.max(np.abs(val.upper))),
                   {"x": v, "reason": "||0|| is not crisp zero"})
        elif not is_zero and val.is_crisp_zero:
            record("F1", 1.0, {"x": v, "reason": "non-zero vector has crisp zero norm"})
        else:
            record("F1", 0.0, {})

        for r in scales:
            lhs = norm(r * v)
            rhs = scalar_scale(r, val)
            scale = max(1.0, float(np.max(np.abs(rhs.upper))))
            diff = max(np.max(np.abs(lhs.lower - rhs.lower)),
                       np.max(np.abs(lhs.upper - rhs.upper))) / scale
            record("F2", diff, {"x": v, "r": r})

    s_grid, t_grid = np.meshgrid(t, t, indexing="ij")
    s_flat, t_flat = s_grid.ravel(), t_grid.ravel()
    for (i, x), (j, y) in cartesian(enumerate(vectors), repeat=2):
        xy = x + y
        lx = values[i].cut(1.0)[0]
        ly = values[j].cut(1.0)[0]
        lxy = norm(xy).cut(1.0)[0]
        mx = norm.membership(x, s_flat)
        my = norm.membership(y, t_flat)
        mxy = norm.membership(xy, s_flat + t_flat)

        guard_r = (s_flat >= lx) & (t_flat >= ly) & (s_flat + t_flat >= lxy)
        viol_r = np.where(guard_r, mxy - norm.R(mx, my), 0.0)
        k = int(np.argmax(viol_r))
        record("F3R", max(viol_r[k], 0.0), {"x": x, "y": y, "s": s_flat[k], "t": t_flat[k]})

        guard_l = (s_flat <= lx) & (t_flat <= ly) & (s_flat + t_flat <= lxy)
        viol_l = np.where(guard_l, norm.L(mx, my) - mxy, 0.0)
        k = int(np.argmax(viol_l))
        record("F3L", max(viol_l[k], 0.0), {"x": x, "y": y, "s": s_flat[k], "t": t_flat[k]})

    overall = max(v for v, _ in worst.values())
    axiom = max(worst, key=lambda a: worst[a][0])
    return CheckReport.from_violation(
        "felbin_axioms", overall, tolerance,
        {"axiom": axiom, **worst[axiom][1]} if overall > tolerance else {},
        axioms={a: {"max_violation": v} for a, (v, _) in sorted(worst.items())},
        norm=norm.describe(),
        samples={"vectors": len(vectors), "t_values": len(t), "scales": list(scales)},
        note="sampled check: a failure is conclusive, a pass covers the samples only",
    )
