"""Independent reference computations used by the tests.

Everything here is plain Python over explicit lists so that it shares no
code path with the package: lattices are built by list comprehension,
membership functions are ordinary callables, suprema are explicit loops.
"""
from fractions import Fraction


def lattice_1d(lo, hi, count):
    step = Fraction(hi - lo) / (count - 1)
    return [float(Fraction(lo) + k * step) for k in range(count)]


def nearest(lattice, y):
    lo, hi = lattice[0], lattice[-1]
    if y < lo or y > hi:
        return None
    step = (hi - lo) / (len(lattice) - 1)
    return int(round((y - lo) / step))


def sup_min_sum(f, g, lattice):
    """(f + g)(x_k) = max over lattice x_i of min(f(x_i), g(x_k - x_i)),
    with g read as 0 outside the lattice box."""
    lo, hi = lattice[0], lattice[-1]

    def g_boxed(y):
        return g(y) if lo <= y <= hi else 0.0

    out = []
    for xk in lattice:
        best = 0.0
        for xi in lattice:
            fi = f(xi)
            if fi > 0:
                best = max(best, min(fi, g_boxed(xk - xi)))
        out.append(best)
    return out


def image_1d(fn, f, source, target):
    """Image of the fuzzy set f on ``source`` under fn, binned to the
    nearest ``target`` lattice point."""
    out = [0.0] * len(target)
    for x in source:
        k = nearest(target, fn(x))
        if k is not None:
            out[k] = max(out[k], f(x))
    return out


def dilate_1d(t, f, lattice):
    lo, hi = lattice[0], lattice[-1]
    if t == 0:
        top = max(f(x) for x in lattice)
        return [top if x == 0 else 0.0 for x in lattice]

    def boxed(y):
        return f(y) if lo <= y <= hi else 0.0

    return [boxed(x / t) for x in lattice]


def rank_by_pivots(rows, tol=1e-9):
    """Rank by Gaussian elimination with full pivoting on a copy."""
    m = [list(map(float, r)) for r in rows]
    if not m:
        return 0
    n = len(m[0])
    scale = max((abs(v) for r in m for v in r), default=0.0)
    if scale == 0:
        return 0
    rank = 0
    cols = list(range(n))
    for _ in range(min(len(m), n)):
        best, bi, bj = 0.0, -1, -1
        for i in range(rank, len(m)):
            for j in cols:
                if abs(m[i][j]) > best:
                    best, bi, bj = abs(m[i][j]), i, j
        if best <= tol * scale:
            break
        m[rank], m[bi] = m[bi], m[rank]
        p = m[rank][bj]
        for i in range(len(m)):
            if i != rank:
                factor = m[i][bj] / p
                m[i] = [a - factor * b for a, b in zip(m[i], m[rank])]
        cols.remove(bj)
        rank += 1
    return rank


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))
