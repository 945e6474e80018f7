"""Acceptance suite: one test per criterion, each at its stated tolerance and
runtime bound.

Every test records a one-line PASS/FAIL verdict; the lines are printed in
the pytest terminal summary and by ``python3 tests/test_acceptance.py``.
"""
import json
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from fuzzytvs import (
    AffineMap,
    Domain,
    DualPairScenario,
    WeakNeighborhood,
    add,
    alpha_sphere,
    ball,
    constant,
    decompose_or_witness,
    euclidean_felbin_norm,
    hausdorff_witness,
    height,
    image,
    interval,
    is_lsc,
    join,
    katsaras_axioms_check,
    katsaras_from_felbin,
    meet,
    net_converges_weakly,
    product_topology_check,
    scalar_mul,
    triangular,
    weak_base_neighborhood,
    weak_seminorm,
    weak_seminorm_check,
    weakly_lsc_check,
)
from fuzzytvs.properties import lsc_falsify
from fuzzytvs.runner import strip_timing
from fuzzytvs.topology import base_equivalence_check

sys.path.insert(0, str(Path(__file__).parent))
from oracles import dilate_1d, dot, image_1d, lattice_1d, sup_min_sum  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
LINES = []


def verdict(number, title, ok, elapsed, bound, detail):
    within = bound is None or elapsed < bound
    status = "PASS" if (ok and within) else "FAIL"
    timing = f"{elapsed:.2f}s" + (f" (< {bound:g}s)" if bound is not None else "")
    LINES.append(f"{status} criterion {number:>2}: {title} | {detail} | {timing}")
    return ok and within


# -------------------------------------------------------------- shared data

SPACE = Domain.cube(2, -3, 3, 121)
ALPHAS = [round(0.1 * k, 12) for k in range(1, 11)]
EPSILONS = [0.5, 1.0, 2.0]
LINE = Domain.cube(1, -5, 5, 41)
LINE_POINTS = lattice_1d(-5, 5, 41)


def _tri(a, b, c):
    def f(x):
        if a < x <= b:
            return (x - a) / (b - a)
        if b < x < c:
            return (c - x) / (c - b)
        return 0.0
    return f


def _box(lo, hi, closed):
    if closed:
        return lambda x: 1.0 if lo <= x <= hi else 0.0
    return lambda x: 1.0 if lo < x < hi else 0.0


def _capped(level, f):
    return lambda x: min(level, f(x))


# each entry: (library fuzzy set on LINE, plain membership function)
SCALAR_CATALOG = [
    (interval(LINE, -1, 1), _box(-1, 1, False)),
    (interval(LINE, 0, 1, closed=True), _box(0, 1, True)),
    (interval(LINE, 2, 3, closed=True), _box(2, 3, True)),
    (triangular(LINE, 0, 1, 2), _tri(0, 1, 2)),
    (triangular(LINE, -2, -1, 0), _tri(-2, -1, 0)),
    (triangular(LINE, -1, 0.5, 1), _tri(-1, 0.5, 1)),
    (meet([constant(LINE, 0.6), interval(LINE, -2, 0.5)]), _capped(0.6, _box(-2, 0.5, False))),
    (meet([constant(LINE, 0.3), triangular(LINE, -3, -1, 1)]), _capped(0.3, _tri(-3, -1, 1))),
    (constant(LINE, 0.45), lambda x: 0.45),
    (interval(LINE, -4.5, -3.75, closed=True), _box(-4.5, -3.75, True)),
]


# ------------------------------------------------------------- criteria


def test_criterion_01_base_equivalence():
    start = time.perf_counter()
    norm = euclidean_felbin_norm(2)
    rho = katsaras_from_felbin(norm, SPACE)
    rep = base_equivalence_check(norm, rho, ALPHAS, EPSILONS)
    elapsed = time.perf_counter() - start
    # independent oracle: lattice points are k/20, so |y| < eps is an
    # integer comparison k1^2 + k2^2 < (20 eps)^2
    k = np.arange(-60, 61)
    k1, k2 = np.meshgrid(k, k, indexing="ij")
    squares = (k1 ** 2 + k2 ** 2).ravel()
    oracle_gap = 0.0
    for eps in EPSILONS:
        inside = squares < int(round(20 * eps)) ** 2
        for a in ALPHAS:
            got = alpha_sphere(norm, a, [0, 0], eps, SPACE).lattice_values
            oracle_gap = max(oracle_gap, float(np.max(np.abs(got - np.where(inside, a, 0.0)))))
    ok = rep.max_violation == 0 and oracle_gap == 0
    assert verdict(1, "alpha-sphere equals alpha ^ (eps rho) on 121x121", ok, elapsed, 5.0,
                   f"max violation {rep.max_violation:g}, oracle gap {oracle_gap:g}")


def test_criterion_02_katsaras_axioms():
    start = time.perf_counter()
    rho = katsaras_from_felbin(euclidean_felbin_norm(2), SPACE)
    convex, balanced, absorbing, vanishing = katsaras_axioms_check(rho)
    elapsed = time.perf_counter() - start
    ok = (convex.passed and convex.max_violation == 0
          and balanced.passed and balanced.max_violation == 0
          and absorbing.max_violation <= 1e-9 and vanishing.max_violation <= 1e-9)
    detail = ", ".join(f"{r.name}={r.max_violation:g}"
                       for r in (convex, balanced, absorbing, vanishing))
    assert verdict(2, "converted rho satisfies the Katsaras axioms", ok, elapsed, 30.0, detail)


def test_criterion_03_decompose_or_witness():
    rng = np.random.default_rng(20240603)
    cases = []
    for _ in range(100):
        k = int(rng.integers(0, 7))
        rank = int(rng.integers(0, min(k, 5) + 1))
        basis = rng.integers(-4, 5, size=(rank, 5)).astype(float)
        mix = rng.integers(-3, 4, size=(k, rank)).astype(float)
        fs = mix @ basis if rank else np.zeros((k, 5))
        fs = fs[np.any(fs != 0, axis=1)]
        if rng.random() < 0.5 and fs.shape[0]:
            f0 = rng.integers(-2, 3, size=fs.shape[0]).astype(float) @ fs
        else:
            f0 = rng.integers(-4, 5, size=5).astype(float)
        cases.append((f0, fs))

    start = time.perf_counter()
    results = [decompose_or_witness(f0, list(fs)) for f0, fs in cases]
    elapsed = time.perf_counter() - start

    agree, worst = 0, 0.0
    for (f0, fs), res in zip(cases, results):
        base_rank = np.linalg.matrix_rank(fs) if fs.shape[0] else 0
        in_span = np.linalg.matrix_rank(np.vstack([fs, f0])) == base_rank
        agree += res.in_span == in_span
        if res.in_span:
            worst = max(worst, float(np.max(np.abs(f0 - fs.T @ res.coefficients), initial=0.0)))
        else:
            worst = max(worst, abs(dot(f0, res.witness) - 1.0),
                        max((abs(dot(f, res.witness)) for f in fs), default=0.0))
    ok = agree == 100 and worst <= 1e-9
    assert verdict(3, "span decomposition or witness in R^5", ok, elapsed, 1.0,
                   f"branch agreement {agree}/100, worst residual {worst:.1e}")


def test_criterion_04_hausdorff_witnesses():
    rng = np.random.default_rng(7)
    scalar = Domain.cube(1, -8, 8, 321)
    scn = DualPairScenario(3, np.eye(3), scalar, separates_points=True)
    pairs = []
    while len(pairs) < 50:
        x = np.round(rng.uniform(-3, 3, 3), 2)
        y = np.round(rng.uniform(-3, 3, 3), 2)
        if rng.random() < 0.3:
            y[:2] = x[:2]
        if not np.array_equal(x, y):
            pairs.append((x, y))

    start = time.perf_counter()
    failures = 0
    for x, y in pairs:
        f, beta, eta = hausdorff_witness(x, y, scn)
        disjoint = not np.any(np.minimum(beta.lattice_values, eta.lattice_values))
        hits = beta(f(x)) == 1.0 and eta(f(y)) == 1.0
        lsc = is_lsc(beta).passed and is_lsc(eta).passed
        failures += not (disjoint and hits and lsc)
    elapsed = time.perf_counter() - start
    assert verdict(4, "Hausdorff witnesses in R^3", failures == 0, elapsed, 5.0,
                   f"{50 - failures}/50 witnesses satisfy all conditions")


def test_criterion_05_weak_lsc():
    space = Domain.cube(2, -2, 2, 41)
    scalar = Domain.cube(1, -5, 5, 201)
    functionals = [[1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [0.5, -1.0]]
    lsc_scalars = [
        interval(scalar, -1, 1),
        interval(scalar, 0.25, 2.5),
        triangular(scalar, -1, 0, 1),
        constant(scalar, 0.4),
        meet([constant(scalar, 0.7), interval(scalar, -0.5, 3)]),
        join([interval(scalar, -3, -1), triangular(scalar, 0, 1, 2)]),
    ]
    catalog = []
    for th in (0.5, 1.0):
        for t in (0.5, 1.0, 2.0):
            catalog.append(weak_base_neighborhood(functionals[:2], [th, th], [t, t], scalar))
            catalog.append(weak_base_neighborhood(functionals[2:], [th, 1.0], [t, 0.5 * t], scalar))
    for i, mu in enumerate(lsc_scalars):
        for j, nu in enumerate(lsc_scalars):
            if i < j:
                catalog.append(WeakNeighborhood(((functionals[i % 4], mu),
                                                 (functionals[(j + 1) % 4], nu))))

    start = time.perf_counter()
    passed, falsified = 0, 0
    for V in catalog:
        rep = weakly_lsc_check(V, space)
        passed += rep.passed and "float_resolution_witness" not in rep.details
        falsified += lsc_falsify(V.as_fuzzy_set(space)) is not None
    closed = WeakNeighborhood(((functionals[2], interval(scalar, -1, 1, closed=True)),))
    sensitivity = weakly_lsc_check(closed, space)
    elapsed = time.perf_counter() - start

    caught = sensitivity.status == "fail" and bool(sensitivity.witness)
    ok = passed == len(catalog) and falsified == 0 and caught
    assert verdict(5, "weak neighbourhoods from lsc sets are lsc", ok, elapsed, 10.0,
                   f"{passed}/{len(catalog)} pass, {falsified} falsified, "
                   f"closed indicator {'falsified' if caught else 'NOT falsified'}")


def test_criterion_06_sup_min_oracle():
    cases = [
        ("add", 0, 3), ("add", 1, 2), ("add", 3, 4), ("add", 6, 7),
        ("image", 3, lambda x: 2 * x), ("image", 6, lambda x: -x + 0.25),
        ("image", 7, lambda x: 0.5 * x),
        ("scale", 0, 2.0), ("scale", 5, -0.5), ("scale", 3, 0.0),
    ]
    maps = {0: [[2.0]], 1: [[-1.0]], 2: [[0.5]]}
    offsets = {0: 0.0, 1: 0.25, 2: 0.0}

    start = time.perf_counter()
    worst, image_index = 0.0, 0
    for op, i, arg in cases:
        mu, f = SCALAR_CATALOG[i]
        if op == "add":
            nu, g = SCALAR_CATALOG[arg]
            got = add(mu, nu).lattice_values
            expected = sup_min_sum(f, g, LINE_POINTS)
        elif op == "image":
            mapping = AffineMap(maps[image_index], [offsets[image_index]])
            image_index += 1
            got = image(mapping, mu, LINE).lattice_values
            expected = image_1d(arg, f, LINE_POINTS, LINE_POINTS)
        else:
            got = scalar_mul(arg, mu).lattice_values
            expected = dilate_1d(arg, f, LINE_POINTS)
        worst = max(worst, float(np.max(np.abs(got - np.asarray(expected)))))
    elapsed = time.perf_counter() - start
    assert verdict(6, "add / image / scalar_mul against brute force", worst == 0, elapsed, 2.0,
                   f"10 cases, max pointwise difference {worst:g}")


def test_criterion_07_weak_seminorm():
    space = Domain.cube(2, -2, 2, 41)
    scalar = Domain.cube(1, -10, 10, 801)
    mu = meet([constant(space, 0.8), ball(space, [0.25, -0.5], 1.0)])
    f = [1.0, -0.5]
    base = weak_seminorm(mu, f, scalar)
    gaps = [abs(weak_seminorm(mu, [t * c for c in f], scalar) - base)
            for t in (-1.0, -0.5, -0.1, 0.1, 0.5, 1.0)]
    at_zero = weak_seminorm(mu, [0.0, 0.0], scalar)
    rep = weak_seminorm_check(mu, f, scalar)
    ok = max(gaps) == 0 and at_zero == height(mu) and rep.passed and bool(rep.details.get("note"))
    assert verdict(7, "weak seminorm scaling and value at zero", ok, 0.0, None,
                   f"max scaling gap {max(gaps):g}, phi(0)={at_zero:g}, height={height(mu):g}, "
                   f"note {'present' if rep.details.get('note') else 'missing'}")


def test_criterion_08_net_convergence():
    scalar = Domain.cube(1, -10, 10, 801)
    scn = DualPairScenario(2, [[1.0, 0.0], [0.0, 1.0]], scalar, separates_points=True)
    runs = {
        "reciprocal": ([[1.0 / j, 0.0] for j in range(1, 1001)], [0.0, 0.0], "pass"),
        "constant": ([[0.5, -0.25]] * 1000, [0.5, -0.25], "pass"),
        "alternating": ([[(-1.0) ** j, 0.0] for j in range(1, 1001)], [0.0, 0.0], "fail"),
    }
    start = time.perf_counter()
    outcomes = {}
    for name, (seq, limit, _) in runs.items():
        rep = net_converges_weakly(seq, limit, scn, tail=200)
        outcomes[name] = (rep.details["neighborhood_criterion"], rep.details["scalar_criterion"],
                          rep.details["criteria_agree"])
    elapsed = time.perf_counter() - start
    ok = all(outcomes[n] == (want, want, True) for n, (_, _, want) in runs.items())
    detail = ", ".join(f"{n}={o[0]}/{o[1]}" for n, o in outcomes.items())
    assert verdict(8, "net convergence under both criteria", ok, elapsed, 1.0, detail)


def test_criterion_09_product_topology():
    space = Domain.cube(2, -5, 5, 41)
    points = space.points
    start = time.perf_counter()
    worst, cases = 0.0, 0
    for i in range(10):
        for j in (i + 3, i + 7):
            mu1, f1 = SCALAR_CATALOG[i]
            mu2, f2 = SCALAR_CATALOG[j % 10]
            rep = product_topology_check(mu1, mu2, points)
            V = WeakNeighborhood((([1.0, 0.0], mu1), ([0.0, 1.0], mu2)))
            got = V(points)
            expected = np.array([min(f1(a), f2(b)) for a, b in points])
            worst = max(worst, rep.max_violation, float(np.max(np.abs(got - expected))))
            cases += 1
    elapsed = time.perf_counter() - start
    assert verdict(9, "coordinate projections give the product topology", worst == 0 and cases == 20,
                   elapsed, None, f"{cases} cases, max pointwise difference {worst:g}")


def _run_full_suite():
    proc = subprocess.run(
        [sys.executable, "-m", "fuzzytvs.cli", "check", str(ROOT / "scenarios" / "full_suite.yaml")],
        capture_output=True, text=True, check=False,
    )
    data = json.loads(proc.stdout)
    return proc.returncode, json.dumps(strip_timing(data), sort_keys=True, indent=2).encode()


def test_criterion_10_determinism():
    start = time.perf_counter()
    code_a, first = _run_full_suite()
    code_b, second = _run_full_suite()
    elapsed = time.perf_counter() - start
    ok = first == second and code_a == code_b == 0
    assert verdict(10, "repeated full-suite runs are byte-identical", ok, elapsed, None,
                   f"{len(first)} bytes, identical={first == second}, exit codes {code_a}/{code_b}")


def _exact_lattice_sanity():
    # the 1-D lattice used above is dyadic, so the oracles compare exact values
    return all(Fraction(x).denominator in (1, 2, 4) for x in LINE_POINTS)


def test_oracle_lattice_is_exact():
    assert _exact_lattice_sanity()
    assert np.array_equal(LINE.axes[0], LINE_POINTS)


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    print("\n".join(LINES))
    sys.exit(1 if failed else 0)
