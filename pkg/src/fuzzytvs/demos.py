"""Built-in demonstration runs."""
from __future__ import annotations

import time

import numpy as np

from .algebra import join, meet
from .domain import Domain
from .fuzzyset import constant, interval, singleton, triangular
from .reals import euclidean_felbin_norm, star_norm_on_K
from .report import PASS, CheckReport
from .runner import RunReport, run_checks
from .scenario import parse_scenario
from .topology import is_linearly_open

DEFAULT_DELTA_POINTS = (-0.5, 0.0, 0.5, 1.0)


def euclidean_equivalence() -> dict:
    return {
        "name": "euclidean-equivalence",
        "description": "Euclidean Felbin norm on R^2 and its converted Katsaras norm",
        "domain": {"bounds": [[-3, 3], [-3, 3]], "resolution": 121},
        "norm": {"kind": "euclidean"},
        "checks": [
            {"check": "felbin_axioms"},
            {"check": "base_equivalence", "alphas": [round(0.1 * k, 12) for k in range(1, 11)],
             "epsilons": [0.5, 1.0, 2.0]},
            {"check": "katsaras_axioms"},
        ],
    }


def product_topology() -> dict:
    scalar = {
        "open_unit": {"interval": {"lower": -1, "upper": 1}},
        "peak": {"triangular": [-1, 0, 1]},
        "shifted": {"triangular": [0, 1.5, 3]},
        "half": {"constant": 0.5},
        "capped": {"meet": [{"constant": 0.7}, {"interval": {"lower": -2, "upper": 0.5}}]},
    }
    names = list(scalar)
    checks = [{"check": "product_topology", "sets": [a, b], "label": f"product {a} x {b}"}
              for a in names for b in names if a != b][:10]
    checks.append({"check": "weakly_lsc",
                   "pairs": [{"functional": [1, 0], "set": "open_unit"},
                             {"functional": [0, 1], "set": "peak"}]})
    return {
        "name": "product-topology",
        "description": "coordinate-projection weak neighbourhoods on R^2",
        "domain": {"bounds": [[-3, 3], [-3, 3]], "resolution": 61},
        "scalar_domain": {"bounds": [[-4, 4]], "resolution": 161},
        "functionals": [[1, 0], [0, 1]],
        "separates_points": True,
        "fuzzy_sets": {k: {"domain": "scalar", "expr": v} for k, v in scalar.items()},
        "checks": checks,
    }


def delta(x: float, degree: int = 3) -> list:
    """Point evaluation p -> p(x) in the monomial basis."""
    return [float(x) ** k for k in range(degree + 1)]


def polynomial_deltas(points=DEFAULT_DELTA_POINTS) -> dict:
    points = [float(x) for x in points]
    if len(set(points)) != len(points) or not points:
        raise ValueError("sample points must be distinct and non-empty")
    if any(abs(x) > 1 for x in points):
        raise ValueError("sample points must lie in [-1, 1]")
    square, cube = [0, 0, 1, 0], [0, 0, 0, 1]
    count = 400
    perturbed = [[0.0, 0.0, 1.0, 1.0 / j] for j in range(1, count + 1)]
    probe = 0.3 if 0.3 not in points else 0.7
    return {
        "name": "polynomial-deltas",
        "description": "polynomials of degree <= 3 on [-1, 1] with point evaluations",
        "domain": {"bounds": [[-1, 1]] * 4, "resolution": 2},
        "functionals": [delta(x) for x in points],
        "fuzzy_sets": {},
        "sequences": {"to_square": {"points": perturbed}},
        "checks": [
            {"check": "net_convergence", "sequence": "to_square", "limit": square, "tail": 200,
             "label": "x^2 + x^3/j converges weakly to x^2"},
            {"check": "hausdorff_witness", "x": square, "y": cube, "label": "x^2 and x^3 separated"},
            {"check": "decompose", "target": delta(probe), "label": f"delta_{probe:g} against the catalog"},
        ],
    }


def _delta_values(points) -> CheckReport:
    """delta_x(x^2) for every sample point, against x**2."""
    square = np.array([0.0, 0.0, 1.0, 0.0])
    table = {f"{x:g}": float(np.dot(delta(x), square)) for x in points}
    worst = max(abs(v - float(x) ** 2) for x, v in zip(points, table.values()))
    return CheckReport.from_violation("delta_evaluation", worst, 0.0, {},
                                      polynomial="x^2", values=table)


def norm_comparison_catalog(domain: Domain) -> dict:
    return {
        "constant_0.5": constant(domain, 0.5),
        "open_interval": interval(domain, -1, 1),
        "closed_interval": interval(domain, -1, 1, closed=True),
        "triangular": triangular(domain, -1, 0, 1),
        "singleton": singleton(domain),
        "floor_0.3_join_open": join([constant(domain, 0.3), interval(domain, -1, 1)]),
        "cap_0.6_meet_triangular": meet([constant(domain, 0.6), triangular(domain, -1, 0, 1)]),
        "half_open": interval(domain, 0, 5),
    }


def norm_comparison() -> RunReport:
    domain = Domain.cube(1, -2, 2, 81)
    norms = {"euclidean": euclidean_felbin_norm(1), "star": star_norm_on_K()}
    report = RunReport("norm-comparison", 0, configuration={
        "domain": domain.as_dict(), "norms": list(norms)})
    start = time.perf_counter()
    table, agree = {}, 0
    for name, mu in norm_comparison_catalog(domain).items():
        tick = time.perf_counter()
        row = {k: is_linearly_open(mu, n).status for k, n in norms.items()}
        row["agree"] = row["euclidean"] == row["star"]
        agree += row["agree"]
        table[name] = row
        verdicts = ", ".join(f"{k}={row[k]}" for k in norms)
        rep = CheckReport(f"linearly_open {name} ({verdicts})", PASS, None, 0.0, {}, row)
        report.checks.append({"check": "is_linearly_open", "label": name,
                              "elapsed_seconds": time.perf_counter() - tick, "report": rep})
    summary = CheckReport("norm_comparison", PASS, None, 0.0, {}, {
        "agreements": agree, "disagreements": len(table) - agree,
        "separating_sets": [k for k, r in table.items() if not r["agree"]],
        "note": "tabulation only; a separating set is reported when found, never asserted",
    })
    report.checks.append({"check": "norm_comparison", "label": "norm_comparison",
                          "elapsed_seconds": 0.0, "report": summary})
    report.total_elapsed_seconds = time.perf_counter() - start
    return report


DEMOS = ("euclidean-equivalence", "product-topology", "polynomial-deltas", "norm-comparison")


def run_demo(name: str, points=None) -> RunReport:
    if name == "euclidean-equivalence":
        return run_checks(parse_scenario(euclidean_equivalence()))
    if name == "product-topology":
        return run_checks(parse_scenario(product_topology()))
    if name == "polynomial-deltas":
        points = DEFAULT_DELTA_POINTS if points is None else points
        report = run_checks(parse_scenario(polynomial_deltas(points)))
        report.checks.insert(0, {"check": "delta_evaluation", "label": "delta_evaluation",
                                 "elapsed_seconds": 0.0, "report": _delta_values(points)})
        return report
    if name == "norm-comparison":
        return norm_comparison()
    raise KeyError(name)
