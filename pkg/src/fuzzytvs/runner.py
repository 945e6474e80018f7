"""Check orchestration and report emission for scenarios."""
from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import __version__
from .fuzzyset import FuzzySet, constant
from .properties import (
    BALANCED_T_GRID,
    CONVEX_T_GRID,
    T_GRID,
    THETA_GRID,
    absorbs,
    is_absorbing,
    is_balanced,
    is_convex,
    is_lsc,
    vanishing_dilation_check,
)
from .reals import DEFAULT_SCALES, felbin_axioms_check
from .report import FAIL, PASS, CheckReport, plain
from .scenario import Scenario
from .topology import (
    base_equivalence_check,
    default_base_catalog,
    hausdorff_check,
    is_bounded,
    is_linearly_open,
    is_neighborhood_of,
    katsaras_axioms_check,
    katsaras_from_felbin,
    topology_axioms_check,
)
from .weak import (
    DualPairScenario,
    WeakNeighborhood,
    decompose_or_witness,
    hausdorff_witness,
    net_converges_weakly,
    product_topology_check,
    weak_base_neighborhood,
    weak_seminorm_check,
    weakly_bounded_check,
    weakly_continuous_check,
    weakly_lsc_check,
)

TOOL = "fuzzytvs"
REPORT_SCHEMA_VERSION = 1
TIMING_FIELDS = ("elapsed_seconds", "total_elapsed_seconds")

DEFAULT_BASE_ALPHAS = tuple(np.round(0.1 * np.arange(1, 11), 12))
DEFAULT_BASE_EPSILONS = (0.5, 1.0, 2.0)


# ------------------------------------------------------------ helpers


def _grid(params, key, default):
    return np.asarray(params[key], dtype=float) if key in params else default


def _rho(scn: Scenario, mu: FuzzySet, params: dict) -> FuzzySet:
    dom = mu.domain
    return katsaras_from_felbin(scn.norm_for(params.get("norm"), dom.dimension), dom).rho


def _dual_pair(scn: Scenario) -> DualPairScenario:
    return DualPairScenario(scn.domain.dimension, scn.functionals, scn.scalar_domain,
                            scn.separates_points)


def default_vectors(n: int) -> list:
    eye = np.eye(n)
    vecs = [np.zeros(n), *eye, -eye[0], np.ones(n), -0.5 * np.ones(n)]
    if n >= 2:
        vecs.append(3 * eye[0] + 4 * eye[1])
    return vecs


# ------------------------------------------------------------ handlers


def _felbin_axioms(scn, p):
    n = scn.domain.dimension
    norm = scn.norm_for(p.get("norm"), n)
    vectors = p.get("vectors", default_vectors(n))
    t_values = _grid(p, "t_values", np.linspace(0.0, 4.0, 41))
    scales = p.get("scales", DEFAULT_SCALES)
    return [felbin_axioms_check(norm, vectors, t_values, scales, p.get("tolerance", 1e-12))]


def _base_equivalence(scn, p):
    norm = scn.norm_for(p.get("norm"), scn.domain.dimension)
    rho = katsaras_from_felbin(norm, scn.domain)
    return [base_equivalence_check(norm, rho, p.get("alphas", DEFAULT_BASE_ALPHAS),
                                   p.get("epsilons", DEFAULT_BASE_EPSILONS))]


def _katsaras_axioms(scn, p):
    if "set" in p:
        rho = scn.sets[p["set"]]
    else:
        rho = katsaras_from_felbin(scn.norm_for(p.get("norm"), scn.domain.dimension), scn.domain).rho
    return katsaras_axioms_check(rho, t_grid=_grid(p, "t_grid", T_GRID), absorption_box=p.get("box"))


def _single(fn, grid_default=None):
    def run(scn, p):
        mu = scn.sets[p["set"]]
        if grid_default is None:
            return [fn(mu)]
        return [fn(mu, _grid(p, "t_grid", grid_default))]
    return run


def _absorbing(scn, p):
    return [is_absorbing(scn.sets[p["set"]], _grid(p, "t_grid", T_GRID), p.get("box"))]


def _absorbs(scn, p):
    thetas = p.get("thetas")
    return [absorbs(scn.sets[p["set"]], scn.sets[p["other"]], thetas, _grid(p, "t_grid", T_GRID))]


def _is_bounded(scn, p):
    mu = scn.sets[p["set"]]
    base = default_base_catalog(_rho(scn, mu, p), p.get("thetas", (0.25, 0.5, 1.0)),
                                p.get("ts", (0.25, 0.5, 1.0)))
    return [is_bounded(mu, base, t_grid=_grid(p, "t_grid", T_GRID))]


def _neighborhood(scn, p):
    mu = scn.sets[p["set"]]
    return [is_neighborhood_of(mu, p["point"], _rho(scn, mu, p), _grid(p, "thetas", THETA_GRID),
                               _grid(p, "t_grid", T_GRID))]


def _linearly_open(scn, p):
    mu = scn.sets[p["set"]]
    norm = scn.norm_for(p.get("norm"), mu.domain.dimension)
    return [is_linearly_open(mu, norm, p.get("alphas"))]


def _family(scn, p):
    sets = [scn.sets[name] for name in p.get("sets", [])]
    dom = sets[0].domain if sets else scn.domain
    return sets, dom


def _topology_axioms(scn, p):
    sets, dom = _family(scn, p)
    constants = p.get("constants", [0.0, 1.0])
    family = sets + [constant(dom, c) for c in constants]
    return [topology_axioms_check(family, constants)]


def _hausdorff(scn, p):
    sets, _ = _family(scn, p)
    return [hausdorff_check(sets, p["x"], p["y"])]


def _hausdorff_witness(scn, p):
    try:
        f, beta, eta = hausdorff_witness(p["x"], p["y"], _dual_pair(scn))
    except ValueError as exc:
        return [CheckReport("hausdorff_witness", FAIL, None, 0.0,
                            {"x": p["x"], "y": p["y"]}, {"reason": str(exc)})]
    overlap = float(np.max(np.minimum(beta.lattice_values, eta.lattice_values)))
    miss = max(1.0 - beta([f(p["x"])]), 1.0 - eta([f(p["y"])]))
    lsc = [is_lsc(beta).status, is_lsc(eta).status]
    rep = CheckReport.from_violation(
        "hausdorff_witness", max(overlap, miss), 0.0, {"x": p["x"], "y": p["y"]},
        functional=f.coefficients, overlap=overlap, lsc=lsc,
    )
    if any(s != PASS for s in lsc):
        rep.status = FAIL
    return [rep]


def _decompose(scn, p):
    fs = p.get("functionals", scn.functionals)
    res = decompose_or_witness(p["target"], fs)
    branch = "coefficients" if res.in_span else "witness"
    value = res.coefficients if res.in_span else res.witness
    return [CheckReport.from_violation("decompose_or_witness", res.residual, 1e-9, {},
                                       branch=branch, result=value)]


def _net(scn, p):
    seq = scn.sequences[p["sequence"]]
    limit = p.get("limit", [0.0] * scn.domain.dimension)
    return [net_converges_weakly(seq, limit, _dual_pair(scn), tail=p.get("tail", 0))]


def _weakly_lsc(scn, p):
    if "pairs" in p:
        V = WeakNeighborhood(tuple((q["functional"], scn.sets[q["set"]]) for q in p["pairs"]))
    else:
        fs = p.get("functionals", scn.functionals)
        V = weak_base_neighborhood(fs, p.get("thetas", [1.0] * len(fs)), p.get("ts", [1.0] * len(fs)),
                                   scn.scalar_domain)
    return [weakly_lsc_check(V, scn.domain)]


def _weakly_continuous(scn, p):
    return [weakly_continuous_check(p["matrix"], p.get("e_functionals", scn.functionals),
                                    p.get("f_functionals", scn.functionals))]


def _weak_seminorm(scn, p):
    f = p.get("functional", scn.functionals[0])
    return [weak_seminorm_check(scn.sets[p["set"]], f, scn.scalar_domain,
                                p.get("scales", (-1.0, -0.5, -0.1, 0.1, 0.5, 1.0)))]


def _weakly_bounded(scn, p):
    return [weakly_bounded_check(scn.sets[p["set"]], _dual_pair(scn))]


def _product_topology(scn, p):
    a, b = (scn.sets[name] for name in p["sets"])
    if "points" in p:
        pts = np.asarray(p["points"], dtype=float)
    else:
        axis = scn.scalar_domain.axes[0]
        sample = axis[np.linspace(0, axis.size - 1, 41).round().astype(int)]
        pts = np.stack(np.meshgrid(sample, sample, indexing="ij"), axis=-1).reshape(-1, 2)
    return [product_topology_check(a, b, pts)]


@dataclass(frozen=True)
class CheckSpec:
    run: Callable
    summary: str


CHECKS: dict[str, CheckSpec] = {
    "felbin_axioms": CheckSpec(_felbin_axioms, "sampled F1-F3 axioms of the scenario norm"),
    "base_equivalence": CheckSpec(_base_equivalence, "alpha-open spheres vs theta ^ (t rho) at zero"),
    "katsaras_axioms": CheckSpec(_katsaras_axioms, "convex, balanced, absorbing, vanishing dilations"),
    "is_convex": CheckSpec(_single(is_convex, CONVEX_T_GRID), "pairwise convexity on the lattice"),
    "is_balanced": CheckSpec(_single(is_balanced, BALANCED_T_GRID), "mu(tx) >= mu(x) for |t| <= 1"),
    "is_absorbing": CheckSpec(_absorbing, "sup of dilations reaches 1"),
    "vanishing_dilation": CheckSpec(_single(vanishing_dilation_check, T_GRID), "inf of dilations is 0 off zero"),
    "absorbs": CheckSpec(_absorbs, "set absorbs other"),
    "is_bounded": CheckSpec(_is_bounded, "absorbed by every base neighbourhood"),
    "is_lsc": CheckSpec(_single(is_lsc), "three-valued lower semi-continuity"),
    "is_neighborhood_of": CheckSpec(_neighborhood, "contains a translated base neighbourhood"),
    "is_linearly_open": CheckSpec(_linearly_open, "alpha-open spheres fit below the set"),
    "topology_axioms": CheckSpec(_topology_axioms, "constants, meets and joins stay in the family"),
    "hausdorff": CheckSpec(_hausdorff, "a family separates two points"),
    "hausdorff_witness": CheckSpec(_hausdorff_witness, "weak separation of two points"),
    "decompose": CheckSpec(_decompose, "span membership or orthogonal witness"),
    "net_convergence": CheckSpec(_net, "weak convergence of a finite net tail"),
    "weakly_lsc": CheckSpec(_weakly_lsc, "lsc of a weak neighbourhood over the space"),
    "weakly_continuous": CheckSpec(_weakly_continuous, "adjoint images lie in the catalog span"),
    "weak_seminorm": CheckSpec(_weak_seminorm, "scaling invariance of the weak seminorm"),
    "weakly_bounded": CheckSpec(_weakly_bounded, "images under the catalog are bounded"),
    "product_topology": CheckSpec(_product_topology, "projection neighbourhoods are products"),
}


# ------------------------------------------------------------- reports


@dataclass
class RunReport:
    scenario: str
    seed: int
    checks: list = field(default_factory=list)
    configuration: dict = field(default_factory=dict)
    total_elapsed_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(entry["report"].passed for entry in self.checks)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_dict(self) -> dict:
        return plain({
            "tool": TOOL,
            "version": __version__,
            "report_schema": REPORT_SCHEMA_VERSION,
            "scenario": self.scenario,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [
                {"check": e["check"], "label": e["label"], "elapsed_seconds": e["elapsed_seconds"],
                 **e["report"].to_dict()}
                for e in self.checks
            ],
            "configuration": self.configuration,
            "total_elapsed_seconds": self.total_elapsed_seconds,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        lines = [f"scenario: {self.scenario}  ({TOOL} {__version__})"]
        for e in self.checks:
            label = e["label"] if e["label"] == e["check"] else f"{e['label']} [{e['check']}]"
            lines.append(f"  {e['report']}  ({label}, {e['elapsed_seconds']:.3f}s)")
        failed = [e["label"] for e in self.checks if not e["report"].passed]
        verdict = "PASS" if not failed else f"FAIL ({len(failed)} failing: {', '.join(failed)})"
        lines.append(f"overall: {verdict}")
        return "\n".join(lines) + "\n"


def strip_timing(data):
    """Copy of a report dict without timing fields."""
    if isinstance(data, dict):
        return {k: strip_timing(v) for k, v in data.items() if k not in TIMING_FIELDS}
    if isinstance(data, list):
        return [strip_timing(v) for v in data]
    return data


def run_checks(scn: Scenario) -> RunReport:
    report = RunReport(scn.name, scn.seed, configuration=scn.config)
    start = time.perf_counter()
    for params in scn.checks:
        kind = params["check"]
        tick = time.perf_counter()
        results = CHECKS[kind].run(scn, params)
        elapsed = time.perf_counter() - tick
        label = params.get("label", kind)
        for k, rep in enumerate(results):
            report.checks.append({
                "check": kind,
                "label": label if len(results) == 1 else f"{label}/{rep.name}",
                "elapsed_seconds": elapsed if k == 0 else 0.0,
                "report": rep,
            })
    report.total_elapsed_seconds = time.perf_counter() - start
    return report


def emit_report(report: RunReport, fmt: str = "json", path=None) -> None:
    """Write the report; raises OSError when ``path`` is not writable."""
    text = report.to_json() if fmt == "json" else report.to_text()
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)
