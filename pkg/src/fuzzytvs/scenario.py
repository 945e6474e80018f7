"""Scenario files: loading, schema validation and resolution into objects.

A scenario is YAML (or JSON, which YAML accepts).  The schema ships with
the package as ``schemas/scenario.schema.json``.
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np
import yaml

from .algebra import add, image, join, meet, preimage, scalar_mul, translate
from .domain import AffineMap, Domain
from .fuzzyset import (
    FuzzySet,
    ball,
    box,
    constant,
    grid_sample,
    halfspace,
    interval,
    singleton,
    triangular,
)
from .reals import FelbinNorm, StarNorm, crisp_norm, euclidean_felbin_norm, DEFAULT_ALPHAS
from .topology import alpha_sphere, katsaras_from_felbin
from .weak import DualPairScenario

DEFAULT_SCALAR_DOMAIN = {"bounds": [[-10.0, 10.0]], "resolution": 801}


class ScenarioError(Exception):
    """Unreadable, schema-violating or unresolvable scenario."""


def load_schema() -> dict:
    text = resources.files("fuzzytvs").joinpath("schemas/scenario.schema.json").read_text()
    return json.loads(text)


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "<root>"


def validate(data: Any) -> None:
    validator = jsonschema.Draft202012Validator(load_schema())
    err = jsonschema.exceptions.best_match(validator.iter_errors(data))
    if err is not None:
        raise ScenarioError(f"schema violation at {_path(err.absolute_path)}: {err.message}")


@dataclass
class Scenario:
    name: str
    domain: Domain
    scalar_domain: Domain
    norm: FelbinNorm
    norm_config: dict
    functionals: list
    separates_points: bool
    sets: dict
    set_kinds: dict
    sequences: dict
    checks: list
    seed: int
    config: dict = field(default_factory=dict)

    def norm_for(self, config: dict | None, dimension: int) -> FelbinNorm:
        return build_norm(config or self.norm_config, dimension)


def build_domain(spec: dict, where: str) -> Domain:
    bounds = tuple(tuple(float(v) for v in b) for b in spec["bounds"])
    res = spec["resolution"]
    res = tuple([int(res)] * len(bounds)) if isinstance(res, int) else tuple(int(r) for r in res)
    try:
        return Domain(bounds, res, bool(spec.get("unbounded", False)))
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def build_norm(spec: dict, dimension: int) -> FelbinNorm:
    alphas = np.asarray(spec.get("alphas", DEFAULT_ALPHAS), dtype=float)
    alphas = np.sort(alphas)
    kind = spec["kind"]
    if kind == "euclidean":
        return euclidean_felbin_norm(dimension, alphas)
    if kind == "star":
        return StarNorm(dimension, alphas)
    weights = spec.get("weights")
    if weights is not None and len(weights) != dimension:
        raise ScenarioError(f"norm.weights: expected {dimension} weights, got {len(weights)}")
    return crisp_norm(dimension, spec.get("p", 2.0), weights, spec.get("offset", 0.0), alphas)


class _Builder:
    """Resolves named fuzzy sets, following ``ref`` links on demand."""

    def __init__(self, definitions: dict, space: Domain, scalar: Domain, norm_config: dict):
        self.definitions = definitions
        self.domains = {"space": space, "scalar": scalar}
        self.norm_config = norm_config
        self.sets: dict[str, FuzzySet] = {}
        self.kinds: dict[str, str] = {}
        self._active: list[str] = []

    def kind_of(self, name: str) -> str:
        entry = self.definitions[name]
        return entry["domain"] if "expr" in entry else "space"

    def resolve(self, name: str, where: str) -> FuzzySet:
        if name in self.sets:
            return self.sets[name]
        if name not in self.definitions:
            raise ScenarioError(f"{where}: undefined fuzzy set '{name}'")
        if name in self._active:
            raise ScenarioError(f"{where}: circular reference through '{name}'")
        self._active.append(name)
        entry = self.definitions[name]
        kind = self.kind_of(name)
        expr = entry["expr"] if "expr" in entry else entry
        mu = self.build(expr, kind, f"fuzzy_sets.{name}")
        self._active.pop()
        self.sets[name], self.kinds[name] = mu, kind
        return mu

    def _vec(self, v, dim: int, where: str) -> np.ndarray:
        arr = np.asarray(v, dtype=float)
        if arr.shape != (dim,):
            raise ScenarioError(f"{where}: expected a vector of length {dim}, got {len(v)}")
        return arr

    def build(self, expr: dict, kind: str, where: str) -> FuzzySet:
        dom = self.domains[kind]
        n = dom.dimension
        (tag, arg), = expr.items()
        here = f"{where}.{tag}"
        try:
            if tag == "constant":
                return constant(dom, arg)
            if tag == "ball":
                center = self._vec(arg.get("center", [0.0] * n), n, here + ".center")
                return ball(dom, center, arg.get("radius", 1.0), arg.get("closed", False))
            if tag == "box":
                return box(dom, self._vec(arg["lower"], n, here + ".lower"),
                           self._vec(arg["upper"], n, here + ".upper"), arg.get("closed", False))
            if tag == "interval":
                if n != 1:
                    raise ScenarioError(f"{here}: intervals need a 1-D domain")
                return interval(dom, arg["lower"], arg["upper"], arg.get("closed", False))
            if tag == "halfspace":
                return halfspace(dom, self._vec(arg["normal"], n, here + ".normal"),
                                 arg["offset"], arg.get("closed", False))
            if tag == "singleton":
                point = self._vec(arg.get("point", [0.0] * n), n, here + ".point")
                return singleton(dom, point, arg.get("value", 1.0))
            if tag == "triangular":
                if n != 1:
                    raise ScenarioError(f"{here}: triangular sets need a 1-D domain")
                return triangular(dom, *arg)
            if tag == "grid":
                if len(arg["values"]) != dom.size:
                    raise ScenarioError(f"{here}.values: expected {dom.size} values, got {len(arg['values'])}")
                return grid_sample(dom, arg["values"])
            if tag == "katsaras":
                return katsaras_from_felbin(build_norm(self.norm_config, n), dom).rho
            if tag == "alpha_sphere":
                center = self._vec(arg.get("center", [0.0] * n), n, here + ".center")
                return alpha_sphere(build_norm(self.norm_config, n), arg["alpha"], center, arg["eps"], dom)
            if tag in ("meet", "join"):
                parts = [self.build(e, kind, f"{here}[{i}]") for i, e in enumerate(arg)]
                return meet(parts) if tag == "meet" else join(parts)
            if tag == "add":
                return add(self.build(arg[0], kind, here + "[0]"), self.build(arg[1], kind, here + "[1]"))
            if tag == "scale":
                return scalar_mul(arg["factor"], self.build(arg["of"], kind, here + ".of"))
            if tag == "translate":
                return translate(self._vec(arg["by"], n, here + ".by"), self.build(arg["of"], kind, here + ".of"))
            if tag == "pullback":
                A = np.asarray(arg["matrix"], dtype=float)
                inner = "scalar" if A.shape[0] == 1 else "space"
                offset = arg.get("offset", [0.0] * A.shape[0])
                self._check_matrix(A, self.domains[inner].dimension, n, here + ".matrix")
                mapping = AffineMap(A, self._vec(offset, A.shape[0], here + ".offset"))
                return preimage(mapping, self.build(arg["of"], inner, here + ".of"), dom)
            if tag == "image":
                A = np.asarray(arg["matrix"], dtype=float)
                src = self.domains["space"]
                self._check_matrix(A, n, src.dimension, here + ".matrix")
                return image(A, self.build(arg["of"], "space", here + ".of"), dom)
            if tag == "ref":
                mu = self.resolve(arg, here)
                if self.kinds[arg] != kind:
                    raise ScenarioError(f"{here}: '{arg}' lives on the {self.kinds[arg]} domain, "
                                        f"expected {kind}")
                return mu
        except ScenarioError:
            raise
        except (ValueError, TypeError) as exc:
            raise ScenarioError(f"{here}: {exc}") from None
        raise ScenarioError(f"{where}: unknown expression '{tag}'")

    @staticmethod
    def _check_matrix(A, rows, cols, where):
        if A.ndim != 2 or A.shape != (rows, cols):
            raise ScenarioError(f"{where}: expected a {rows}x{cols} matrix, got shape {A.shape}")


def _build_sequence(spec: dict, dim: int, where: str) -> np.ndarray:
    (tag, arg), = spec.items()
    if tag == "points":
        pts = np.asarray(arg, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != dim:
            raise ScenarioError(f"{where}.points: expected rows of length {dim}")
        return pts
    count = arg["count"]
    j = np.arange(1, count + 1, dtype=float)[:, None]
    direction = np.asarray(arg.get("direction", np.eye(dim)[0]), dtype=float)
    point = np.asarray(arg.get("point", np.zeros(dim)), dtype=float)
    for name, v in (("direction", direction), ("point", point)):
        if v.shape != (dim,):
            raise ScenarioError(f"{where}.{tag}.{name}: expected a vector of length {dim}")
    if tag == "reciprocal":
        return point + direction / j
    if tag == "alternating":
        return point + np.where(j % 2 == 0, 1.0, -1.0) * direction
    return np.repeat(point[None, :], count, axis=0)


_SET_FIELDS = ("set", "other")

#: parameters each check cannot run without
REQUIRED_PARAMS = {
    "is_convex": ("set",), "is_balanced": ("set",), "is_absorbing": ("set",),
    "vanishing_dilation": ("set",), "absorbs": ("set", "other"), "is_bounded": ("set",),
    "is_lsc": ("set",), "is_neighborhood_of": ("set", "point"), "is_linearly_open": ("set",),
    "hausdorff": ("sets", "x", "y"), "hausdorff_witness": ("x", "y"), "decompose": ("target",),
    "net_convergence": ("sequence",), "weakly_continuous": ("matrix",),
    "weak_seminorm": ("set",), "weakly_bounded": ("set",), "product_topology": ("sets",),
}

#: checks whose named sets must live on one particular domain
SET_DOMAIN = {"weakly_lsc": "scalar", "product_topology": "scalar",
              "weak_seminorm": "space", "weakly_bounded": "space"}


def _check_refs(check: dict, k: int, builder: _Builder, sequences: dict):
    where = f"checks[{k}]"
    kind = check["check"]
    for name in REQUIRED_PARAMS.get(kind, ()):
        if name not in check:
            raise ScenarioError(f"{where}.{name}: required by check '{kind}'")
    if kind == "product_topology" and len(check["sets"]) != 2:
        raise ScenarioError(f"{where}.sets: product_topology takes exactly two scalar sets")
    names = [(f, check[f]) for f in _SET_FIELDS if f in check]
    names += [(f"sets[{i}]", s) for i, s in enumerate(check.get("sets", []))]
    names += [(f"pairs[{i}].set", p["set"]) for i, p in enumerate(check.get("pairs", []))]
    for f, name in names:
        builder.resolve(name, f"{where}.{f}")
        need = SET_DOMAIN.get(kind)
        if need and builder.kinds[name] != need:
            raise ScenarioError(f"{where}.{f}: '{name}' must live on the {need} domain")
    if "sequence" in check and check["sequence"] not in sequences:
        raise ScenarioError(f"{where}.sequence: undefined sequence '{check['sequence']}'")


def parse_scenario(data: Any) -> Scenario:
    """Validate and resolve an already-parsed scenario document."""
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a mapping at the top level")
    validate(data)
    cfg = copy.deepcopy(data)
    cfg.setdefault("seed", 0)
    cfg.setdefault("scalar_domain", copy.deepcopy(DEFAULT_SCALAR_DOMAIN))
    cfg.setdefault("norm", {"kind": "euclidean"})
    cfg.setdefault("fuzzy_sets", {})
    cfg.setdefault("sequences", {})
    cfg.setdefault("separates_points", False)

    space = build_domain(cfg["domain"], "domain")
    scalar = build_domain(cfg["scalar_domain"], "scalar_domain")
    if scalar.dimension != 1:
        raise ScenarioError("scalar_domain: must be one-dimensional")
    n = space.dimension
    cfg.setdefault("functionals", np.eye(n).tolist())
    for i, f in enumerate(cfg["functionals"]):
        if len(f) != n:
            raise ScenarioError(f"functionals[{i}]: expected length {n}, got {len(f)}")
    norm = build_norm(cfg["norm"], n)
    try:
        DualPairScenario(n, cfg["functionals"], scalar, cfg["separates_points"])
    except ValueError as exc:
        raise ScenarioError(f"functionals: {exc}") from None

    builder = _Builder(cfg["fuzzy_sets"], space, scalar, cfg["norm"])
    for name in cfg["fuzzy_sets"]:
        builder.resolve(name, f"fuzzy_sets.{name}")
    sequences = {name: _build_sequence(spec, n, f"sequences.{name}")
                 for name, spec in cfg["sequences"].items()}
    for k, check in enumerate(cfg["checks"]):
        _check_refs(check, k, builder, sequences)

    return Scenario(
        name=cfg["name"], domain=space, scalar_domain=scalar, norm=norm, norm_config=cfg["norm"],
        functionals=[np.asarray(f, dtype=float) for f in cfg["functionals"]],
        separates_points=cfg["separates_points"], sets=builder.sets, set_kinds=builder.kinds,
        sequences=sequences, checks=cfg["checks"], seed=cfg["seed"], config=cfg,
    )


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"cannot parse {path}: {exc}") from None
    return parse_scenario(data)
