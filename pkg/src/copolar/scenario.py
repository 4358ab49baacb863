"""Scenario files: which family to build, which identities to audit, and how hard.

A scenario is a YAML mapping::

    name: hyperbola
    family:
      name: hyperbola
      params: {c: 1.0}
    linear_map: [[2, 1], [0, 1]]        # optional, applied to the family
    audits: [involution, eq1_1, eq4_1]
    grid: {directions: 200, curvature_pairs: 30}
    margin: 0.05                        # optional footprint margin
    chart: gnomonic                     # or exponential (orthant families)
    tolerances: {eq4_1: 1.0e-5}         # per report id or audit id
    expect: {eq2_1n.sup: FAILS}         # per report id or audit id
    seed: 0
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np
import yaml

from .errors import ParseError, UnknownAudit
from .pseudocone import FAMILIES

__all__ = [
    "AUDIT_IDS",
    "GRID_DEFAULTS",
    "Scenario",
    "load_scenario",
    "parse_scenario",
    "expected_verdict",
    "configured_tolerance",
]

AUDIT_IDS = (
    "involution",
    "eq1_1",
    "eq2_1n",
    "eq3_2",
    "eq4_1",
    "affine_sphere",
    "eq5_1",
    "eq5_2",
    "equivariance",
)

GRID_DEFAULTS = {
    "directions": 200,
    "member_points": 1000,
    "legendre_directions": 25,
    "interior_points": 100,
    "boundary_points": 50,
    "curvature_pairs": 30,
    "tensor_points": 20,
    "equivariance_directions": 100,
}

TOP_LEVEL_KEYS = {"name", "family", "linear_map", "audits", "grid", "margin", "chart", "tolerances", "expect", "seed"}
VERDICTS = {"HOLDS", "FAILS", "ANY"}
CHARTS = {"gnomonic", "exponential"}

# the literal sup-form transform diverges on these families unless configured otherwise
DEFAULT_EXPECT = {"eq2_1n.sup": "FAILS"}


@dataclass(frozen=True)
class Scenario:
    name: str
    family: str
    params: dict
    audits: tuple
    linear_map: tuple | None = None
    grid: dict = field(default_factory=lambda: dict(GRID_DEFAULTS))
    margin: float | None = None
    chart: str = "gnomonic"
    tolerances: dict = field(default_factory=dict)
    expect: dict = field(default_factory=dict)
    seed: int = 0
    source: str = ""

    def with_seed(self, seed: int) -> "Scenario":
        return replace(self, seed=int(seed))

    def echo(self) -> dict:
        """Normalized scenario content for the run report."""
        return {
            "name": self.name,
            "family": self.family,
            "params": self.params,
            "linear_map": None if self.linear_map is None else [list(r) for r in self.linear_map],
            "audits": list(self.audits),
            "grid": dict(self.grid),
            "margin": self.margin,
            "chart": self.chart,
            "tolerances": dict(self.tolerances),
            "expect": dict(self.expect),
            "seed": self.seed,
        }


def _fail(where: str, key: str, msg: str) -> ParseError:
    return ParseError(f"{where}: key {key!r}: {msg}")


def _positive_float(where, key, value) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise _fail(where, key, f"expected a number, got {value!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise _fail(where, key, f"must be positive and finite, got {value!r}")
    return v


def _mapping(where, key, value) -> dict:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise _fail(where, key, f"expected a mapping, got {type(value).__name__}")
    return value


def _audit_prefix(ident: str) -> str:
    return ident.split(".", 1)[0]


def parse_scenario(data, where: str = "<scenario>") -> Scenario:
    """Validate a decoded scenario mapping."""
    if not isinstance(data, dict):
        raise ParseError(f"{where}: top level must be a mapping")
    unknown = sorted(set(data) - TOP_LEVEL_KEYS)
    if unknown:
        raise _fail(where, unknown[0], f"unknown key; allowed: {sorted(TOP_LEVEL_KEYS)}")

    fam = data.get("family")
    if isinstance(fam, str):
        fam = {"name": fam}
    fam = _mapping(where, "family", fam)
    if "name" not in fam:
        raise _fail(where, "family.name", "missing")
    if fam["name"] not in FAMILIES:
        raise _fail(where, "family.name", f"unknown family {fam['name']!r}; known: {sorted(FAMILIES)}")
    params = _mapping(where, "family.params", fam.get("params"))

    audits = data.get("audits")
    if not isinstance(audits, list) or not audits:
        raise _fail(where, "audits", "expected a non-empty list of audit ids")
    for a in audits:
        if a not in AUDIT_IDS:
            raise UnknownAudit(f"{where}: unknown audit id {a!r}; known: {list(AUDIT_IDS)}")

    grid = dict(GRID_DEFAULTS)
    for key, value in _mapping(where, "grid", data.get("grid")).items():
        if key not in GRID_DEFAULTS:
            raise _fail(where, f"grid.{key}", f"unknown grid size; allowed: {sorted(GRID_DEFAULTS)}")
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise _fail(where, f"grid.{key}", f"expected a positive integer, got {value!r}")
        grid[key] = value

    margin = data.get("margin")
    if margin is not None:
        margin = _positive_float(where, "margin", margin)

    chart = data.get("chart", "gnomonic")
    if chart not in CHARTS:
        raise _fail(where, "chart", f"expected one of {sorted(CHARTS)}, got {chart!r}")

    tolerances = {}
    for key, value in _mapping(where, "tolerances", data.get("tolerances")).items():
        if _audit_prefix(str(key)) not in AUDIT_IDS:
            raise UnknownAudit(f"{where}: tolerance for unknown audit id {key!r}")
        tolerances[str(key)] = _positive_float(where, f"tolerances.{key}", value)

    expect = {}
    for key, value in _mapping(where, "expect", data.get("expect")).items():
        if _audit_prefix(str(key)) not in AUDIT_IDS:
            raise UnknownAudit(f"{where}: expectation for unknown audit id {key!r}")
        if str(value).upper() not in VERDICTS:
            raise _fail(where, f"expect.{key}", f"expected one of {sorted(VERDICTS)}, got {value!r}")
        expect[str(key)] = str(value).upper()
    for key, value in DEFAULT_EXPECT.items():
        if key not in expect and _audit_prefix(key) not in expect:
            expect[key] = value

    linear_map = data.get("linear_map")
    if linear_map is not None:
        try:
            A = np.asarray(linear_map, dtype=float)
        except (TypeError, ValueError):
            raise _fail(where, "linear_map", "expected a square numeric matrix") from None
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise _fail(where, "linear_map", f"expected a square matrix, got shape {A.shape}")
        linear_map = tuple(tuple(float(v) for v in row) for row in A)

    seed = data.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise _fail(where, "seed", f"expected a non-negative integer, got {seed!r}")

    return Scenario(
        name=str(data.get("name", fam["name"])),
        family=fam["name"],
        params=dict(params),
        audits=tuple(audits),
        linear_map=linear_map,
        grid=grid,
        margin=margin,
        chart=chart,
        tolerances=tolerances,
        expect=expect,
        seed=seed,
        source=where,
    )


def load_scenario(path) -> Scenario:
    """Read and validate a scenario file; syntax errors carry the line and column."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read scenario: {exc.strerror}") from None
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        loc = f"line {mark.line + 1}, column {mark.column + 1}" if mark else "unknown location"
        problem = getattr(exc, "problem", None) or str(exc)
        raise ParseError(f"{path}: {loc}: {problem}") from None
    return parse_scenario(data, str(path))


def _lookup(table: dict, ident: str):
    if ident in table:
        return table[ident]
    return table.get(_audit_prefix(ident))


def expected_verdict(scenario: Scenario, ident: str) -> str:
    """Configured expectation for a report id: exact id first, then its audit id, else HOLDS."""
    value = _lookup(scenario.expect, ident)
    return value if value is not None else "HOLDS"


def configured_tolerance(scenario: Scenario, ident: str) -> float | None:
    return _lookup(scenario.tolerances, ident)
