"""Execute scenarios: build the family, run audits in order, judge expectations, write outputs."""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import qmc

from . import __version__
from .centroaffine import check_tensor_identities
from .constants import EQUIVARIANCE_MATRICES
from .diffgeo import (
    BoundaryChart,
    ExponentialChart,
    affine_sphere_reports,
    check_gauge_equality,
    check_product_identity,
    crucial_pair_reports,
)
from .duality import audit_equivariance, audit_involution, audit_legendre, audit_radial_support
from .errors import CopolarError, NumericError, ParseError
from .pseudocone import PseudoCone, linear_image, make_family
from .report import AuditReport, jsonable
from .scenario import Scenario, configured_tolerance, expected_verdict

__all__ = [
    "EXIT_OK",
    "EXIT_PARSE",
    "EXIT_EXPECTATION",
    "EXIT_NUMERIC",
    "RunReport",
    "build_family",
    "run_scenario",
    "write_outputs",
]

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_EXPECTATION = 3
EXIT_NUMERIC = 4

# minimum smoothness class each audit needs
REQUIRED_SMOOTHNESS = {"eq3_2": 2, "eq4_1": 2, "affine_sphere": 2, "eq5_1": 3, "eq5_2": 3}

REPORT_NAME = "report.json"
CSV_NAME = "curvature_samples.csv"
TIMING_NAME = "timing.json"


@dataclass
class RunReport:
    scenario: Scenario
    reports: list
    expectations: list
    exit_status: int
    curvature_rows: list = field(default_factory=list)
    wall_clock: float = 0.0
    version: str = __version__

    def to_dict(self) -> dict:
        """Everything except wall-clock time, so identical runs serialize identically."""
        audits = []
        for rep, (expected, met) in zip(self.reports, self.expectations):
            audits.append({**rep.to_dict(), "expected": expected, "expectation_met": met})
        return jsonable(
            {
                "schema": "copolar.run/1",
                "version": self.version,
                "scenario": self.scenario.echo(),
                "audits": audits,
                "exit_status": self.exit_status,
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def summary(self) -> str:
        head = f"{'identity':<28} {'samples':>7} {'max error':>11} verdict   expected"
        lines = [f"scenario {self.scenario.name} ({self.scenario.family})", head, "-" * len(head)]
        for rep, (expected, met) in zip(self.reports, self.expectations):
            mark = "" if met else "  <-- unexpected"
            lines.append(f"{rep.summary_row():<56} {expected}{mark}")
        lines.append(f"exit status {self.exit_status}, wall-clock {self.wall_clock:.2f} s")
        return "\n".join(lines)


def build_family(scenario: Scenario) -> PseudoCone:
    try:
        K = make_family(scenario.family, **scenario.params)
    except (TypeError, ValueError, KeyError) as exc:
        raise ParseError(f"{scenario.source}: key 'family.params': {exc}") from None
    if scenario.linear_map is not None:
        A = np.asarray(scenario.linear_map, dtype=float)
        if A.shape != (K.n, K.n):
            raise ParseError(f"{scenario.source}: key 'linear_map': expected shape {(K.n, K.n)}, got {A.shape}")
        try:
            K = linear_image(K, A)
        except (NumericError, ValueError) as exc:
            raise ParseError(f"{scenario.source}: key 'linear_map': {exc}") from None
    return K


def _exponential_params(dim: int, count: int, seed: int) -> np.ndarray:
    """Low-discrepancy parameters in ``[-1, 1]^dim``."""
    halton = qmc.Halton(d=dim, scramble=False)
    halton.fast_forward(1 + seed)
    return 2.0 * halton.random(count) - 1.0


def _embed(A, n: int) -> np.ndarray:
    out = np.eye(n)
    out[:2, :2] = A
    return out


class _Audits:
    """Per-audit dispatch; each method returns a list of reports."""

    def __init__(self, K: PseudoCone, scenario: Scenario):
        self.K = K
        self.sc = scenario
        self.g = scenario.grid
        self.m = scenario.margin
        self.seed = scenario.seed
        self.rows: list = []
        self._tensor = None

    def involution(self):
        return audit_involution(self.K, self.g["directions"], self.m, member_points=self.g["member_points"], seed=self.seed)

    def eq1_1(self):
        return [audit_radial_support(self.K, self.g["directions"], self.m, seed=self.seed)]

    def eq2_1n(self):
        return audit_legendre(self.K, self.g["legendre_directions"], margin=self.m, seed=self.seed).reports

    def eq3_2(self):
        gauge = check_gauge_equality(self.K, self.g["interior_points"], self.m, seed=self.seed)
        return [gauge, *crucial_pair_reports(self.K, self.g["boundary_points"], self.m, seed=self.seed)]

    def eq4_1(self):
        report, rows = check_product_identity(self.K, self.g["curvature_pairs"], self.m, seed=self.seed)
        self.rows = rows
        return [report]

    def affine_sphere(self):
        return affine_sphere_reports(self.K, self.g["curvature_pairs"], self.m, seed=self.seed)

    def _tensors(self):
        if self._tensor is None:
            count = self.g["tensor_points"]
            if self.sc.chart == "exponential":
                param = ExponentialChart(self.K.n)
                params = _exponential_params(param.dim, count, self.seed)
                if not np.all(self.K.cone.interior_contains(np.array([param.point(t) for t in params]))):
                    raise ValueError("the exponential chart leaves the recession cone of this family")
                chart = BoundaryChart(self.K, param)
                self._tensor = check_tensor_identities(self.K, chart=chart, params=params)
            else:
                chart = BoundaryChart(self.K, margin=self.m)
                self._tensor = check_tensor_identities(self.K, count, chart=chart, seed=self.seed)
        return self._tensor

    def eq5_1(self):
        return [self._tensors()[0]]

    def eq5_2(self):
        return [self._tensors()[1]]

    def equivariance(self):
        n = self.K.n
        mats = EQUIVARIANCE_MATRICES if n == 2 else tuple(_embed(A, n) for A in EQUIVARIANCE_MATRICES)
        return [audit_equivariance(self.K, mats, self.g["equivariance_directions"], self.m, seed=self.seed)]


def _judge(scenario: Scenario, rep: AuditReport) -> tuple[str, bool]:
    expected = expected_verdict(scenario, rep.identity)
    if rep.verdict == "SKIPPED" or expected == "ANY":
        return expected, rep.verdict != "ERROR"
    if expected == "FAILS":
        return expected, rep.verdict == "FAILS" and rep.witness is not None
    return expected, rep.verdict == "HOLDS"


def _exit_status(reports: list, expectations: list) -> int:
    if any(r.verdict == "ERROR" for r in reports):
        return EXIT_NUMERIC
    if not all(met for _, met in expectations):
        return EXIT_EXPECTATION
    return EXIT_OK


def run_scenario(scenario: Scenario, tol_scale: float = 1.0) -> RunReport:
    """Run every audit of ``scenario`` in listed order; numeric failures become ERROR reports."""
    if not tol_scale > 0:
        raise ParseError(f"tolerance scale must be positive, got {tol_scale!r}")
    start = time.perf_counter()
    K = build_family(scenario)
    audits = _Audits(K, scenario)
    reports: list[AuditReport] = []
    for ident in scenario.audits:
        need = REQUIRED_SMOOTHNESS.get(ident, 0)
        if K.smoothness < need:
            reports.append(AuditReport.skipped(ident, f"{K.name} has smoothness class {K.smoothness} < {need}"))
            continue
        try:
            produced = getattr(audits, ident)()
        except (CopolarError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
            produced = [AuditReport.error(ident, exc)]
        for rep in produced:
            tol = configured_tolerance(scenario, rep.identity)
            if tol is not None:
                rep = rep.with_tol(tol)
            if tol_scale != 1.0:
                rep = rep.scaled(tol_scale)
            reports.append(rep)
    expectations = [_judge(scenario, r) for r in reports]
    return RunReport(
        scenario=scenario,
        reports=reports,
        expectations=expectations,
        exit_status=_exit_status(reports, expectations),
        curvature_rows=audits.rows,
        wall_clock=time.perf_counter() - start,
    )


def _csv_text(run: RunReport) -> str:
    n = len(run.curvature_rows[0]["x"]) if run.curvature_rows else None
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if n is None:
        writer.writerow(["family", "n", "kappa", "rho_aff", "pair_product"])
        return buf.getvalue()
    dim = len(np.atleast_1d(run.curvature_rows[0]["params"]))
    writer.writerow(
        ["family", "n"]
        + [f"chart_u{i + 1}" for i in range(dim)]
        + [f"x_{i + 1}" for i in range(n)]
        + ["kappa", "rho_aff", "pair_product"]
    )

    def fmt(v):
        v = float(v)
        return repr(v) if np.isfinite(v) else ""

    for row in run.curvature_rows:
        writer.writerow(
            [run.scenario.family, n]
            + [fmt(v) for v in np.atleast_1d(row["params"])]
            + [fmt(v) for v in row["x"]]
            + [fmt(row["kappa"]), fmt(row["rho_aff"]), fmt(row["pair_product"])]
        )
    return buf.getvalue()


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_outputs(run: RunReport, out_dir) -> dict:
    """Write the structured report, the curvature sample table and the timing sidecar."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {"report": out / REPORT_NAME, "csv": out / CSV_NAME, "timing": out / TIMING_NAME}
    _atomic_write(paths["report"], run.to_json())
    _atomic_write(paths["csv"], _csv_text(run))
    _atomic_write(paths["timing"], json.dumps({"wall_clock_seconds": run.wall_clock}) + "\n")
    return paths
