"""Error statistics and verdicts for identity audits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["Offender", "AuditReport", "jsonable"]

WORST_KEPT = 5


def jsonable(value):
    """Convert numpy values and non-finite floats into JSON-safe Python objects."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.floating, float)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value


@dataclass(frozen=True)
class Offender:
    point: tuple
    lhs: float
    rhs: float
    error: float

    def to_dict(self) -> dict:
        return jsonable({"point": list(self.point), "lhs": self.lhs, "rhs": self.rhs, "error": self.error})


@dataclass
class AuditReport:
    """Outcome of checking ``lhs == rhs`` over a sample of points.

    ``verdict`` is ``"HOLDS"`` when the chosen error metric stays within ``tol``,
    ``"FAILS"`` otherwise (with ``witness`` the worst point), ``"ERROR"`` when
    a numeric failure prevented the audit from completing, or ``"SKIPPED"`` when
    the audit does not apply to the family.
    """

    identity: str
    samples: int
    max_abs: float
    max_rel: float
    tol: float
    metric: str = "abs"
    offenders: list[Offender] = field(default_factory=list)
    verdict: str = "HOLDS"
    witness: Offender | None = None
    message: str = ""
    extras: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == "HOLDS"

    @property
    def max_error(self) -> float:
        return self.max_rel if self.metric == "rel" else self.max_abs

    @classmethod
    def compare(
        cls,
        identity: str,
        points,
        lhs,
        rhs,
        tol: float,
        metric: str = "abs",
        extras: dict | None = None,
    ) -> "AuditReport":
        """Build a report from paired values; ``metric`` is ``"abs"`` or ``"rel"``."""
        if metric not in ("abs", "rel"):
            raise ValueError("metric must be 'abs' or 'rel'")
        points = [tuple(float(c) for c in np.atleast_1d(p)) for p in points]
        lhs = np.asarray(lhs, dtype=float).reshape(len(points), -1)
        rhs = np.asarray(rhs, dtype=float).reshape(len(points), -1)
        with np.errstate(invalid="ignore"):
            diff = np.abs(lhs - rhs)
            # equal infinities count as agreement
            diff = np.where((lhs == rhs), 0.0, diff)
            diff = np.where(np.isnan(diff), np.inf, diff)
            scale = np.maximum(np.abs(rhs), 1e-300)
            rel = np.where(diff == 0.0, 0.0, diff / scale)
        abs_pt = diff.max(axis=1) if diff.size else np.zeros(len(points))
        rel_pt = rel.max(axis=1) if rel.size else np.zeros(len(points))
        err = rel_pt if metric == "rel" else abs_pt
        # stable descending sort, ties keep sample order
        order = sorted(range(len(points)), key=lambda i: -err[i])
        offenders = []
        for i in order[:WORST_KEPT]:
            lv = lhs[i] if lhs.shape[1] > 1 else lhs[i, 0]
            rv = rhs[i] if rhs.shape[1] > 1 else rhs[i, 0]
            offenders.append(Offender(points[i], jsonable(lv), jsonable(rv), float(err[i])))
        max_abs = float(abs_pt.max()) if len(points) else 0.0
        max_rel = float(rel_pt.max()) if len(points) else 0.0
        worst = float(err.max()) if len(points) else 0.0
        holds = worst <= tol
        return cls(
            identity=identity,
            samples=len(points),
            max_abs=max_abs,
            max_rel=max_rel,
            tol=float(tol),
            metric=metric,
            offenders=offenders,
            verdict="HOLDS" if holds else "FAILS",
            witness=None if holds else offenders[0],
            extras=dict(extras or {}),
        )

    @classmethod
    def error(cls, identity: str, exc: BaseException, tol: float = math.nan) -> "AuditReport":
        return cls(
            identity=identity,
            samples=0,
            max_abs=math.nan,
            max_rel=math.nan,
            tol=tol,
            verdict="ERROR",
            message=f"{type(exc).__name__}: {exc}",
        )

    @classmethod
    def skipped(cls, identity: str, reason: str) -> "AuditReport":
        return cls(
            identity=identity,
            samples=0,
            max_abs=math.nan,
            max_rel=math.nan,
            tol=math.nan,
            verdict="SKIPPED",
            message=reason,
        )

    def with_tol(self, tol: float) -> "AuditReport":
        """Re-judge the same errors against a new tolerance."""
        if self.verdict in ("ERROR", "SKIPPED"):
            return self
        holds = self.max_error <= tol
        return AuditReport(
            identity=self.identity,
            samples=self.samples,
            max_abs=self.max_abs,
            max_rel=self.max_rel,
            tol=float(tol),
            metric=self.metric,
            offenders=self.offenders,
            verdict="HOLDS" if holds else "FAILS",
            witness=None if holds else (self.offenders[0] if self.offenders else None),
            message=self.message,
            extras=self.extras,
        )

    def scaled(self, factor: float) -> "AuditReport":
        """Re-judge the same errors against ``factor * tol``."""
        if self.verdict in ("ERROR", "SKIPPED"):
            return self
        return self.with_tol(self.tol * factor)

    def to_dict(self) -> dict:
        return jsonable(
            {
                "identity": self.identity,
                "verdict": self.verdict,
                "samples": self.samples,
                "metric": self.metric,
                "tol": self.tol,
                "max_abs": self.max_abs,
                "max_rel": self.max_rel,
                "witness": self.witness.to_dict() if self.witness else None,
                "worst": [o.to_dict() for o in self.offenders],
                "message": self.message,
                "extras": self.extras,
            }
        )

    def summary_row(self) -> str:
        err = "-" if self.verdict in ("ERROR", "SKIPPED") else f"{self.max_error:.3e}"
        return f"{self.identity:<28} {self.samples:>7} {err:>11} {self.verdict}"
