"""Support/radial duality, Legendre-type transforms of squared support functions, and their audits."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from .cone import Cone
from .constants import AUDIT_TOLERANCES, EQUIVARIANCE_MATRICES, LEGENDRE_DOUBLINGS, LEGENDRE_RADIUS, SHELL_RADII
from .errors import OutsideCone
from .numkit import CapDomain, maximize_on_cap
from .pseudocone import PseudoCone, copolar, linear_image
from .report import AuditReport

__all__ = [
    "htilde",
    "LegendreResult",
    "legendre",
    "ratio_support",
    "scale_saddle",
    "LegendreAudit",
    "audit_legendre",
    "legendre_grid",
    "audit_radial_support",
    "audit_involution",
    "audit_equivariance",
]

RADIAL_GRID = 65
GOLDEN_STEPS = 60
INVGOLD = (math.sqrt(5.0) - 1.0) / 2.0


def htilde(K: PseudoCone, u, method: str = "auto"):
    """``-h_K(u)**2 / 2`` on the dual cone, ``+inf`` off it. Accepts row-stacked vectors."""
    h = np.asarray(K.support(u, method), dtype=float)
    with np.errstate(invalid="ignore"):
        out = np.where(np.isfinite(h), -0.5 * h * h, np.inf) + 0.0
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class LegendreResult:
    """Numerical supremum of ``<x, u> - f(u)``; ``escape_ray`` is set when it diverged."""

    value: float
    maximizer: np.ndarray
    diverged: bool = False
    escape_ray: np.ndarray | None = None
    radius: float = LEGENDRE_RADIUS

    def __float__(self) -> float:
        return float(self.value)


def _covering_caps(n: int) -> list[CapDomain]:
    angle = min(math.acos(1.0 / math.sqrt(n)) + 0.05, math.pi / 2 - 1e-9)
    caps = []
    for i in range(n):
        for s in (1.0, -1.0):
            e = np.zeros(n)
            e[i] = s
            caps.append(CapDomain(e, angle))
    return caps


def _objective(f, x, pts):
    with np.errstate(invalid="ignore", over="ignore"):
        vals = pts @ x - np.asarray(f(pts), dtype=float)
    return np.where(np.isnan(vals), -np.inf, vals)


def _radial_sup(f, x, dirs, R, refine=True):
    """Best radius and value of ``r <x, v> - f(r v)`` over ``r in [0, R]`` for each row ``v``."""
    r = np.linspace(0.0, R, RADIAL_GRID)
    pts = r[None, :, None] * dirs[:, None, :]
    vals = _objective(f, x, pts)
    j = np.argmax(vals, axis=1)
    rows = np.arange(len(dirs))
    best_r, best_v = r[j], vals[rows, j]
    if not refine:
        return best_r, best_v
    lo = r[np.maximum(j - 1, 0)]
    hi = r[np.minimum(j + 1, RADIAL_GRID - 1)]
    # vectorized golden-section search inside the bracketing cells
    a, b = lo.copy(), hi.copy()
    c = b - INVGOLD * (b - a)
    d = a + INVGOLD * (b - a)
    fc = _objective(f, x, c[:, None] * dirs)
    fd = _objective(f, x, d[:, None] * dirs)
    for _ in range(GOLDEN_STEPS):
        left = fc >= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - INVGOLD * (b - a)
        new_d = a + INVGOLD * (b - a)
        nc = np.where(left, new_c, d)
        nd = np.where(left, c, new_d)
        probe = np.where(left, new_c, new_d)
        fp = _objective(f, x, probe[:, None] * dirs)
        fc, fd = np.where(left, fp, fd), np.where(left, fc, fp)
        c, d = nc, nd
    for cand_r, cand_v in ((c, fc), (d, fd)):
        better = cand_v > best_v
        best_r = np.where(better, cand_r, best_r)
        best_v = np.where(better, cand_v, best_v)
    return best_r, best_v


def _scan(f, x, caps, R, refine):
    best = (None, -np.inf, 0.0)
    for cap in caps:
        field = lambda D: _radial_sup(f, x, D, R, refine)[1]  # noqa: E731
        v, val = maximize_on_cap(field, cap, vectorized=True, restarts=3 if refine else 0)
        if val > best[1]:
            r = float(_radial_sup(f, x, v[None, :], R, refine)[0][0])
            best = (v, val, r)
    return best


def _escape_ray(f, x, caps, R):
    best, best_val = None, -np.inf
    for cap in caps:
        v, val = maximize_on_cap(lambda D: _objective(f, x, R * D), cap, vectorized=True)
        if val > best_val:
            best, best_val = v, val
    return best


def legendre(
    f: Callable,
    x,
    cap: CapDomain | None = None,
    radius: float = LEGENDRE_RADIUS,
    doublings: int = LEGENDRE_DOUBLINGS,
) -> LegendreResult:
    """Numerical Legendre-Fenchel transform ``sup_u <x, u> - f(u)``.

    The search runs over directions in ``cap`` (the whole sphere when ``None``)
    and radii in ``[0, radius]``. ``f`` must accept row-stacked points and may
    return ``+inf``. When the maximizing radius sits on the outer boundary the
    range is doubled; if the value still grows at the boundary after
    ``doublings`` doublings the result is ``+inf`` and the escape ray is the
    direction maximizing the objective on the outermost sphere.
    """
    x = np.asarray(x, dtype=float)
    caps = [cap] if cap is not None else _covering_caps(x.size)
    R = float(radius)
    history = []
    for level in range(doublings + 1):
        v, val, r = _scan(f, x, caps, R, refine=False)
        history.append(val)
        at_edge = r >= R * (1.0 - 1e-12)
        if not at_edge:
            break
        if level < doublings:
            R *= 2.0
    else:
        # divergence needs at least one doubling with growth; a bounded search otherwise stays finite
        if len(history) > 1 and all(b > a for a, b in zip(history, history[1:])):
            ray = _escape_ray(f, x, caps, R)
            return LegendreResult(math.inf, R * ray, diverged=True, escape_ray=ray, radius=R)
    v, val, r = _scan(f, x, caps, R, refine=True)
    return LegendreResult(float(val), v * r, radius=R)


def ratio_support(K: PseudoCone, x) -> float:
    """``sup over u in the dual cone of <x, u> / (-h_K(u))``; ``+inf`` for ``x`` outside the recession cone."""
    x = np.asarray(x, dtype=float)
    if not K.cone.contains(x, tol=1e-14):
        return math.inf
    dual = K.cone.dual

    def field(U):
        h = np.asarray(K.support(U), dtype=float)
        num = U @ x
        ok = np.isfinite(h) & (h < 0) & dual.contains(U, tol=1e-14)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(ok, num / -h, -np.inf)

    _, value = maximize_on_cap(
        field, dual.bounding_cap(), restarts=1, candidates=dual.generator_directions, vectorized=True
    )
    return float(value)


def scale_saddle(K: PseudoCone, x) -> float:
    """Minimum over scales ``a > 0`` of ``a * ratio_support(K, x) + a**2 / 2``."""
    x = np.asarray(x, dtype=float)
    if not K.cone.interior_contains(x):
        raise OutsideCone(f"{x.tolist()} is not in the interior of the recession cone")
    lam = ratio_support(K, x)
    res = optimize.minimize_scalar(
        lambda a: a * lam + 0.5 * a * a,
        bounds=(0.0, 2.0 * abs(lam) + 1.0),
        method="bounded",
        options={"xatol": 1e-12},
    )
    a = float(res.x)
    return a * lam + 0.5 * a * a


@dataclass
class LegendreAudit:
    """Both readings of the Legendre-type relation between ``htilde_K`` and ``htilde_{K*}``."""

    sup: AuditReport
    saddle: AuditReport
    reports: list = field(default_factory=list)

    def __post_init__(self):
        self.reports = [self.sup, self.saddle]


def legendre_grid(
    K: PseudoCone, directions: int = 25, shells=SHELL_RADII, margin: float | None = None, seed: int = 0
) -> np.ndarray:
    """Interior points on the radial shells ``|x| = s`` over low-discrepancy footprint directions."""
    dirs = K.interior_directions(directions, margin, seed)
    return np.vstack([s * dirs for s in shells])


def audit_legendre(
    K: PseudoCone,
    directions: int = 25,
    shells=SHELL_RADII,
    margin: float | None = None,
    tol: float | None = None,
    seed: int = 0,
) -> LegendreAudit:
    """Compare ``htilde_{K*}(x)`` with the sup-form transform and with the scale-saddle form."""
    if tol is None:
        tol = AUDIT_TOLERANCES[("eq2_1n", "fd" if K.derivative_mode == "fd" else "analytic")]
    points = legendre_grid(K, directions, shells, margin, seed)
    Kstar = copolar(K)
    reference = np.array([htilde(Kstar, p) for p in points])
    cap = K.cone.dual.bounding_cap()

    def field(U):
        return htilde(K, U)

    sup_vals, escapes = [], []
    for p in points:
        res = legendre(field, p, cap=cap)
        sup_vals.append(res.value)
        escapes.append(None if res.escape_ray is None else res.escape_ray.tolist())
    diverged = sum(e is not None for e in escapes)
    sup = AuditReport.compare(
        "eq2_1n.sup",
        points,
        sup_vals,
        reference,
        tol,
        extras={"diverged": diverged, "escape_rays": escapes},
    )
    saddle_vals = [scale_saddle(K, p) for p in points]
    saddle = AuditReport.compare("eq2_1n.saddle", points, saddle_vals, reference, tol)
    return LegendreAudit(sup, saddle)


# ---------------------------------------------------------------------------
# copolarity audits


def audit_radial_support(
    K: PseudoCone, count: int = 200, margin: float | None = None, tol: float | None = None, seed: int = 0
) -> AuditReport:
    """``rho_K(x) * (-h_{K*}(x)) = 1``.

    ``h_{K*}`` is found by maximizing over the radial field of ``K*`` (which is
    ``-1/h_K``), never from a closed-form copolar support.
    """
    if tol is None:
        tol = AUDIT_TOLERANCES[("eq1_1", K.derivative_mode)]
    dirs = K.interior_directions(count, margin, seed)
    Kstar = copolar(K)
    lhs = K.rho(dirs) * -np.array([Kstar.support_numeric(v) for v in dirs])
    return AuditReport.compare("eq1_1", dirs, lhs, np.ones(len(dirs)), tol)


def audit_involution(
    K: PseudoCone,
    count: int = 200,
    margin: float | None = None,
    tol: float | None = None,
    member_points: int = 1000,
    seed: int = 0,
) -> list[AuditReport]:
    """``K** = K``: radial fields on interior directions, plus membership agreement for set-level families."""
    if tol is None:
        tol = AUDIT_TOLERANCES[("involution", K.derivative_mode)]
    dirs = K.interior_directions(count, margin, seed)
    Kss = copolar(copolar(K), "numeric")
    rho_ss = Kss.rho(dirs)
    rho = K.rho(dirs)
    reports = [AuditReport.compare("involution", dirs, rho_ss, rho, tol, metric="rel")]
    if K.smoothness == 0:
        reports.append(_membership_agreement(K, dirs, rho, rho_ss, member_points, tol))
    return reports


MEMBER_SCALES = (0.5, 0.9, 0.999, 1.001, 1.1, 2.0)


def _membership_agreement(K, dirs, rho, rho_ss, count, tol) -> AuditReport:
    """Membership in ``K`` (its own oracle) against membership in ``K**`` (via its radial field).

    Points are ``s * rho_K(v) * v`` for the audited directions and scales ``s``
    around 1; points within relative distance ``tol`` of the boundary are skipped.
    """
    points, lhs, rhs = [], [], []
    for s in MEMBER_SCALES:
        if abs(s - 1.0) <= tol:
            continue
        for v, r, r_ss in zip(dirs, rho, rho_ss):
            p = s * r * v
            points.append(p)
            lhs.append(float(s * r >= r_ss))
            rhs.append(float(K.member(p)))
    return AuditReport.compare("involution.membership", points[:count], lhs[:count], rhs[:count], 0.0)


def audit_equivariance(
    K: PseudoCone,
    matrices=EQUIVARIANCE_MATRICES,
    count: int = 100,
    margin: float | None = None,
    tol: float | None = None,
    seed: int = 0,
) -> AuditReport:
    """``(A K)* = A^{-T} K*`` on interior directions of the image dual cone, for each matrix."""
    if tol is None:
        tol = AUDIT_TOLERANCES[("equivariance", K.derivative_mode)]
    points, lhs, rhs = [], [], []
    Kstar = copolar(K)
    for A in matrices:
        A = np.asarray(A, dtype=float)
        AK = linear_image(K, A)
        left = copolar(AK, "numeric")
        right = linear_image(Kstar, np.linalg.inv(A).T)
        chart_cone: Cone = AK.cone.dual
        chart = chart_cone.footprint_chart(margin if margin is not None else K.margin)
        dirs = chart.direction(chart.sample(count, seed))
        lhs.extend(left.rho(dirs))
        rhs.extend(right.rho(dirs))
        points.extend(dirs)
    return AuditReport.compare("equivariance", points, lhs, rhs, tol, metric="rel")
