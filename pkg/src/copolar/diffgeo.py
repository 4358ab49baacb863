"""Boundary charts of pseudo-cones: normals, fundamental forms, Gauss curvature, crucial pairs.

A boundary chart composes a parameter map ``t -> y(t)`` into the interior of
the recession cone with the radial field, ``X(t) = rho_K(y(t)) y(t)``; since
``rho_K`` is homogeneous of degree -1 the direction need not be normalized.
All derivatives of ``X`` come from derivative tensors of ``rho_K`` (closed form
or finite differences) pushed through the chain rule.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .cone import GnomonicChart
from .constants import (
    ANALYTIC_BUDGET,
    AUDIT_TOLERANCES,
    BOUNDARY_TOL,
    FD_CURVATURE_BUDGET,
)
from .errors import Degenerate, NoiseBudgetExceeded, NotOnBoundary, RankDeficient
from .jets import compose, power_jet, reciprocal_jet, scale_jet
from .pseudocone import PseudoCone, copolar
from .report import AuditReport

__all__ = [
    "ExponentialChart",
    "ReparamChart",
    "BoundaryChart",
    "CrucialPair",
    "CurvatureSample",
    "generalized_cross",
    "outer_normal",
    "gauss_curvature",
    "curvature_sample",
    "gradient_map",
    "crucial_map",
    "crucial_map_hessian",
    "check_gauge_equality",
    "crucial_pair_reports",
    "equiaffine_support",
    "check_product_identity",
    "affine_sphere_statistic",
    "affine_sphere_reports",
    "correspondence_residuals",
    "derivative_budget",
]


def derivative_budget(K: PseudoCone) -> float:
    return ANALYTIC_BUDGET if K.has_analytic else FD_CURVATURE_BUDGET


# ---------------------------------------------------------------------------
# parameter maps


class ExponentialChart:
    """``y_i(t) = exp(<L_i, t>)`` into the positive orthant, optionally followed by a matrix.

    With the default exponent matrix ``L`` (rows ``e_1, ..., e_{n-1}`` and
    ``-(1, ..., 1)``) the image of ``y`` lies on ``prod y_i = 1``, which gives the
    symmetric charts ``(e^t, e^{-t})`` of the hyperbola and
    ``(e^{t1}, e^{t2}, e^{-t1-t2})`` of the Calabi surface.
    """

    def __init__(self, n: int, exponents=None, matrix=None):
        self.n = int(n)
        if exponents is None:
            exponents = np.vstack([np.eye(self.n - 1), -np.ones(self.n - 1)])
        self.exponents = np.asarray(exponents, dtype=float)
        self.dim = self.exponents.shape[1]
        self.matrix = None if matrix is None else np.asarray(matrix, dtype=float)

    def point_jet(self, t, order: int) -> list:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        L = self.exponents
        e = np.exp(L @ t)
        jet = []
        for j in range(order + 1):
            d = e.copy()
            for _ in range(j):
                d = d[..., None] * L.reshape((self.n,) + (1,) * (d.ndim - 1) + (self.dim,))
            jet.append(d)
        if self.matrix is not None:
            jet = [np.tensordot(self.matrix, d, axes=(1, 0)) for d in jet]
        return jet

    def point(self, t) -> np.ndarray:
        return self.point_jet(t, 0)[0]


class ReparamChart:
    """The parameter map ``t -> base(scale * t)``."""

    def __init__(self, base, scale: float):
        self.base = base
        self.scale = float(scale)
        self.dim = base.dim
        self.n = getattr(base, "n", None) or base.cone.n

    def point_jet(self, t, order: int) -> list:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        jet = self.base.point_jet(self.scale * t, order)
        return [d * self.scale**j for j, d in enumerate(jet)]

    def point(self, t) -> np.ndarray:
        return self.point_jet(t, 0)[0]


# ---------------------------------------------------------------------------
# linear algebra helpers


def generalized_cross(vectors) -> np.ndarray:
    """Vector ``c`` with ``<c, w> = det(w, v_1, ..., v_{n-1})`` for the rows ``v_i``."""
    V = np.atleast_2d(np.asarray(vectors, dtype=float))
    n = V.shape[1]
    out = np.empty(n)
    for i in range(n):
        M = np.vstack([np.eye(n)[i], V])
        out[i] = np.linalg.det(M)
    return out


def _cross_derivatives(tangents: np.ndarray, second: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cross product of the tangent columns and its chart derivatives (multilinearity)."""
    k = tangents.shape[1]
    rows = tangents.T
    raw = generalized_cross(rows)
    d = np.empty((tangents.shape[0], k))
    for beta in range(k):
        total = np.zeros(tangents.shape[0])
        for alpha in range(k):
            mod = rows.copy()
            mod[alpha] = second[:, alpha, beta]
            total += generalized_cross(mod)
        d[:, beta] = total
    return raw, d


# ---------------------------------------------------------------------------
# boundary charts


class BoundaryChart:
    """Parametrization ``X(t) = rho_K(y(t)) y(t)`` of the boundary of ``K`` inside the recession cone."""

    def __init__(self, K: PseudoCone, param=None, margin: float | None = None):
        if K.smoothness < 2:
            raise Degenerate(f"{K.name} has smoothness class {K.smoothness}; charts need at least 2")
        self.K = K
        self.param = param if param is not None else K.footprint_chart(margin)
        self.dim = self.param.dim
        self.n = K.n

    def sample(self, count: int, seed: int = 0) -> np.ndarray:
        if not isinstance(self.param, GnomonicChart):
            raise TypeError("sampling needs a gnomonic chart")
        return self.param.sample(count, seed)

    def params_of(self, x) -> np.ndarray:
        """Gnomonic parameters of the boundary point in the direction of ``x``."""
        if not isinstance(self.param, GnomonicChart):
            raise TypeError("parameter lookup needs a gnomonic chart")
        return self.param.to_params(np.asarray(x, dtype=float))

    def point(self, t) -> np.ndarray:
        y = self.param.point_jet(t, 0)[0]
        return float(self.K.rho(y)) * y

    def X_jet(self, t, order: int) -> list:
        y = self.param.point_jet(t, order)
        rho = self.K.rho_jet(y[0], order)
        rho_t = compose(rho, y, order)
        return scale_jet(rho_t, y, order)

    def Xstar_jet(self, t, order: int) -> list:
        """Jet of ``X* = f_K(X)`` along the chart, with ``f_K = -grad(F**2/2)``."""
        X = self.X_jet(t, order)
        return compose(crucial_field_jet(self.K, X[0], order), X, order)

    def frame(self, t, order: int = 2) -> dict:
        """Position, tangents, second derivatives, unit normal and its derivatives at ``t``."""
        X = self.X_jet(t, max(order, 2))
        tangents = X[1]
        sv = np.linalg.svd(tangents, compute_uv=False)
        if sv[-1] <= 1e-10 * sv[0]:
            raise RankDeficient(f"tangent vectors nearly dependent at t={np.atleast_1d(t).tolist()}")
        raw, draw = _cross_derivatives(tangents, X[2])
        norm = np.linalg.norm(raw)
        N = raw / norm
        sign = -1.0 if N @ X[0] > 0 else 1.0
        N = sign * N
        proj = np.eye(self.n) - np.outer(N, N)
        dN = sign * proj @ draw / norm
        return {"X": X, "N": N, "dN": dN}


def crucial_field_jet(K: PseudoCone, x, order: int) -> list:
    """Ambient jet of ``f_K = -grad(F**2/2)`` at ``x`` (needs radial derivatives of order ``order+1``)."""
    F = reciprocal_jet(K.rho_jet(np.asarray(x, dtype=float), order + 1))
    half_sq = [0.5 * d for d in power_jet(F, 2.0)]
    return [-d for d in half_sq[1:]]


# ---------------------------------------------------------------------------
# normals and curvature


@dataclass(frozen=True)
class CurvatureSample:
    params: np.ndarray
    x: np.ndarray
    normal: np.ndarray
    g: np.ndarray
    b: np.ndarray
    kappa: float
    kappa_det: float
    rho_aff: float


def _chart(K: PseudoCone, chart: BoundaryChart | None) -> BoundaryChart:
    return chart if chart is not None else BoundaryChart(K)


def outer_normal(K: PseudoCone, t, chart: BoundaryChart | None = None) -> np.ndarray:
    """Outer unit normal at the chart point, oriented so that ``<N, X> < 0``."""
    return _chart(K, chart).frame(t)["N"]


def curvature_sample(K: PseudoCone, t, chart: BoundaryChart | None = None, budget: float | None = None) -> CurvatureSample:
    """Fundamental forms, Gauss curvature (two ways) and equiaffine support at a chart point.

    ``kappa`` is ``|det b| / det g``; ``kappa_det`` is the determinant-ratio form
    ``|det(N, N_1, ...)| / |det(N, X_1, ...)|``. They must agree to ten times
    the derivative-noise budget.
    """
    chart = _chart(K, chart)
    fr = chart.frame(t)
    X, N, dN = fr["X"], fr["N"], fr["dN"]
    tangents = X[1]
    g = tangents.T @ tangents
    b = np.einsum("i,iab->ab", N, X[2])
    det_g = float(np.linalg.det(g))
    if not det_g > 0:
        raise RankDeficient("first fundamental form is not positive definite")
    kappa = abs(float(np.linalg.det(b))) / det_g
    num = np.linalg.det(np.column_stack([N, dN]))
    den = np.linalg.det(np.column_stack([N, tangents]))
    kappa_det = abs(float(num / den))
    budget = derivative_budget(chart.K) if budget is None else budget
    if abs(kappa - kappa_det) > 10.0 * budget * max(kappa, 1e-300):
        raise NoiseBudgetExceeded(f"curvature forms disagree: {kappa!r} vs {kappa_det!r}")
    if not kappa > 0:
        raise Degenerate(f"nonpositive Gauss curvature {kappa!r}; equiaffine support undefined")
    n = chart.n
    rho_aff = float(X[0] @ N) / kappa ** (1.0 / (n + 1))
    return CurvatureSample(np.atleast_1d(np.asarray(t, dtype=float)), X[0], N, g, b, kappa, kappa_det, rho_aff)


def gauss_curvature(K: PseudoCone, t, chart: BoundaryChart | None = None) -> float:
    return curvature_sample(K, t, chart).kappa


def equiaffine_support(K: PseudoCone, t, chart: BoundaryChart | None = None) -> float:
    """``<x, nu> / kappa**(1/(n+1))``; negative on pseudo-cone boundaries."""
    return curvature_sample(K, t, chart).rho_aff


# ---------------------------------------------------------------------------
# crucial pairs


@dataclass(frozen=True)
class CrucialPair:
    """Boundary point ``x`` of ``K`` and the normal ``x_star`` scaled so that ``<x, x_star> = -1``."""

    x: np.ndarray
    x_star: np.ndarray

    @property
    def pairing(self) -> float:
        return float(self.x @ self.x_star)


def gradient_map(K: PseudoCone, x) -> np.ndarray:
    """``-grad(F**2/2)(x)`` for ``x`` in the interior of the recession cone (degree-1 homogeneous)."""
    return -K.half_gauge_sq_grad(np.asarray(x, dtype=float))


def _require_boundary(K: PseudoCone, x):
    F = K.gauge(x)
    if abs(F - 1.0) > BOUNDARY_TOL:
        raise NotOnBoundary(f"gauge {F!r} at {np.asarray(x).tolist()} is not 1")


def crucial_map(K: PseudoCone, x) -> CrucialPair:
    """The crucial pair ``(x, f_K(x))`` for a boundary point ``x``."""
    x = np.asarray(x, dtype=float)
    _require_boundary(K, x)
    return CrucialPair(x, gradient_map(K, x))


def crucial_map_hessian(K: PseudoCone, x) -> np.ndarray:
    """``-G(x) x`` with ``G`` the Hessian of ``F**2/2``."""
    x = np.asarray(x, dtype=float)
    _require_boundary(K, x)
    return -K.half_gauge_sq_hess(x) @ x


def _mode(K: PseudoCone) -> str:
    return "analytic" if K.has_analytic else "fd"


def _gauge_points(K: PseudoCone, count: int, margin: float | None, seed: int = 0) -> np.ndarray:
    dirs = K.interior_directions(count, margin, seed)
    scales = 0.5 + 2.5 * ((np.arange(count) * (math.sqrt(5.0) - 1.0) / 2.0) % 1.0)
    return scales[:, None] * dirs


def check_gauge_equality(
    K: PseudoCone, count: int = 100, margin: float | None = None, tol: float | None = None, seed: int = 0
) -> AuditReport:
    """``F(x) = H(f_K(x))`` at interior points at various distances from the origin."""
    tol = AUDIT_TOLERANCES[("eq3_2", _mode(K))] if tol is None else tol
    Kstar = copolar(K)
    points = _gauge_points(K, count, margin, seed)
    lhs = [K.gauge(p) for p in points]
    rhs = [Kstar.gauge(gradient_map(K, p)) for p in points]
    return AuditReport.compare("eq3_2", points, lhs, rhs, tol)


def crucial_pair_reports(
    K: PseudoCone, count: int = 50, margin: float | None = None, tols: dict | None = None, seed: int = 0
) -> list[AuditReport]:
    """Pairing, inverse-map and Hessian-form checks of the crucial map on boundary points."""
    mode = _mode(K)
    tols = dict(tols or {})
    Kstar = copolar(K)
    points = K.boundary_points(count, margin, seed)
    stars = np.array([crucial_map(K, x).x_star for x in points])
    pairing = AuditReport.compare(
        "eq3_2.crucial_pair",
        points,
        np.einsum("ij,ij->i", points, stars),
        -np.ones(len(points)),
        tols.get("crucial_pair", AUDIT_TOLERANCES[("crucial_pair", mode)]),
    )
    back = np.array([gradient_map(Kstar, s) for s in stars])
    inverse = AuditReport.compare(
        "eq3_2.crucial_inverse",
        points,
        back,
        points,
        tols.get("crucial_inverse", AUDIT_TOLERANCES[("crucial_inverse", mode)]),
    )
    hess = np.array([crucial_map_hessian(K, x) for x in points])
    hessian = AuditReport.compare(
        "eq3_2.crucial_hessian",
        points,
        hess,
        stars,
        tols.get("crucial_hessian", AUDIT_TOLERANCES[("crucial_hessian", mode)]),
    )
    return [pairing, inverse, hessian]


# ---------------------------------------------------------------------------
# equiaffine support and the product identity


def copolar_sample(K: PseudoCone, x_star, Kstar: PseudoCone | None = None) -> CurvatureSample:
    """Curvature sample of ``K*`` at ``x_star``, computed from the radial field of ``K*`` on its own chart."""
    Kstar = copolar(K) if Kstar is None else Kstar
    chart = BoundaryChart(Kstar)
    return curvature_sample(Kstar, chart.params_of(x_star), chart)


def check_product_identity(
    K: PseudoCone,
    count: int = 30,
    margin: float | None = None,
    tol: float | None = None,
    seed: int = 0,
) -> tuple[AuditReport, list[dict]]:
    """Product of the equiaffine supports at crucial pairs against 1.

    Returns the report and one row per sample (chart point, x, kappa, rho_aff,
    pair product) for tabular output.
    """
    tol = AUDIT_TOLERANCES[("eq4_1", _mode(K))] if tol is None else tol
    Kstar = copolar(K)
    chart = BoundaryChart(K, margin=margin)
    rows, points, products = [], [], []
    for t in chart.sample(count, seed):
        s = curvature_sample(K, t, chart)
        pair = crucial_map(K, s.x)
        s_star = copolar_sample(K, pair.x_star, Kstar)
        product = s.rho_aff * s_star.rho_aff
        points.append(s.x)
        products.append(product)
        rows.append({"params": s.params, "x": s.x, "kappa": s.kappa, "rho_aff": s.rho_aff, "pair_product": product})
    report = AuditReport.compare("eq4_1", points, products, np.ones(len(products)), tol)
    return report, rows


def _equiaffine_values(L: PseudoCone, count: int, margin: float | None, seed: int) -> tuple[np.ndarray, np.ndarray]:
    chart = BoundaryChart(L, margin=margin)
    samples = [curvature_sample(L, t, chart) for t in chart.sample(count, seed)]
    return np.array([s.x for s in samples]), np.array([s.rho_aff for s in samples])


def affine_sphere_statistic(K: PseudoCone, count: int = 30, margin: float | None = None, seed: int = 0) -> dict:
    """Mean and maximal relative deviation of the equiaffine support over chart samples, for ``K`` and ``K*``."""
    out = {}
    for label, L in (("K", K), ("K*", copolar(K))):
        _, vals = _equiaffine_values(L, count, margin, seed)
        mean = float(vals.mean())
        out[label] = {"mean": mean, "deviation": float(np.max(np.abs(vals - mean)) / abs(mean)), "samples": len(vals)}
    return out


def affine_sphere_reports(
    K: PseudoCone, count: int = 30, margin: float | None = None, tol: float | None = None, seed: int = 0
) -> list[AuditReport]:
    """Constancy of the equiaffine support on ``K`` and on ``K*``, as relative deviation from the sample mean."""
    tol = AUDIT_TOLERANCES[("affine_sphere", _mode(K))] if tol is None else tol
    reports = []
    for ident, L in (("affine_sphere", K), ("affine_sphere.copolar", copolar(K))):
        points, vals = _equiaffine_values(L, count, margin, seed)
        mean = float(vals.mean())
        reports.append(
            AuditReport.compare(ident, points, vals, np.full(len(vals), mean), tol, metric="rel", extras={"mean": mean})
        )
    return reports


def correspondence_residuals(K: PseudoCone, t, chart: BoundaryChart | None = None) -> dict:
    """Residuals of the chart correspondences between ``K`` and ``K*`` under shared parameters.

    With ``X* = f_K(X)`` and ``N*`` the normal of the ``X*`` chart (from its own
    tangents): ``N* = X/|X|``, ``X* = N/(-<X, N>)``, ``|X| = 1/(-<X*, N*>)``, and
    ``det(N*, N*_a) = |X|^{-n} <X, N> det(N, X_a)``.
    """
    chart = _chart(K, chart)
    n = chart.n
    fr = chart.frame(t)
    X, N = fr["X"], fr["N"]
    Xs = chart.Xstar_jet(t, 2)
    raw, draw = _cross_derivatives(Xs[1], Xs[2])
    norm = np.linalg.norm(raw)
    Ns = raw / norm
    sign = -1.0 if Ns @ Xs[0] > 0 else 1.0
    Ns = sign * Ns
    dNs = sign * (np.eye(n) - np.outer(Ns, Ns)) @ draw / norm
    r = float(np.linalg.norm(X[0]))
    lhs_det = float(np.linalg.det(np.column_stack([Ns, dNs])))
    rhs_det = r**-n * float(X[0] @ N) * float(np.linalg.det(np.column_stack([N, X[1]])))
    return {
        "normal_star": float(np.max(np.abs(Ns - X[0] / r))),
        "x_star": float(np.max(np.abs(Xs[0] - N / -(X[0] @ N)))),
        "radius": abs(r - 1.0 / -(Xs[0] @ Ns)),
        "determinant": abs(lhs_det - rhs_det),
    }


def symmetric_orbit(x) -> list[np.ndarray]:
    """All coordinate permutations of ``x`` (used for symmetric test surfaces)."""
    return [np.asarray(p, dtype=float) for p in sorted(set(itertools.permutations(np.asarray(x, dtype=float).tolist())))]
