"""Centro-affine metric, Christoffel symbols and cubic form of boundary hypersurfaces.

The computations take a hypersurface chart ``Y(t)`` together with its
conormal field ``Z(t)`` (``<Z, Y> = -1`` and ``<Z, Y_a> = 0``). For the
boundary of ``K`` this is ``(X, X*)``; for the boundary of ``K*`` it is
``(X*, f_{K*}(X*))`` under the same parameters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .constants import AUDIT_TOLERANCES
from .diffgeo import BoundaryChart, crucial_field_jet, derivative_budget
from .errors import Degenerate, NoiseBudgetExceeded
from .jets import compose
from .pseudocone import PseudoCone, copolar
from .report import AuditReport

__all__ = [
    "CentroAffineFrame",
    "frame_from_jets",
    "christoffel_from_metric",
    "centroaffine_frame",
    "copolar_frame",
    "ca_metric",
    "christoffel",
    "cubic_form",
    "check_tensor_identities",
]

DET_TOL = 1e-12


@dataclass(frozen=True)
class CentroAffineFrame:
    """Centro-affine data of a hypersurface chart at one parameter value.

    ``A`` is the symmetrized cubic form from the first-order expression;
    ``A_direct`` is the third-derivative form when third derivatives were
    supplied, else ``None``.
    """

    params: np.ndarray
    Y: list
    Z: list
    G: np.ndarray
    G_alt: np.ndarray
    G_inv: np.ndarray
    dG: np.ndarray
    Gamma: np.ndarray
    A: np.ndarray
    A_raw: np.ndarray
    A_direct: np.ndarray | None

    @property
    def asymmetry(self) -> float:
        return float(max(np.max(np.abs(self.A_raw - self.A_raw.transpose(p))) for p in itertools.permutations(range(3))))

    @property
    def ricci_residual(self) -> float:
        """Largest entry of the covariant derivative of the metric."""
        cov = (
            self.dG
            - np.einsum("dca,db->abc", self.Gamma, self.G)
            - np.einsum("dcb,ad->abc", self.Gamma, self.G)
        )
        return float(np.max(np.abs(cov)))


def christoffel_from_metric(G, dG) -> np.ndarray:
    """Levi-Civita symbols ``Gamma[g, a, b]`` from a metric and ``dG[a, b, c] = d_c G_ab``."""
    G = np.asarray(G, dtype=float)
    dG = np.asarray(dG, dtype=float)
    if abs(np.linalg.det(G)) < DET_TOL:
        raise Degenerate("metric is degenerate")
    G_inv = np.linalg.inv(G)
    # first-kind symbols: [d, a, b] = (d_a G_db + d_b G_da - d_d G_ab) / 2
    first = 0.5 * (np.einsum("dba->dab", dG) + np.einsum("dab->dab", dG) - np.einsum("abd->dab", dG))
    Gamma = np.einsum("gd,dab->gab", G_inv, first)
    return 0.5 * (Gamma + Gamma.transpose(0, 2, 1))


def frame_from_jets(Y: list, Z: list, params=None) -> CentroAffineFrame:
    """Build the centro-affine frame from jets of ``Y`` (order >= 2) and ``Z`` (order >= 2)."""
    Y0, Y1, Y2 = Y[0], Y[1], Y[2]
    Z0, Z1, Z2 = Z[0], Z[1], Z[2]
    G = np.einsum("i,iab->ab", Z0, Y2)
    G = 0.5 * (G + G.T)
    G_alt = -np.einsum("ia,ib->ab", Z1, Y1)
    if abs(np.linalg.det(G)) < DET_TOL:
        raise Degenerate("centro-affine metric is degenerate")
    G_inv = np.linalg.inv(G)
    # d_c G_ab from G_ab = -<Z_a, Y_b>, symmetrized in (a, b)
    dG = -np.einsum("iac,ib->abc", Z2, Y1) - np.einsum("ia,ibc->abc", Z1, Y2)
    dG = 0.5 * (dG + dG.transpose(1, 0, 2))
    Gamma = christoffel_from_metric(G, dG)
    cov2 = Y2 - np.einsum("dab,id->iab", Gamma, Y1)
    A_raw = -np.einsum("ic,iab->abc", Z1, cov2)
    perms = list(itertools.permutations(range(3)))
    A = sum(A_raw.transpose(p) for p in perms) / len(perms)
    A_direct = None
    if len(Y) > 3:
        A_direct = (
            np.einsum("i,iabc->abc", Z0, Y[3])
            - np.einsum("dab,dc->abc", Gamma, G)
            - np.einsum("dca,db->abc", Gamma, G)
            - np.einsum("dcb,ad->abc", Gamma, G)
        )
    return CentroAffineFrame(
        params=np.atleast_1d(np.asarray(params if params is not None else [], dtype=float)),
        Y=Y,
        Z=Z,
        G=G,
        G_alt=G_alt,
        G_inv=G_inv,
        dG=dG,
        Gamma=Gamma,
        A=A,
        A_raw=A_raw,
        A_direct=A_direct,
    )


def _check_frame(frame: CentroAffineFrame, budget: float) -> CentroAffineFrame:
    scale = max(1.0, float(np.max(np.abs(frame.G))))
    if np.max(np.abs(frame.G - frame.G_alt)) > 10.0 * budget * scale:
        raise NoiseBudgetExceeded("the two metric expressions disagree beyond the noise budget")
    if frame.asymmetry > 10.0 * budget * max(1.0, float(np.max(np.abs(frame.A)))):
        raise NoiseBudgetExceeded(f"cubic form asymmetry {frame.asymmetry:.3e} exceeds the noise budget")
    return frame


def _order(K: PseudoCone) -> int:
    return 3 if K.has_analytic else 2


def centroaffine_frame(K: PseudoCone, t, chart: BoundaryChart | None = None) -> CentroAffineFrame:
    """Frame of the boundary of ``K``: ``Y = X``, ``Z = X* = f_K(X)``."""
    if K.smoothness < 3:
        raise Degenerate("centro-affine tensors need smoothness class 3")
    chart = chart if chart is not None else BoundaryChart(K)
    Y = chart.X_jet(t, _order(K))
    Z = chart.Xstar_jet(t, 2)
    return _check_frame(frame_from_jets(Y, Z, t), derivative_budget(K))


def copolar_frame(
    K: PseudoCone, t, chart: BoundaryChart | None = None, Kstar: PseudoCone | None = None
) -> CentroAffineFrame:
    """Frame of the boundary of ``K*`` in the shared parameters: ``Y = X* = f_K(X)``, ``Z = f_{K*}(X*)``.

    ``Z`` is computed from the radial field of ``K*`` itself.
    """
    if K.smoothness < 3:
        raise Degenerate("centro-affine tensors need smoothness class 3")
    chart = chart if chart is not None else BoundaryChart(K)
    Kstar = copolar(K) if Kstar is None else Kstar
    order = 3 if (K.has_analytic and Kstar.has_analytic) else 2
    Y = chart.Xstar_jet(t, order)
    Z = compose(crucial_field_jet(Kstar, Y[0], 2), Y, 2)
    budget = max(derivative_budget(K), derivative_budget(Kstar))
    return _check_frame(frame_from_jets(Y, Z, t), budget)


def ca_metric(K: PseudoCone, t, chart: BoundaryChart | None = None) -> np.ndarray:
    """Centro-affine metric ``G_ab = <X*, X_ab>``."""
    return centroaffine_frame(K, t, chart).G


def christoffel(K: PseudoCone, t, chart: BoundaryChart | None = None) -> np.ndarray:
    """Christoffel symbols ``Gamma[g, a, b]`` of the centro-affine metric."""
    return centroaffine_frame(K, t, chart).Gamma


def cubic_form(K: PseudoCone, t, chart: BoundaryChart | None = None) -> np.ndarray:
    """Cubic form ``A_abc = -<X*_c, X_ab - Gamma^d_ab X_d>`` (symmetrized)."""
    return centroaffine_frame(K, t, chart).A


def check_tensor_identities(
    K: PseudoCone,
    count: int = 20,
    chart: BoundaryChart | None = None,
    params=None,
    tols: dict | None = None,
    seed: int = 0,
) -> list[AuditReport]:
    """``G = G_bar`` and ``A = -A_bar`` at chart samples.

    ``params`` overrides the sample parameters (needed for non-gnomonic charts).
    """
    mode = "analytic" if K.has_analytic else "fd"
    tols = dict(tols or {})
    chart = chart if chart is not None else BoundaryChart(K)
    Kstar = copolar(K)
    if params is None:
        params = chart.sample(count, seed)
    params = [np.atleast_1d(np.asarray(t, dtype=float)) for t in params]
    points, G, Gbar, A, Abar = [], [], [], [], []
    for t in params:
        f = centroaffine_frame(K, t, chart)
        fb = copolar_frame(K, t, chart, Kstar)
        points.append(t)
        G.append(f.G.ravel())
        Gbar.append(fb.G.ravel())
        A.append(f.A.ravel())
        Abar.append(-fb.A.ravel())
    max_A = float(np.max(np.abs(A))) if A else 0.0
    metric = AuditReport.compare(
        "eq5_1", points, G, Gbar, tols.get("eq5_1", AUDIT_TOLERANCES[("eq5_1", mode)])
    )
    cubic = AuditReport.compare(
        "eq5_2", points, A, Abar, tols.get("eq5_2", AUDIT_TOLERANCES[("eq5_2", mode)]), extras={"max_abs_A": max_A}
    )
    return [metric, cubic]
