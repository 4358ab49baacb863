"""C-pseudo-cones represented by their radial field over the recession cone.

A pseudo-cone ``K`` with recession cone ``C`` is stored as the ambient radial
function ``rho(v) = min{t > 0 : t v in K}`` on ``C`` (positively homogeneous of
degree -1, ``inf`` where the ray misses ``K``). Support, gauge and membership
are derived from it; closed forms are attached where a family has them.
Copolarity is the pointwise reciprocal ``rho_{K*}(w) = -1 / h_K(w)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .cone import Cone, GnomonicChart
from .constants import (
    BISECTION_LOWER,
    BISECTION_RTOL,
    CAP_TOL,
    FD_RICHARDSON_LEVELS,
    INTERIOR_MARGIN,
    SUPPORT_DEGENERACY_TOL,
)
from .errors import DegenerateSupport, OutsideCone, Singular
from .jets import compose, exp_jet, reciprocal_jet
from .numkit import StepPolicy, derivative_tensor, maximize_on_cap

__all__ = [
    "PseudoCone",
    "FamilySpec",
    "FAMILIES",
    "hyperbola",
    "calabi",
    "perturbed_hyperbola",
    "truncated_cone",
    "shifted_cone",
    "from_membership",
    "copolar",
    "linear_image",
    "make_family",
]


@dataclass(frozen=True, eq=False)
class PseudoCone:
    """A C-pseudo-cone given by its radial field.

    ``rho_fn`` maps an array of shape ``(..., n)`` to radial values of shape
    ``(...)``. Optional closed forms: ``support_fn`` (on the dual cone),
    ``rho_jet_fn`` (ambient derivative tensors of ``rho``), ``member_fn`` and
    ``copolar_fn``.
    """

    cone: Cone
    rho_fn: Callable[[np.ndarray], np.ndarray]
    name: str
    smoothness: int
    params: Mapping = field(default_factory=dict)
    support_fn: Callable | None = None
    rho_jet_fn: Callable | None = None
    member_fn: Callable | None = None
    copolar_fn: Callable[[], "PseudoCone"] | None = None
    margin: float = INTERIOR_MARGIN

    def __post_init__(self):
        if self.smoothness not in (0, 2, 3):
            raise ValueError("smoothness must be 0, 2 or 3")

    @property
    def n(self) -> int:
        return self.cone.n

    @property
    def has_analytic(self) -> bool:
        return self.rho_jet_fn is not None

    @property
    def derivative_mode(self) -> str:
        if self.smoothness == 0:
            return "set"
        return "analytic" if self.has_analytic else "fd"

    def __repr__(self) -> str:
        return f"PseudoCone({self.name}, n={self.n}, params={dict(self.params)})"

    # radial / gauge

    def rho(self, v) -> np.ndarray:
        """Raw ambient radial field (no domain checks)."""
        v = np.asarray(v, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            return self.rho_fn(v)

    def radial(self, v) -> float:
        """Distance from the origin to the boundary along the unit direction of ``v``."""
        v = np.asarray(v, dtype=float)
        if not self.cone.interior_contains(v):
            raise OutsideCone(f"{v.tolist()} is not an interior direction of the recession cone")
        return float(self.rho(v / np.linalg.norm(v)))

    def gauge(self, x) -> float:
        """``max{lambda > 0 : x in lambda K}`` for ``x`` in the interior of the recession cone."""
        x = np.asarray(x, dtype=float)
        if not self.cone.interior_contains(x):
            raise OutsideCone(f"{x.tolist()} is not in the interior of the recession cone")
        return float(1.0 / self.rho(x))

    def member(self, x, tol: float = 1e-12) -> bool:
        x = np.asarray(x, dtype=float)
        if self.member_fn is not None:
            return bool(self.member_fn(x, tol))
        if not self.cone.interior_contains(x):
            return False
        return bool(1.0 / self.rho(x) >= 1.0 - tol)

    # support

    def support(self, u, method: str = "auto"):
        """Support function ``sup{<u, x> : x in K}``; ``inf`` off the dual cone.

        ``method`` is ``"auto"`` (closed form when attached), ``"closed"`` or
        ``"numeric"`` (maximization of ``rho(v) <u, v>`` over the footprint).
        Accepts a single vector or an array of row vectors.
        """
        u = np.asarray(u, dtype=float)
        if u.ndim > 1:
            flat = u.reshape(-1, self.n)
            if method != "numeric" and self.support_fn is not None:
                out = np.full(len(flat), np.inf)
                inside = self.cone.dual.contains(flat, tol=1e-14)
                if np.any(inside):
                    out[inside] = self.support_fn(flat[inside])
                return out.reshape(u.shape[:-1])
            return np.array([self.support(x, method) for x in flat]).reshape(u.shape[:-1])
        if not np.linalg.norm(u) > 0:
            return 0.0
        if not self.cone.dual.contains(u, tol=1e-14):
            return math.inf
        if method == "closed" and self.support_fn is None:
            raise ValueError(f"{self.name} has no closed-form support function")
        if method != "numeric" and self.support_fn is not None:
            return float(self.support_fn(u))
        return self.support_numeric(u)

    def support_numeric(self, u, restarts: int = 1, tol: float = CAP_TOL) -> float:
        # a linear functional has no spurious local maxima on the boundary of a convex set,
        # so one local refinement from the best lattice point suffices
        u = np.asarray(u, dtype=float)
        _, value = maximize_on_cap(
            self._support_field(u),
            self.cone.bounding_cap(),
            restarts=restarts,
            tol=tol,
            candidates=self.cone.generator_directions,
            vectorized=True,
        )
        return float(value)

    def support_maximizer(self, u) -> np.ndarray:
        """Boundary point of ``K`` attaining the support value in direction ``u`` (numerically)."""
        u = np.asarray(u, dtype=float)
        v, _ = maximize_on_cap(
            self._support_field(u),
            self.cone.bounding_cap(),
            restarts=1,
            candidates=self.cone.generator_directions,
            vectorized=True,
        )
        return float(self.rho(v)) * v

    def _support_field(self, u):
        cone = self.cone

        def field(V):
            r = self.rho(V)
            ok = np.isfinite(r) & cone.contains(V, tol=1e-14)
            with np.errstate(invalid="ignore"):
                return np.where(ok, r * (V @ u), -np.inf)

        return field

    # derivatives

    def fd_policy(self, x, order: int) -> StepPolicy:
        """Step policy scaled to the distance from ``x`` to the boundary of the recession cone,
        where the radial field blows up."""
        x = np.asarray(x, dtype=float)
        dist = float(np.linalg.norm(x) * math.sin(max(float(self.cone.slack(x)), 0.0)))
        return StepPolicy(richardson_levels=FD_RICHARDSON_LEVELS, order=order, length_scale=dist if dist > 0 else None)

    def rho_jet(self, v, order: int, policy: StepPolicy | None = None) -> list:
        """Ambient derivative tensors ``[rho, D rho, ..., D^order rho]`` at ``v``.

        Closed form when the family provides it, otherwise finite differences
        (up to order 3).
        """
        v = np.asarray(v, dtype=float)
        if self.rho_jet_fn is not None:
            return self.rho_jet_fn(v, order)
        if order > 3:
            raise ValueError("finite-difference radial jets stop at order 3")
        jet = [float(self.rho(v))]
        for k in range(1, order + 1):
            pol = policy or self.fd_policy(v, k)
            jet.append(derivative_tensor(self.rho, v, k, pol, vectorized=True))
        return jet

    def gauge_jet(self, v, order: int) -> list:
        """Ambient derivative tensors of the gauge ``F = 1/rho``."""
        return reciprocal_jet(self.rho_jet(v, order))

    def half_gauge_sq_grad(self, x) -> np.ndarray:
        """Gradient of ``F**2 / 2`` at ``x`` in the interior of the recession cone."""
        x = np.asarray(x, dtype=float)
        if self.has_analytic:
            F = self.gauge_jet(x, 1)
            return F[0] * F[1]
        return derivative_tensor(self._half_gauge_sq, x, 1, self.fd_policy(x, 1), vectorized=True)

    def half_gauge_sq_hess(self, x) -> np.ndarray:
        """Hessian of ``F**2 / 2``."""
        x = np.asarray(x, dtype=float)
        if self.has_analytic:
            F = self.gauge_jet(x, 2)
            return np.outer(F[1], F[1]) + F[0] * F[2]
        return derivative_tensor(self._half_gauge_sq, x, 2, self.fd_policy(x, 2), vectorized=True)

    def _half_gauge_sq(self, x):
        return 0.5 / self.rho(x) ** 2

    # sampling

    def footprint_chart(self, margin: float | None = None) -> GnomonicChart:
        return self.cone.footprint_chart(self.margin if margin is None else margin)

    def interior_directions(self, count: int, margin: float | None = None, seed: int = 0) -> np.ndarray:
        chart = self.footprint_chart(margin)
        return chart.direction(chart.sample(count, seed))

    def boundary_points(self, count: int, margin: float | None = None, seed: int = 0) -> np.ndarray:
        dirs = self.interior_directions(count, margin, seed)
        return self.rho(dirs)[:, None] * dirs


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class FamilySpec:
    name: str
    parameters: str
    smoothness: int
    analytic_derivatives: bool
    closed_support: bool
    closed_copolar: bool
    builder: Callable = field(repr=False, compare=False)


def _calabi_rho(c: float, n: int):
    def rho(V):
        V = np.asarray(V, dtype=float)
        inside = np.all(V > 0, axis=-1)
        prod = np.prod(np.where(inside[..., None], V, 1.0), axis=-1)
        return np.where(inside, (c / prod) ** (1.0 / n), np.inf)

    return rho


def _calabi_rho_jet(c: float, n: int):
    def jet(v, order):
        v = np.asarray(v, dtype=float)
        if np.any(v <= 0):
            raise OutsideCone("calabi radial jet needs a positive vector")
        # rho = exp(phi), phi = (log c - sum log v_i) / n has diagonal derivative tensors
        phi = [(math.log(c) - np.log(v).sum()) / n]
        for k in range(1, order + 1):
            d = np.zeros((n,) * k)
            vals = (-1.0) ** k * math.factorial(k - 1) / (n * v**k)
            d[(np.arange(n),) * k] = vals
            phi.append(d)
        return exp_jet(phi)

    return jet


def calabi(n: int = 3, c: float = 1.0) -> PseudoCone:
    """``{x > 0 : x_1 x_2 ... x_n >= c}`` on the positive orthant."""
    n = int(n)
    c = float(c)
    if n < 2:
        raise ValueError("calabi needs n >= 2")
    if not c > 0:
        raise ValueError("calabi needs c > 0")
    cone = Cone.orthant(n)

    def support(U):
        U = np.asarray(U, dtype=float)
        return -n * (c * np.prod(np.abs(U), axis=-1)) ** (1.0 / n)

    def copolar_closed():
        dual_c = 1.0 / (n**n * c)
        return linear_image(calabi(n, dual_c), -np.eye(n), name=f"copolar(calabi(n={n}))")

    return PseudoCone(
        cone=cone,
        rho_fn=_calabi_rho(c, n),
        name="calabi" if n != 2 else "hyperbola",
        smoothness=3,
        params={"n": n, "c": c},
        support_fn=support,
        rho_jet_fn=_calabi_rho_jet(c, n),
        copolar_fn=copolar_closed,
    )


def hyperbola(c: float = 1.0) -> PseudoCone:
    """``{x > 0 : x_1 x_2 >= c}`` in the plane."""
    K = calabi(2, c)
    return _replace(K, name="hyperbola", params={"c": float(c)})


def perturbed_hyperbola(delta: float = 0.1) -> PseudoCone:
    """``{x_1 > 0 : x_2 >= 1/x_1 + delta/x_1**3}``; convex for every ``delta >= 0``."""
    delta = float(delta)
    if delta < 0:
        raise ValueError("perturbed_hyperbola needs delta >= 0")
    cone = Cone.orthant(2)

    def rho(V):
        V = np.asarray(V, dtype=float)
        a, b = V[..., 0], V[..., 1]
        inside = (a > 0) & (b > 0)
        a = np.where(inside, a, 1.0)
        b = np.where(inside, b, 1.0)
        # t**2 solves a^3 b s^2 - a^2 s - delta = 0
        s = (a**2 + np.sqrt(a**4 + 4.0 * a**3 * b * delta)) / (2.0 * a**3 * b)
        return np.where(inside, np.sqrt(s), np.inf)

    def support(U):
        U = np.asarray(U, dtype=float)
        a, b = np.abs(U[..., 0]), np.abs(U[..., 1])
        interior = (a > 0) & (b > 0)
        a_ = np.where(interior, a, 1.0)
        b_ = np.where(interior, b, 1.0)
        x2 = (b_ + np.sqrt(b_**2 + 12.0 * a_ * b_ * delta)) / (2.0 * a_)
        x = np.sqrt(x2)
        value = -(a_ * x + b_ * (1.0 / x + delta / x**3))
        return np.where(interior, value, 0.0)

    return PseudoCone(
        cone=cone,
        rho_fn=rho,
        name="perturbed_hyperbola",
        smoothness=3,
        params={"delta": delta},
        support_fn=support,
    )


def truncated_cone(cone: Cone, h: float = 1.0, normal=None) -> PseudoCone:
    """``{x in C : <a, x> >= h}`` with ``a`` the cone's axis functional unless given."""
    h = float(h)
    if not h > 0:
        raise ValueError("truncated_cone needs h > 0")
    a = cone.axis_functional if normal is None else np.asarray(normal, dtype=float)
    if not cone.dual.interior_contains(-a):
        raise ValueError("normal must be strictly positive on the cone")

    def rho(V):
        V = np.asarray(V, dtype=float)
        inside = cone.contains(V, tol=1e-14)
        with np.errstate(divide="ignore"):
            return np.where(inside, h / (V @ a), np.inf)

    def member(x, tol):
        return bool(cone.contains(x, tol=tol)) and float(x @ a) >= h * (1.0 - tol)

    support = None
    if cone.kind == "polyhedral":
        gens = cone.generators

        def support(U):
            U = np.asarray(U, dtype=float)
            return h * np.max((U @ gens.T) / (gens @ a), axis=-1)

    elif np.allclose(np.cross(a, cone.axis) if cone.n == 3 else a / np.linalg.norm(a) - cone.axis, 0.0):
        axis, theta = cone.axis, cone.half_angle
        scale = float(a @ axis)

        def support(U):
            U = np.asarray(U, dtype=float)
            along = U @ axis
            perp = np.linalg.norm(U - along[..., None] * axis, axis=-1)
            return h * (along * math.cos(theta) + perp * math.sin(theta)) / (scale * math.cos(theta))

    def copolar_closed():
        return shifted_cone(cone.dual, -a / h)

    return PseudoCone(
        cone=cone,
        rho_fn=rho,
        name="truncated_cone",
        smoothness=0,
        params={"cone": cone.describe(), "h": h, "normal": a.tolist()},
        support_fn=support,
        member_fn=member,
        copolar_fn=copolar_closed,
        margin=INTERIOR_MARGIN,
    )


def shifted_cone(cone: Cone, apex) -> PseudoCone:
    """The translate ``z + C`` of the recession cone by an interior apex ``z``."""
    z = np.asarray(apex, dtype=float)
    if not cone.interior_contains(z):
        raise ValueError("apex must lie in the interior of the cone")

    if cone.kind == "polyhedral":
        normals = cone.normals

        def rho(V):
            V = np.asarray(V, dtype=float)
            nv = V @ normals.T
            nz = normals @ z
            with np.errstate(divide="ignore", invalid="ignore"):
                ratios = np.where(nv < 0, nz / nv, np.inf)
            return ratios.max(axis=-1)

    else:
        axis, cos2 = cone.axis, math.cos(cone.half_angle) ** 2

        def rho(V):
            V = np.asarray(V, dtype=float)
            va, za = V @ axis, z @ axis
            A = va**2 - cos2 * np.sum(V * V, axis=-1)
            B = -2.0 * (va * za - cos2 * (V @ z))
            Cq = za**2 - cos2 * (z @ z)
            disc = np.clip(B**2 - 4.0 * A * Cq, 0.0, None)
            with np.errstate(divide="ignore", invalid="ignore"):
                root = (-B + np.sqrt(disc)) / (2.0 * A)
            return np.where((A > 1e-300) & (va > 0), root, np.inf)

    def support(U):
        return np.asarray(U, dtype=float) @ z

    def member(x, tol):
        return bool(cone.contains(np.asarray(x, dtype=float) - z, tol=tol))

    def copolar_closed():
        return truncated_cone(cone.dual, 1.0, normal=-z)

    return PseudoCone(
        cone=cone,
        rho_fn=rho,
        name="shifted_cone",
        smoothness=0,
        params={"cone": cone.describe(), "apex": z.tolist()},
        support_fn=support,
        member_fn=member,
        copolar_fn=copolar_closed,
    )


def from_membership(cone: Cone, member: Callable, name: str = "membership", smoothness: int = 0) -> PseudoCone:
    """Pseudo-cone known only through a membership oracle; radial values by bisection."""

    def radial_one(v):
        lo, hi = BISECTION_LOWER, 1.0
        while not member(hi * v):
            hi *= 2.0
            if hi > 1e12:
                return math.inf
        if member(lo * v):
            return lo
        while hi - lo > BISECTION_RTOL * hi:
            mid = 0.5 * (lo + hi)
            if member(mid * v):
                hi = mid
            else:
                lo = mid
        return hi

    def rho(V):
        V = np.asarray(V, dtype=float)
        flat = V.reshape(-1, cone.n)
        out = np.array([radial_one(v) if cone.interior_contains(v) else math.inf for v in flat])
        return out.reshape(V.shape[:-1])

    return PseudoCone(
        cone=cone,
        rho_fn=rho,
        name=name,
        smoothness=smoothness,
        member_fn=lambda x, tol: bool(member(np.asarray(x, dtype=float))),
    )


def _replace(K: PseudoCone, **changes) -> PseudoCone:
    from dataclasses import replace

    return replace(K, **changes)


# ---------------------------------------------------------------------------
# operations


def copolar(K: PseudoCone, method: str = "auto") -> PseudoCone:
    """The copolar pseudo-cone ``K* = {u : <u, x> <= -1 for all x in K}`` over the dual cone.

    Its radial field is ``w -> -1/h_K(w)``. With ``method="auto"`` the support of
    ``K`` comes from its closed form when available and any closed-form copolar
    of ``K`` contributes its support function and derivative data. With
    ``method="numeric"`` every support value is found by maximization and
    nothing closed-form is attached.
    """
    dual_cone = K.cone.dual
    cache: dict[bytes, float] = {}

    def h_K(w):
        key = w.tobytes()
        if key not in cache:
            cache[key] = K.support(w, method)
        return cache[key]

    def rho(W):
        W = np.asarray(W, dtype=float)
        flat = W.reshape(-1, K.n)
        if method != "numeric" and K.support_fn is not None:
            h = K.support(flat, method)
        else:
            h = np.array([h_K(w) for w in flat])
        with np.errstate(divide="ignore"):
            out = np.where(h < 0, -1.0 / h, np.inf)
        return out.reshape(W.shape[:-1])

    def member(u, tol):
        return K.support(np.asarray(u, dtype=float), method) <= -1.0 + tol

    closed = K.copolar_fn() if (method == "auto" and K.copolar_fn is not None) else None
    Kstar = PseudoCone(
        cone=dual_cone,
        rho_fn=rho,
        name=f"copolar({K.name})",
        smoothness=K.smoothness,
        params={"of": K.name, **dict(K.params)},
        support_fn=closed.support_fn if closed is not None else None,
        rho_jet_fn=closed.rho_jet_fn if closed is not None else None,
        member_fn=member,
        copolar_fn=(lambda: K) if method == "auto" else None,
        margin=K.margin,
    )
    _check_support_sign(K, dual_cone, method)
    return Kstar


def _check_support_sign(K: PseudoCone, dual_cone: Cone, method: str, count: int = 5):
    chart = dual_cone.footprint_chart(min(K.margin, 0.5 * dual_cone.max_slack))
    for w in chart.direction(chart.sample(count)):
        h = K.support(w, method)
        if not h < -SUPPORT_DEGENERACY_TOL:
            raise DegenerateSupport(f"support of {K.name} at interior dual direction {w.tolist()} is {h!r}")


def _image_cone(cone: Cone, A: np.ndarray) -> Cone:
    if cone.kind == "polyhedral":
        image = Cone.polyhedral(cone.generators @ A.T)
        if cone.label == "orthant" and np.allclose(A, np.eye(cone.n)):
            return cone
        return image
    gram = A.T @ A
    s2 = gram[0, 0]
    if not np.allclose(gram, s2 * np.eye(cone.n), rtol=1e-12, atol=1e-12):
        raise ValueError("linear images of circular cones are supported for scaled orthogonal maps only")
    return Cone.circular(A @ cone.axis, cone.half_angle)


def linear_image(K: PseudoCone, A, name: str | None = None) -> PseudoCone:
    """The image ``A K`` under an invertible matrix ``A``.

    ``rho_{AK}(v) = rho_K(A^{-1} v)``; support ``h_{AK}(u) = h_K(A^T u)``; and
    ``(AK)* = A^{-T} K*`` supplies the closed-form copolar.
    """
    A = np.asarray(A, dtype=float)
    if A.shape != (K.n, K.n):
        raise ValueError("matrix has wrong shape")
    if abs(np.linalg.det(A)) < 1e-14 or np.linalg.cond(A) > 1e12:
        raise Singular("linear map is not invertible")
    B = np.linalg.inv(A)
    cone = _image_cone(K.cone, A)

    def rho(V):
        return K.rho(np.asarray(V, dtype=float) @ B.T)

    support = None
    if K.support_fn is not None:

        def support(U):
            return K.support_fn(np.asarray(U, dtype=float) @ A)

    rho_jet = None
    if K.rho_jet_fn is not None:

        def rho_jet(v, order):
            inner = [B @ v, B] + [np.zeros((K.n,) * (j + 1)) for j in range(2, order + 1)]
            return compose(K.rho_jet_fn(B @ v, order), inner[: order + 1], order)

    member = None
    if K.member_fn is not None:

        def member(x, tol):
            return K.member_fn(B @ np.asarray(x, dtype=float), tol)

    copolar_closed = None
    if K.copolar_fn is not None:

        def copolar_closed():
            return linear_image(K.copolar_fn(), B.T)

    return PseudoCone(
        cone=cone,
        rho_fn=rho,
        name=name or f"linear_image({K.name})",
        smoothness=K.smoothness,
        params={"of": K.name, "matrix": A.tolist(), **dict(K.params)},
        support_fn=support,
        rho_jet_fn=rho_jet,
        member_fn=member,
        copolar_fn=copolar_closed,
        margin=K.margin,
    )


# ---------------------------------------------------------------------------
# registry


def _cone_from_config(cfg) -> Cone:
    if isinstance(cfg, Cone):
        return cfg
    if not isinstance(cfg, dict):
        raise ValueError(f"cone must be a mapping with a 'kind' key, got {cfg!r}")
    kind = cfg.get("kind", "orthant")
    if kind == "orthant":
        return Cone.orthant(int(cfg.get("n", 2)))
    if kind == "circular":
        return Cone.circular(cfg["axis"], float(cfg["half_angle"]))
    if kind == "polyhedral":
        return Cone.polyhedral(cfg["generators"])
    raise ValueError(f"unknown cone kind {kind!r}")


FAMILIES: dict[str, FamilySpec] = {
    "hyperbola": FamilySpec(
        "hyperbola", "c > 0", 3, True, True, True, lambda c=1.0: hyperbola(c)
    ),
    "calabi": FamilySpec(
        "calabi", "n >= 2, c > 0", 3, True, True, True, lambda n=3, c=1.0: calabi(n, c)
    ),
    "perturbed_hyperbola": FamilySpec(
        "perturbed_hyperbola", "delta >= 0", 3, False, True, False, lambda delta=0.1: perturbed_hyperbola(delta)
    ),
    "truncated_cone": FamilySpec(
        "truncated_cone",
        "cone, h > 0",
        0,
        False,
        True,
        True,
        lambda cone=None, h=1.0, normal=None: truncated_cone(_cone_from_config(cone or {}), h, normal),
    ),
    "shifted_cone": FamilySpec(
        "shifted_cone",
        "cone, apex in int C",
        0,
        False,
        True,
        True,
        lambda cone=None, apex=(1.0, 1.0): shifted_cone(_cone_from_config(cone or {}), apex),
    ),
}


def make_family(name: str, **params) -> PseudoCone:
    try:
        spec = FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; known: {sorted(FAMILIES)}") from None
    return spec.builder(**params)
