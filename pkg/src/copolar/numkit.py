"""Small numerical kernel: finite differences and maximization over spherical caps.

All routines are pure functions of their inputs. Derivatives use nested central
differences (every stencil is even in the step, so the error expands in powers
of ``h**2``) followed by Richardson extrapolation over halved steps.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import optimize
from scipy.stats import qmc

from .constants import CAP_RESTARTS, CAP_SCAN_POINTS, CAP_SCAN_POINTS_HIGH_DIM, CAP_TOL, DEFAULT_RICHARDSON_LEVELS, EPS
from .errors import Degenerate, NonFinite

__all__ = [
    "StepPolicy",
    "CapDomain",
    "richardson_extrapolate",
    "grad_fd",
    "hess_fd",
    "third_fd",
    "derivative_tensor",
    "cap_lattice",
    "maximize_on_cap",
    "complement_frame",
]

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class StepPolicy:
    """Step-size policy for the finite-difference routines.

    ``base_step=None`` selects ``eps**(1/(order + 2*levels)) * L``, the step
    that balances rounding against the extrapolated truncation error. The
    length scale ``L`` is ``1 + |x|`` unless a smaller ``length_scale`` is set,
    e.g. the distance to a singularity of the differentiated function.
    """

    base_step: float | None = None
    richardson_levels: int = DEFAULT_RICHARDSON_LEVELS
    order: int = 1
    length_scale: float | None = None

    def __post_init__(self):
        if self.base_step is not None and not self.base_step > 0:
            raise ValueError("base_step must be positive")
        if not 1 <= self.richardson_levels <= 4:
            raise ValueError("richardson_levels must lie in [1, 4]")
        if self.order not in (1, 2, 3):
            raise ValueError("order must be 1, 2 or 3")
        if self.length_scale is not None and not self.length_scale > 0:
            raise ValueError("length_scale must be positive")

    def step(self, x: np.ndarray) -> float:
        if self.base_step is not None:
            return float(self.base_step)
        scale = 1.0 + float(np.linalg.norm(x))
        if self.length_scale is not None:
            scale = min(scale, float(self.length_scale))
        return EPS ** (1.0 / (self.order + 2 * self.richardson_levels)) * scale


def richardson_extrapolate(values: Sequence[np.ndarray], p: int = 2, r: float = 2.0) -> np.ndarray:
    """Eliminate error terms ``h**p, h**(2p), ...`` from estimates at steps ``h, h/r, h/r**2, ...``."""
    table = [np.asarray(v, dtype=float) for v in values]
    for j in range(1, len(table)):
        factor = r ** (p * j)
        for k in range(len(table) - 1, j - 1, -1):
            table[k] = (factor * table[k] - table[k - 1]) / (factor - 1.0)
    return table[-1]


def _evaluate(f, points: np.ndarray, vectorized: bool) -> np.ndarray:
    if vectorized:
        vals = np.asarray(f(points), dtype=float).reshape(len(points))
    else:
        vals = np.array([float(f(p)) for p in points])
    return vals


def derivative_tensor(
    f: Callable,
    x,
    order: int,
    policy: StepPolicy | None = None,
    vectorized: bool = False,
) -> np.ndarray:
    """Symmetric tensor of all partial derivatives of ``f`` of the given order at ``x``."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if policy is None:
        policy = StepPolicy(order=order)
    h0 = policy.step(x)
    combos = list(itertools.combinations_with_replacement(range(n), order))
    signs = np.array(list(itertools.product((-1.0, 1.0), repeat=order)))
    weights = signs.prod(axis=1)
    offsets = np.zeros((len(combos), len(signs), n))
    for c, idx in enumerate(combos):
        for j, axis in enumerate(idx):
            offsets[c, :, axis] += signs[:, j]

    estimates = []
    for level in range(policy.richardson_levels):
        h = h0 / 2.0**level
        pts = (x + h * offsets).reshape(-1, n)
        vals = _evaluate(f, pts, vectorized)
        if not np.all(np.isfinite(vals)):
            raise NonFinite(f"non-finite stencil value near x={x.tolist()} (step {h:.3g})")
        vals = vals.reshape(len(combos), len(signs))
        estimates.append(vals @ weights / (2.0 * h) ** order)
    flat = richardson_extrapolate(estimates, p=2)

    tensor = np.empty((n,) * order)
    for value, idx in zip(flat, combos):
        for perm in set(itertools.permutations(idx)):
            tensor[perm] = value
    return tensor


def grad_fd(f, x, policy: StepPolicy | None = None, vectorized: bool = False) -> np.ndarray:
    """Central-difference gradient with Richardson extrapolation."""
    return derivative_tensor(f, x, 1, policy or StepPolicy(order=1), vectorized)


def hess_fd(f, x, policy: StepPolicy | None = None, vectorized: bool = False) -> np.ndarray:
    """Central-difference Hessian. Mixed entries share one stencil, so the result is exactly symmetric."""
    return derivative_tensor(f, x, 2, policy or StepPolicy(order=2), vectorized)


def third_fd(f, x, policy: StepPolicy | None = None, vectorized: bool = False) -> np.ndarray:
    """Fully symmetric array of third partial derivatives."""
    return derivative_tensor(f, x, 3, policy or StepPolicy(order=3), vectorized)


def complement_frame(center: np.ndarray) -> np.ndarray:
    """Orthonormal basis (as columns) of the hyperplane orthogonal to a unit vector.

    In the plane the single column is the counter-clockwise rotation of ``center``.
    """
    c = np.asarray(center, dtype=float)
    n = c.size
    if n == 2:
        return np.array([[-c[1]], [c[0]]])
    k = n - 1
    w = c.copy()
    w[k] += math.copysign(1.0, c[k]) if c[k] != 0 else 1.0
    house = np.eye(n) - 2.0 * np.outer(w, w) / (w @ w)
    cols = [j for j in range(n) if j != k]
    return house[:, cols]


@dataclass(frozen=True, eq=False)
class CapDomain:
    """Closed spherical cap ``{v : angle(v, center) <= max_angle - margin}``."""

    center: np.ndarray
    max_angle: float
    margin: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float)
        norm = np.linalg.norm(c)
        if norm == 0:
            raise Degenerate("cap center must be nonzero")
        object.__setattr__(self, "center", c / norm)
        if not 0 < self.max_angle < math.pi / 2:
            raise ValueError("max_angle must lie in (0, pi/2)")
        if self.margin < 0:
            raise ValueError("margin must be nonnegative")
        if self.angle <= 0:
            raise Degenerate("cap is empty: margin >= max_angle")

    @property
    def angle(self) -> float:
        return self.max_angle - self.margin

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def frame(self) -> np.ndarray:
        return complement_frame(self.center)

    def contains(self, v, tol: float = 1e-14) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        cosang = (v @ self.center) / np.linalg.norm(v, axis=-1)
        return cosang >= math.cos(self.angle) - tol


def cap_lattice(cap: CapDomain, count: int, seed: int = 0) -> np.ndarray:
    """Deterministic quasi-uniform directions in a cap, as rows.

    Uniform in angle on an arc (n=2, endpoints included), a Fibonacci spiral
    for n=3, and a Halton sequence pushed through the gnomonic chart above that.
    ``seed`` rotates the lattice.
    """
    n = cap.dim
    c, E = cap.center, cap.frame
    alpha = cap.angle
    if n == 2:
        phi = np.linspace(-alpha, alpha, count)
        return np.cos(phi)[:, None] * c + np.sin(phi)[:, None] * E[:, 0]
    if n == 3:
        i = np.arange(count) + 0.5
        cz = 1.0 - (1.0 - math.cos(alpha)) * i / count
        sz = np.sqrt(np.clip(1.0 - cz**2, 0.0, None))
        az = 2.0 * math.pi * (i / GOLDEN + seed / GOLDEN**2)
        tang = np.cos(az)[:, None] * E[:, 0] + np.sin(az)[:, None] * E[:, 1]
        return cz[:, None] * c + sz[:, None] * tang
    radius = math.tan(alpha)
    sampler = qmc.Halton(d=n - 1, scramble=False)
    if seed:
        sampler.fast_forward(seed)
    out = []
    while len(out) < count:
        t = (2.0 * sampler.random(count) - 1.0) * radius
        t = t[np.linalg.norm(t, axis=1) <= radius]
        out.extend(c + t @ E.T)
    dirs = np.array(out[:count])
    return dirs / np.linalg.norm(dirs, axis=1, keepdims=True)


def _safe_values(g, dirs: np.ndarray, vectorized: bool) -> np.ndarray:
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        vals = _evaluate(g, dirs, vectorized)
    return np.where(np.isnan(vals), -np.inf, vals)


def maximize_on_cap(
    g: Callable,
    cap: CapDomain,
    restarts: int = CAP_RESTARTS,
    tol: float = CAP_TOL,
    seed: int = 0,
    scan_points: int | None = None,
    candidates=None,
    vectorized: bool = False,
) -> tuple[np.ndarray, float]:
    """Approximate ``max g(v)`` over unit directions ``v`` in ``cap``.

    A deterministic lattice scan is followed by local refinement from the
    ``restarts`` best scan points (bounded Brent on an arc, Nelder-Mead in
    gnomonic coordinates otherwise). ``candidates`` are extra directions that
    join the scan, e.g. the vertices of a polyhedral footprint. NaN values of
    ``g`` count as ``-inf``.
    """
    n = cap.dim
    if scan_points is None:
        scan_points = CAP_SCAN_POINTS.get(n, CAP_SCAN_POINTS_HIGH_DIM)
    dirs = cap_lattice(cap, scan_points, seed)
    if candidates is not None and len(candidates):
        cand = np.atleast_2d(np.asarray(candidates, dtype=float))
        cand = cand / np.linalg.norm(cand, axis=1, keepdims=True)
        cand = cand[cap.contains(cand)]
        dirs = np.vstack([dirs, cand])
    vals = _safe_values(g, dirs, vectorized)
    # rank by value, ties broken lexicographically by coordinates
    keys = [dirs[:, j] for j in reversed(range(n))] + [-vals]
    order = np.lexsort(keys)
    best_dir, best_val = dirs[order[0]], vals[order[0]]

    def point_value(v):
        return _safe_values(g, v[None, :], vectorized)[0]

    c, E = cap.center, cap.frame
    if n == 2:
        alpha = cap.angle
        spacing = 2.0 * alpha / max(scan_points - 1, 1)

        def along_arc(phi):
            return math.cos(phi) * c + math.sin(phi) * E[:, 0]

        for idx in order[: max(restarts, 0)]:
            v0 = dirs[idx]
            phi0 = math.atan2(v0 @ E[:, 0], v0 @ c)
            lo, hi = max(-alpha, phi0 - spacing), min(alpha, phi0 + spacing)
            if hi <= lo:
                continue
            with np.errstate(invalid="ignore"):
                res = optimize.minimize_scalar(
                    lambda p: -point_value(along_arc(p)),
                    bounds=(lo, hi),
                    method="bounded",
                    options={"xatol": tol},
                )
            val = -float(res.fun)
            if val > best_val:
                best_dir, best_val = along_arc(float(res.x)), val
        return best_dir, float(best_val)

    radius = math.tan(cap.angle)
    spacing = radius * math.sqrt(math.pi / scan_points)

    def to_dir(t):
        y = c + E @ t
        return y / np.linalg.norm(y)

    def objective(t):
        if np.linalg.norm(t) > radius:
            return np.inf
        return -point_value(to_dir(t))

    if vectorized:
        offsets = np.array(list(itertools.product((-1.0, 0.0, 1.0), repeat=n - 1)))

        def batch(T):
            inside = np.linalg.norm(T, axis=1) <= radius
            Y = c + T @ E.T
            vals = _safe_values(g, Y / np.linalg.norm(Y, axis=1, keepdims=True), True)
            return np.where(inside, vals, -np.inf)

        best_t = (E.T @ best_dir) / (c @ best_dir)
        for idx in order[: max(restarts, 0)]:
            v0 = dirs[idx]
            t, val = _pattern_zoom(batch, (E.T @ v0) / (c @ v0), vals[idx], spacing, offsets, tol)
            if val > best_val:
                best_t, best_dir, best_val = t, to_dir(t), val
        if n == 3 and np.linalg.norm(best_t) > radius * (1.0 - 1e-6):
            # maximizers on a curved rim stall the pattern search; search along the rim instead
            t, val = _rim_search(batch, radius, scan_points, tol)
            if val > best_val:
                best_dir, best_val = to_dir(t), val
        return best_dir, float(best_val)

    for idx in order[: max(restarts, 0)]:
        v0 = dirs[idx]
        t0 = (E.T @ v0) / (c @ v0)
        simplex = np.vstack([t0, t0 + spacing * np.eye(n - 1)])
        with np.errstate(invalid="ignore"):
            res = optimize.minimize(
                objective,
                t0,
                method="Nelder-Mead",
                options={"xatol": tol, "fatol": tol * 1e-2, "initial_simplex": simplex, "maxiter": 4000},
            )
        val = -float(res.fun)
        if val > best_val:
            best_dir, best_val = to_dir(res.x), val
    return best_dir, float(best_val)


def _rim_search(batch, radius, count, tol):
    r = radius * (1.0 - 1e-15)

    def rim(psi):
        psi = np.atleast_1d(psi)
        return r * np.column_stack([np.cos(psi), np.sin(psi)])

    psi = np.linspace(0.0, 2.0 * math.pi, count, endpoint=False)
    vals = batch(rim(psi))
    j = int(np.argmax(vals))
    spacing = 2.0 * math.pi / count
    with np.errstate(invalid="ignore"):
        res = optimize.minimize_scalar(
            lambda p: -batch(rim(p))[0],
            bounds=(psi[j] - spacing, psi[j] + spacing),
            method="bounded",
            options={"xatol": tol},
        )
    if -res.fun > vals[j]:
        return rim(res.x)[0], float(-res.fun)
    return rim(psi[j])[0], float(vals[j])


RING_DIRECTIONS = 32


def _pattern_zoom(batch, t, value, step, offsets, tol, moves_per_step=16):
    """Pattern search: move to the best stencil neighbour, halve the step when none improves.

    In two dimensions the 3x3 grid is joined by a ring of directions rotated by
    the golden angle after every halving, so ascent along non-smooth ridges is
    never blocked by a fixed set of search directions. At most
    ``moves_per_step`` moves are taken before the step is halved, which bounds
    the work when the maximizer lies on a curved constraint boundary.
    """
    ring = offsets.shape[1] == 2
    turn = 0.0
    moves = 0
    while step > tol:
        stencil = offsets
        if ring:
            psi = turn + 2.0 * math.pi * np.arange(RING_DIRECTIONS) / RING_DIRECTIONS
            stencil = np.vstack([offsets, np.column_stack([np.cos(psi), np.sin(psi)])])
        cand = t + step * stencil
        vals = batch(cand)
        j = int(np.argmax(vals))
        if vals[j] > value and moves < moves_per_step:
            t, value = cand[j], vals[j]
            moves += 1
        else:
            step *= 0.5
            turn += 2.0 * math.pi / GOLDEN**2
            moves = 0
    return t, value
