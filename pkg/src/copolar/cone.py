"""Pointed closed convex cones with interior, their duals, and gnomonic footprint charts.

Sign convention: the dual of ``C`` is ``{u : <u, x> <= 0 for all x in C}``.
"""

from __future__ import annotations

import itertools
import math
from functools import cached_property

import numpy as np
from scipy.stats import qmc

from .errors import EmptyFootprint
from .jets import affine_jet, power_jet, scale_jet
from .numkit import CapDomain, complement_frame

__all__ = ["Cone", "GnomonicChart", "dual", "interior_contains", "footprint_chart"]


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def _facet_normals(generators: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Outward unit facet normals of the cone spanned by ``generators`` (brute force, n <= 4)."""
    n = generators.shape[1]
    gens = generators / np.linalg.norm(generators, axis=1, keepdims=True)
    normals: list[np.ndarray] = []
    for subset in itertools.combinations(range(len(gens)), n - 1):
        sub = gens[list(subset)]
        if np.linalg.matrix_rank(sub, tol=1e-10) < n - 1:
            continue
        _, _, vt = np.linalg.svd(sub)
        nrm = vt[-1]
        dots = gens @ nrm
        if np.all(dots <= tol):
            pass
        elif np.all(dots >= -tol):
            nrm = -nrm
        else:
            continue
        if not any(np.allclose(nrm, m, atol=1e-10) for m in normals):
            normals.append(nrm)
    return np.array(normals)


class Cone:
    """A pointed closed convex cone with nonempty interior.

    Use the constructors :meth:`circular`, :meth:`orthant` and :meth:`polyhedral`.
    Instances are immutable.
    """

    def __init__(self, kind: str, n: int, *, axis=None, half_angle=None, generators=None, label=None):
        self.kind = kind
        self.n = int(n)
        self.label = label or kind
        if self.n < 2:
            raise ValueError("cones live in dimension n >= 2")
        if kind == "circular":
            self.axis = _unit(axis)
            self.half_angle = float(half_angle)
            if self.axis.size != self.n:
                raise ValueError("axis has wrong dimension")
            if not 0 < self.half_angle < math.pi / 2:
                raise ValueError("half_angle must lie in (0, pi/2)")
            self.generators = None
            self.normals = None
        elif kind == "polyhedral":
            gens = np.atleast_2d(np.asarray(generators, dtype=float))
            if gens.shape[1] != self.n:
                raise ValueError("generators have wrong dimension")
            if np.any(np.linalg.norm(gens, axis=1) == 0):
                raise ValueError("generators must be nonzero")
            if self.n > 4:
                raise ValueError("polyhedral cones are supported for n <= 4 only")
            if np.linalg.matrix_rank(gens) < self.n:
                raise ValueError("generators do not span an n-dimensional cone")
            normals = _facet_normals(gens)
            if len(normals) < self.n or np.linalg.matrix_rank(normals) < self.n:
                raise ValueError("generators do not span a pointed cone")
            self.generators = gens
            self.normals = normals
            self.axis = None
            self.half_angle = None
        else:
            raise ValueError(f"unknown cone kind {kind!r}")

    # constructors

    @classmethod
    def circular(cls, axis, half_angle: float) -> "Cone":
        axis = np.asarray(axis, dtype=float)
        return cls("circular", axis.size, axis=axis, half_angle=half_angle)

    @classmethod
    def orthant(cls, n: int) -> "Cone":
        return cls("polyhedral", n, generators=np.eye(n), label="orthant")

    @classmethod
    def polyhedral(cls, generators) -> "Cone":
        gens = np.atleast_2d(np.asarray(generators, dtype=float))
        return cls("polyhedral", gens.shape[1], generators=gens)

    def __repr__(self) -> str:
        if self.kind == "circular":
            return f"Cone.circular(axis={self.axis.tolist()}, half_angle={self.half_angle!r})"
        return f"Cone.polyhedral({self.generators.tolist()})"

    def describe(self) -> dict:
        if self.kind == "circular":
            return {"kind": "circular", "axis": self.axis.tolist(), "half_angle": self.half_angle}
        return {"kind": self.label, "generators": self.generators.tolist()}

    # geometry

    @cached_property
    def dual(self) -> "Cone":
        if self.kind == "circular":
            return Cone.circular(-self.axis, math.pi / 2 - self.half_angle)
        return Cone.polyhedral(self.normals)

    @cached_property
    def axis_direction(self) -> np.ndarray:
        """A fixed interior unit direction, used as chart and cap center."""
        if self.kind == "circular":
            return self.axis
        gens = self.generators / np.linalg.norm(self.generators, axis=1, keepdims=True)
        return _unit(gens.sum(axis=0))

    @cached_property
    def axis_functional(self) -> np.ndarray:
        """Linear functional positive on ``C \\ {0}``: the axis, or the sum of generators."""
        if self.kind == "circular":
            return self.axis
        return self.generators.sum(axis=0)

    @cached_property
    def generator_directions(self) -> np.ndarray:
        if self.kind == "circular":
            return np.empty((0, self.n))
        return self.generators / np.linalg.norm(self.generators, axis=1, keepdims=True)

    def slack(self, v) -> np.ndarray:
        """Signed angular distance from the direction of ``v`` to the boundary (positive inside)."""
        v = np.asarray(v, dtype=float)
        norm = np.linalg.norm(v, axis=-1)
        with np.errstate(invalid="ignore", divide="ignore"):
            if self.kind == "circular":
                cosang = np.clip((v @ self.axis) / norm, -1.0, 1.0)
                return self.half_angle - np.arccos(cosang)
            s = np.clip(-(v @ self.normals.T) / norm[..., None], -1.0, 1.0)
            return np.arcsin(s).min(axis=-1)

    def contains(self, x, tol: float = 0.0) -> np.ndarray:
        """Closed membership, with relative tolerance ``tol``."""
        x = np.asarray(x, dtype=float)
        norm = np.linalg.norm(x, axis=-1)
        if self.kind == "circular":
            return (x @ self.axis) >= math.cos(self.half_angle) * norm - tol * norm
        return np.max(x @ self.normals.T, axis=-1) <= tol * norm

    def interior_contains(self, x, tol: float = 0.0) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        norm = np.linalg.norm(x, axis=-1)
        return (norm > 0) & (self.slack(x) > tol)

    @cached_property
    def max_slack(self) -> float:
        return float(self.slack(self.axis_direction))

    @cached_property
    def bounding_angle(self) -> float:
        """Largest angle between the axis direction and a point of the footprint."""
        if self.kind == "circular":
            return self.half_angle
        cosang = self.generator_directions @ self.axis_direction
        return float(np.arccos(np.clip(cosang.min(), -1.0, 1.0)))

    def bounding_cap(self) -> CapDomain:
        """Smallest cap around the axis direction covering the closed footprint."""
        angle = min(self.bounding_angle, math.pi / 2 - 1e-12)
        return CapDomain(self.axis_direction, angle, 0.0)

    def footprint_chart(self, margin: float = 0.0) -> "GnomonicChart":
        return GnomonicChart(self, margin)


class GnomonicChart:
    """Central projection of the footprint ``{v unit : slack(v) > margin}`` onto the tangent plane at the axis.

    Parameters ``t`` map to the direction of ``y(t) = base + frame @ t``; the chart
    image is the set of such directions whose angular distance to the cone
    boundary exceeds ``margin``.
    """

    def __init__(self, cone: Cone, margin: float = 0.0):
        if margin < 0:
            raise ValueError("margin must be nonnegative")
        if margin >= cone.max_slack:
            raise EmptyFootprint(f"margin {margin} leaves no footprint (max slack {cone.max_slack:.6g})")
        self.cone = cone
        self.margin = float(margin)
        self.base = cone.axis_direction
        self.frame = complement_frame(self.base)
        self.dim = cone.n - 1
        if cone.kind == "circular":
            self.radius = math.tan(cone.half_angle - margin)
        else:
            self.radius = math.tan(cone.bounding_angle)

    def point(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.base + t @ self.frame.T

    def direction(self, t) -> np.ndarray:
        y = self.point(t)
        return y / np.linalg.norm(y, axis=-1, keepdims=True)

    def to_params(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return (v @ self.frame) / (v @ self.base)[..., None]

    def contains(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        inside = np.linalg.norm(t, axis=-1) < self.radius
        return inside & (self.cone.slack(self.point(t)) > self.margin)

    def point_jet(self, t, order: int) -> list:
        """Jet of ``y(t)`` (affine in ``t``)."""
        return affine_jet(self.point(t), self.frame, order)

    def direction_jet(self, t, order: int) -> list:
        """Jet of the unit direction ``y/|y|``."""
        yj = self.point_jet(t, order)
        q = [float(yj[0] @ yj[0])]
        # |y|^2 has gradient 2 E^T y and Hessian 2 E^T E
        q.append(2.0 * self.frame.T @ yj[0])
        if order >= 2:
            q.append(2.0 * self.frame.T @ self.frame)
        for j in range(3, order + 1):
            q.append(np.zeros((self.dim,) * j))
        inv_norm = power_jet(q, -0.5)
        return scale_jet(inv_norm, yj, order)

    def sample(self, count: int, seed: int = 0) -> np.ndarray:
        """Deterministic parameters spread over the chart domain, as rows.

        ``seed`` shifts the low-discrepancy sequence; seed 0 gives arc midpoints
        in one dimension and the Halton sequence from its second point otherwise.
        """
        if self.dim == 1:
            lo, hi = self._arc_limits()
            phase = 0.5 if seed == 0 else (seed * (math.sqrt(5.0) - 1.0) / 2.0) % 1.0
            phi = lo + (np.arange(count) + phase) * (hi - lo) / count
            e = self.frame[:, 0]
            dirs = np.cos(phi)[:, None] * self.base + np.sin(phi)[:, None] * e
            return self.to_params(dirs)
        sampler = qmc.Halton(d=self.dim, scramble=False)
        sampler.fast_forward(1 + int(seed) * 7919)
        out: list[np.ndarray] = []
        while len(out) < count:
            t = (2.0 * sampler.random(4 * count) - 1.0) * self.radius
            out.extend(t[self.contains(t)])
        return np.array(out[:count])

    def _arc_limits(self) -> tuple[float, float]:
        e = self.frame[:, 0]

        def slack_at(phi):
            return float(self.cone.slack(math.cos(phi) * self.base + math.sin(phi) * e)) - self.margin

        limits = []
        for sign in (-1.0, 1.0):
            lo, hi = 0.0, sign * math.pi / 2
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                if slack_at(mid) > 0:
                    lo = mid
                else:
                    hi = mid
            limits.append(lo)
        return limits[0], limits[1]


def dual(C: Cone) -> Cone:
    return C.dual


def interior_contains(C: Cone, x, tol: float = 0.0) -> bool:
    return bool(C.interior_contains(x, tol))


def footprint_chart(C: Cone, margin: float = 0.0) -> GnomonicChart:
    return C.footprint_chart(margin)
