import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SQ2, SQ3
from copolar import (
    FAMILIES,
    calabi,
    copolar,
    from_membership,
    hyperbola,
    linear_image,
    make_family,
    perturbed_hyperbola,
    shifted_cone,
)
from copolar.cone import Cone
from copolar.errors import OutsideCone, Singular


def unit(*v):
    v = np.array(v, dtype=float)
    return v / np.linalg.norm(v)


class TestRadial:
    def test_hyperbola(self, hyper):
        assert hyper.radial(unit(1, 1)) == pytest.approx(SQ2, abs=1e-14)

    def test_calabi(self, cal3):
        assert cal3.radial(unit(1, 1, 1)) == pytest.approx(SQ3, abs=1e-14)

    def test_truncated_plane_slice(self, trunc):
        v = np.array([0.8, 0.6])
        assert trunc.radial(v) == pytest.approx(1.0 / 1.4, abs=1e-14)

    def test_outside_cone(self, hyper):
        with pytest.raises(OutsideCone):
            hyper.radial(np.array([-1.0, 1.0]))

    def test_bisection_family_matches_closed_form(self):
        K = from_membership(Cone.orthant(2), lambda x, tol=0.0: x[0] * x[1] >= 1 - tol)
        assert K.radial(unit(1, 2)) == pytest.approx(hyperbola(1.0).radial(unit(1, 2)), rel=1e-10)

    def test_positive_on_footprint(self, pert, cal3):
        for K in (pert, cal3):
            assert np.min(K.rho(K.interior_directions(200))) > 0


class TestSupport:
    def test_hyperbola(self, hyper):
        assert hyper.support(np.array([-1.0, -1.0])) == pytest.approx(-2.0)
        assert hyper.support(np.array([1.0, 1.0])) == math.inf

    def test_calabi(self, cal3):
        assert cal3.support(-unit(1, 1, 1)) == pytest.approx(-SQ3, abs=1e-14)

    def test_zero_vector(self, hyper):
        assert hyper.support(np.zeros(2)) == 0.0

    @pytest.mark.parametrize("family", ["hyperbola", "calabi", "perturbed_hyperbola"])
    def test_numeric_matches_closed(self, family):
        K = make_family(family)
        for u in K.cone.dual.footprint_chart(0.1).direction(K.cone.dual.footprint_chart(0.1).sample(10)):
            assert K.support_numeric(u) == pytest.approx(K.support(u, "closed"), abs=1e-10)


class TestGaugeMember:
    def test_gauge(self, hyper, cal3):
        assert hyper.gauge(np.array([2.0, 2.0])) == pytest.approx(2.0)
        assert hyper.gauge(np.array([1.0, 1.0])) == pytest.approx(1.0)
        assert cal3.gauge(np.array([2.0, 2.0, 2.0])) == pytest.approx(2.0)

    def test_member(self, hyper, shifted):
        assert hyper.member(np.array([2.0, 1.0]))
        assert not hyper.member(np.array([0.5, 0.5]))
        assert shifted.member(np.array([1.0, 1.0]))


class TestCopolar:
    def test_hyperbola(self, hyper):
        Ks = copolar(hyper)
        assert Ks.radial(-unit(1, 1)) == pytest.approx(1 / SQ2, abs=1e-14)
        # K* = {u < 0 : u1 u2 >= 1/4}
        assert Ks.member(np.array([-0.5, -0.5]))
        assert not Ks.member(np.array([-0.4, -0.5]))

    def test_calabi(self, cal3):
        Ks = copolar(cal3, "numeric")
        for u in (-unit(1, 1, 1), -unit(1, 2, 3)):
            r = Ks.radial(u)
            assert np.prod(np.abs(r * u)) == pytest.approx(1 / 27, rel=1e-10)

    def test_truncated(self, trunc):
        Ks = copolar(trunc, "numeric")
        for w in (unit(-0.6, -0.8), unit(-1.0, -0.3)):
            assert Ks.radial(w) == pytest.approx(-1.0 / max(w), rel=1e-12)

    def test_involution_value(self, hyper):
        Kss = copolar(copolar(hyper, "numeric"), "numeric")
        assert Kss.radial(unit(1, 2)) == pytest.approx(1.5811388300841898, abs=1e-12)

    @pytest.mark.parametrize("family", ["hyperbola", "perturbed_hyperbola", "shifted_cone", "truncated_cone"])
    def test_closed_and_numeric_agree(self, family):
        K = make_family(family)
        auto, numeric = copolar(K), copolar(K, "numeric")
        dirs = auto.interior_directions(30)
        np.testing.assert_allclose(auto.rho(dirs), numeric.rho(dirs), rtol=1e-10)


class TestLinearImage:
    def test_identity(self, hyper):
        dirs = hyper.interior_directions(20)
        np.testing.assert_allclose(linear_image(hyper, np.eye(2)).rho(dirs), hyper.rho(dirs))

    def test_diagonal_scaling(self, hyper):
        assert linear_image(hyper, np.diag([2.0, 1.0])).radial(unit(1, 1)) == pytest.approx(2.0)

    def test_equivariance_grid(self, hyper):
        A = np.array([[2.0, 1.0], [0.0, 1.0]])
        left = copolar(linear_image(hyper, A), "numeric")
        right = linear_image(copolar(hyper), np.linalg.inv(A).T)
        dirs = left.interior_directions(100)
        assert np.max(np.abs(left.rho(dirs) / right.rho(dirs) - 1)) <= 1e-9

    def test_singular(self, hyper):
        with pytest.raises(Singular):
            linear_image(hyper, np.array([[1.0, 2.0], [2.0, 4.0]]))


def test_registry_has_five_families():
    assert sorted(FAMILIES) == ["calabi", "hyperbola", "perturbed_hyperbola", "shifted_cone", "truncated_cone"]
    assert {spec.smoothness for spec in FAMILIES.values()} <= {0, 2, 3}


def test_parameter_validation():
    with pytest.raises(ValueError):
        calabi(3, -1.0)
    with pytest.raises(ValueError):
        perturbed_hyperbola(-0.1)


# properties


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 1.5), st.floats(0.2, 5.0), st.sampled_from([0.5, 2.0, 10.0]))
def test_gauge_homogeneity(angle, c, t):
    K = hyperbola(c)
    x = np.array([math.cos(angle), math.sin(angle)])
    assert K.gauge(t * x) == pytest.approx(t * K.gauge(x), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 3.0))
def test_gauge_homogeneity_perturbed(s):
    K = perturbed_hyperbola(0.3)
    x = np.array([1.0, s])
    for t in (0.5, 2.0, 10.0):
        assert K.gauge(t * x) == pytest.approx(t * K.gauge(x), rel=1e-12)


@pytest.mark.parametrize("family", ["hyperbola", "calabi", "perturbed_hyperbola", "shifted_cone"])
def test_membership_duality(family):
    """<u, x> <= -1 for boundary points x of K and u of K*."""
    K = make_family(family)
    Ks = copolar(K)
    x = K.boundary_points(40)
    u = Ks.boundary_points(25)
    assert np.max(x @ u.T) <= -1 + 1e-9


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 2.0), st.floats(1.05, 3.0))
def test_inclusion_reversal(c1, ratio):
    small, big = hyperbola(c1 * ratio), hyperbola(c1)  # small is contained in big
    grid = np.array([[a, b] for a in np.linspace(0.1, 4, 15) for b in np.linspace(0.1, 4, 15)])
    assert all(big.member(p) for p in grid if small.member(p))
    S, B = copolar(small), copolar(big)
    assert all(S.member(-p) for p in grid if B.member(-p))  # big* is inside small*
    dirs = S.interior_directions(20)
    assert np.all(S.rho(dirs) < B.rho(dirs))  # strictly: small* reaches closer to the origin
