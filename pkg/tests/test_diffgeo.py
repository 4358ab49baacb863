import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SQ2
from copolar import (
    BoundaryChart,
    PseudoCone,
    affine_sphere_reports,
    check_gauge_equality,
    check_product_identity,
    copolar,
    crucial_map,
    crucial_map_hessian,
    crucial_pair_reports,
    equiaffine_support,
    gauss_curvature,
    hyperbola,
    perturbed_hyperbola,
)
from copolar.cone import Cone
from copolar.diffgeo import (
    affine_sphere_statistic,
    correspondence_residuals,
    curvature_sample,
    gradient_map,
    outer_normal,
    symmetric_orbit,
)
from copolar.errors import Degenerate, NotOnBoundary


def at(K, x):
    chart = BoundaryChart(K)
    return chart.params_of(np.asarray(x, dtype=float)), chart


class TestNormalsAndCurvature:
    def test_normals(self, hyper, cal3):
        np.testing.assert_allclose(outer_normal(hyper, *at(hyper, [1, 1])), -np.ones(2) / SQ2, atol=1e-12)
        n = np.array([0.5, 2.0])
        np.testing.assert_allclose(outer_normal(hyper, *at(hyper, [2, 0.5])), -n / np.linalg.norm(n), atol=1e-12)
        np.testing.assert_allclose(outer_normal(cal3, *at(cal3, [1, 1, 1])), -np.ones(3) / np.sqrt(3), atol=1e-12)

    def test_hyperbola_curvature(self, hyper):
        assert gauss_curvature(hyper, *at(hyper, [1, 1])) == pytest.approx(2**-0.5, abs=1e-12)

    def test_copolar_curvature(self, hyper):
        Ks = copolar(hyper)
        assert gauss_curvature(Ks, *at(Ks, [-0.5, -0.5])) == pytest.approx(SQ2, abs=1e-12)

    def test_unit_sphere_patch(self):
        sphere = PseudoCone(
            cone=Cone.orthant(3), rho_fn=lambda V: 1.0 / np.linalg.norm(V, axis=-1), name="sphere", smoothness=3
        )
        chart = BoundaryChart(sphere)
        for t in chart.sample(10):
            assert gauss_curvature(sphere, t, chart) == pytest.approx(1.0, abs=1e-6)

    def test_positive_definite_and_convex(self, pert, cal3):
        for K in (pert, cal3):
            chart = BoundaryChart(K)
            for t in chart.sample(15):
                s = curvature_sample(K, t, chart)
                assert np.all(np.linalg.eigvalsh(s.g) > 0) and s.kappa > 0
                assert s.x @ s.normal < 0

    def test_class_zero_rejected(self, trunc):
        with pytest.raises(Degenerate):
            BoundaryChart(trunc)


class TestCrucialMap:
    def test_examples(self, hyper, cal3):
        np.testing.assert_allclose(crucial_map(hyper, np.array([1.0, 1.0])).x_star, [-0.5, -0.5], atol=1e-14)
        np.testing.assert_allclose(crucial_map(hyper, np.array([2.0, 0.5])).x_star, [-0.25, -1.0], atol=1e-14)
        np.testing.assert_allclose(crucial_map(cal3, np.ones(3)).x_star, -np.ones(3) / 3, atol=1e-14)

    def test_hessian_form(self, hyper):
        np.testing.assert_allclose(hyper.half_gauge_sq_hess(np.array([1.0, 1.0])), [[0, 0.5], [0.5, 0]], atol=1e-14)
        np.testing.assert_allclose(crucial_map_hessian(hyper, np.array([2.0, 0.5])), [-0.25, -1.0], atol=1e-14)

    def test_hessian_form_perturbed(self, pert):
        for x in pert.boundary_points(50):
            np.testing.assert_allclose(crucial_map_hessian(pert, x), crucial_map(pert, x).x_star, atol=1e-8)

    def test_off_boundary(self, hyper):
        with pytest.raises(NotOnBoundary):
            crucial_map(hyper, np.array([2.0, 2.0]))

    def test_gauge_values(self, hyper):
        Ks = copolar(hyper)
        assert Ks.gauge(gradient_map(hyper, np.array([1.0, 1.0]))) == pytest.approx(1.0)
        np.testing.assert_allclose(gradient_map(hyper, np.array([2.0, 2.0])), [-1.0, -1.0])
        assert Ks.gauge(np.array([-1.0, -1.0])) == pytest.approx(2.0)

    def test_outer_normal_supports(self, pert):
        """x* is an outer normal: <x*, y - x> <= 0 for boundary points y."""
        ys = pert.boundary_points(200)
        for x in pert.boundary_points(10, seed=1):
            xs = crucial_map(pert, x).x_star
            assert np.max((ys - x) @ xs) <= 1e-10


class TestAudits:
    def test_gauge_equality(self, hyper, pert):
        assert check_gauge_equality(hyper).max_error <= 1e-7
        rep = check_gauge_equality(pert, count=50)
        assert rep.holds and rep.max_error <= 1e-7

    def test_crucial_reports(self, hyper):
        reports = crucial_pair_reports(hyper, count=20)
        assert [r.identity for r in reports] == ["eq3_2.crucial_pair", "eq3_2.crucial_inverse", "eq3_2.crucial_hessian"]
        assert all(r.holds for r in reports)

    def test_product_identity_rows(self, hyper):
        rep, rows = check_product_identity(hyper, count=5)
        assert rep.holds and len(rows) == 5
        assert {"params", "x", "kappa", "rho_aff", "pair_product"} <= set(rows[0])

    def test_equiaffine_support_values(self, hyper):
        assert equiaffine_support(hyper, *at(hyper, [1, 1])) == pytest.approx(-(2 ** (2 / 3)), abs=1e-7)
        Ks = copolar(hyper)
        assert equiaffine_support(Ks, *at(Ks, [-0.5, -0.5])) == pytest.approx(-(2 ** (-2 / 3)), abs=1e-7)

    def test_calabi_orbit_constant(self, cal3):
        base = np.array([2.0, 1.0, 0.5])
        values = [equiaffine_support(cal3, *at(cal3, p)) for p in symmetric_orbit(base)]
        assert len(values) == 6
        assert np.ptp(values) <= 1e-10

    def test_affine_sphere_statistic(self, hyper, cal3):
        assert affine_sphere_statistic(hyper)["K"]["deviation"] <= 1e-6
        assert affine_sphere_statistic(hyper)["K*"]["deviation"] <= 1e-6
        stat = affine_sphere_statistic(cal3, count=10)
        assert stat["K"]["deviation"] <= 1e-4 and stat["K*"]["deviation"] <= 1e-4
        assert affine_sphere_statistic(perturbed_hyperbola(0.5), count=10)["K"]["deviation"] >= 1e-2

    def test_affine_sphere_reports(self, pert):
        reports = affine_sphere_reports(pert, count=10)
        assert [r.identity for r in reports] == ["affine_sphere", "affine_sphere.copolar"]
        assert all(r.verdict == "FAILS" and r.witness is not None for r in reports)


@pytest.mark.parametrize("family", ["hyper", "cal3", "pert"])
def test_correspondences(family, request):
    K = request.getfixturevalue(family)
    chart = BoundaryChart(K)
    tol = 1e-9 if K.has_analytic else 1e-6
    for t in chart.sample(8):
        res = correspondence_residuals(K, t, chart)
        assert res["normal_star"] <= tol and res["x_star"] <= tol and res["radius"] <= tol
        assert res["determinant"] <= (1e-8 if K.has_analytic else 1e-4)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 4.0), st.floats(0.3, 3.0))
def test_euler_relation(c, slope):
    K = hyperbola(c)
    x = np.array([1.0, slope]) * 1.7
    F2 = K.gauge(x) ** 2
    assert K.half_gauge_sq_grad(x) @ x == pytest.approx(F2, rel=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.0, 0.8), st.floats(-0.5, 0.5))
def test_euler_relation_perturbed(delta, s):
    K = perturbed_hyperbola(delta)
    x = np.array([1.0, np.exp(s)])
    assert K.half_gauge_sq_grad(x) @ x == pytest.approx(K.gauge(x) ** 2, rel=1e-9)


@settings(max_examples=20, deadline=None)
@given(st.floats(-0.9, 0.9), st.sampled_from(["hyperbola", "perturbed"]))
def test_gradient_orthogonal_to_tangents(t, which):
    K = hyperbola(1.0) if which == "hyperbola" else perturbed_hyperbola(0.2)
    chart = BoundaryChart(K)
    X = chart.X_jet(np.array([t]), 1)
    grad_F = K.half_gauge_sq_grad(X[0])  # F = 1 on the boundary, so this is grad F
    assert np.max(np.abs(grad_F @ X[1])) <= 1e-8
