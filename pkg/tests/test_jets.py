import numpy as np
import pytest
import sympy as sp

from copolar.jets import (
    affine_jet,
    compose,
    exp_jet,
    power_jet,
    reciprocal_jet,
    scale_jet,
    scalar_function_jet,
    set_partitions,
)

X0, X1 = sp.symbols("x0 x1")
VARS = (X0, X1)
POINT = {X0: 0.7, X1: -0.3}


def sympy_jet(expr, order):
    """Derivative tensors of a scalar expression at POINT, as an independent oracle."""
    jet = [float(expr.subs(POINT))]
    for r in range(1, order + 1):
        T = np.empty((2,) * r)
        for idx in np.ndindex(*T.shape):
            T[idx] = float(sp.diff(expr, *[VARS[i] for i in idx]).subs(POINT))
        jet.append(T)
    return jet


def assert_jets_close(a, b, tol=1e-12):
    for x, y in zip(a, b):
        np.testing.assert_allclose(x, y, atol=tol, rtol=tol)


def test_bell_numbers():
    assert [len(set_partitions(r)) for r in range(6)] == [1, 1, 2, 5, 15, 52]


@pytest.mark.parametrize("order", [1, 2, 3])
def test_chain_rule_against_symbolic(order):
    s = X0 * X1 + X1**2 + sp.sin(X0)
    inner = sympy_jet(s, order)
    outer = scalar_function_jet([np.exp(inner[0])] * (order + 1))
    got = compose(outer, [np.atleast_1d(inner[0])] + [d[None] for d in inner[1:]], order)
    assert_jets_close(got, sympy_jet(sp.exp(s), order))


def test_scalar_helpers():
    s = 2.0 + X0**2 * X1 + sp.cos(X1)
    base = sympy_jet(s, 3)
    assert_jets_close(reciprocal_jet(base), sympy_jet(1 / s, 3))
    assert_jets_close(power_jet(base, -0.5), sympy_jet(s ** sp.Rational(-1, 2), 3))
    assert_jets_close(exp_jet(base), sympy_jet(sp.exp(s), 3))


def test_leibniz_product():
    a = X0 + X1**2
    b = [sp.sin(X0 * X1), X0**3]
    jb = [sympy_jet(e, 2) for e in b]
    vector_jet = [np.array([j[r] for j in jb]) for r in range(3)]
    got = scale_jet(sympy_jet(a, 2), vector_jet, 2)
    for i, e in enumerate(b):
        assert_jets_close([g[i] for g in got], sympy_jet(a * e, 2))


def test_affine_jet_has_no_curvature():
    L = np.array([[1.0, 2.0], [0.0, 1.0], [3.0, -1.0]])
    jet = affine_jet(np.zeros(3), L, 3)
    np.testing.assert_array_equal(jet[1], L)
    assert not jet[2].any() and not jet[3].any()
