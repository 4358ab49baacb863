"""Truncated Taylor jets: derivative tensors of compositions and products.

A jet of order ``q`` is a list ``[f, Df, D2f, ..., Dqf]`` where ``Djf`` has shape
``out_shape + (k,)*j`` for a map of ``k`` variables. Compositions use the
multivariate Faa di Bruno formula summed over set partitions, so every output
tensor is symmetric by construction.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

_RESULT = "abcdefgh"
_INNER = "pqrstuvw"


@lru_cache(maxsize=None)
def set_partitions(r: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All partitions of ``range(r)`` into nonempty blocks."""
    if r == 0:
        return ((),)
    out = []
    for part in set_partitions(r - 1):
        last = r - 1
        out.append(part + ((last,),))
        for i in range(len(part)):
            out.append(part[:i] + (part[i] + (last,),) + part[i + 1 :])
    return tuple(out)


def compose(outer: list, inner: list, order: int | None = None) -> list:
    """Jet of ``g(f(x))``.

    ``outer[j]`` holds the j-th derivative tensor of ``g`` at ``f(x)`` with shape
    ``out_shape + (m,)*j``; ``inner`` is the jet of ``f`` with ``inner[j]`` of
    shape ``(m,) + (k,)*j``.
    """
    if order is None:
        order = min(len(outer), len(inner)) - 1
    result = [np.asarray(outer[0], dtype=float)]
    for r in range(1, order + 1):
        total = 0.0
        for blocks in set_partitions(r):
            q = len(blocks)
            subs = ["..." + _INNER[:q]]
            ops = [outer[q]]
            for b, block in enumerate(blocks):
                subs.append(_INNER[b] + "".join(_RESULT[p] for p in block))
                ops.append(inner[len(block)])
            total = total + np.einsum(",".join(subs) + "->..." + _RESULT[:r], *ops)
        result.append(total)
    return result


def scale_jet(a: list, b: list, order: int | None = None) -> list:
    """Jet of the product of a scalar field ``a`` with an array-valued field ``b`` (Leibniz rule)."""
    if order is None:
        order = min(len(a), len(b)) - 1
    result = []
    for r in range(order + 1):
        total = 0.0
        idx = range(r)
        for size in range(r + 1):
            for subset in itertools.combinations(idx, size):
                rest = [p for p in idx if p not in subset]
                sa = "".join(_RESULT[p] for p in subset)
                sb = "..." + "".join(_RESULT[p] for p in rest)
                total = total + np.einsum(f"{sa},{sb}->...{_RESULT[:r]}", a[size], b[r - size])
        result.append(total)
    return result


def affine_jet(value, linear, order: int) -> list:
    """Jet of an affine map ``t -> value + linear @ t``."""
    value = np.asarray(value, dtype=float)
    linear = np.asarray(linear, dtype=float)
    k = linear.shape[-1]
    jet = [value, linear]
    for j in range(2, order + 1):
        jet.append(np.zeros(value.shape + (k,) * j))
    return jet[: order + 1]


def scalar_function_jet(derivs) -> list:
    """Outer jet of a scalar function of one variable given its derivatives ``[g, g', g'', ...]``.

    The inner variable is treated as a vector of length one so it can be fed to
    :func:`compose` against a scalar-valued inner jet promoted with
    :func:`promote_scalar`.
    """
    return [np.asarray(d, dtype=float).reshape((1,) * j) if j else np.asarray(d, dtype=float) for j, d in enumerate(derivs)]


def promote_scalar(jet: list) -> list:
    """View a scalar jet as the jet of a map into R^1."""
    return [np.asarray(d)[None, ...] for d in jet]


def reciprocal_jet(jet: list) -> list:
    """Jet of ``1/s`` for a scalar jet ``s``."""
    s = float(jet[0])
    order = len(jet) - 1
    derivs = [1.0 / s]
    for j in range(1, order + 1):
        derivs.append(derivs[-1] * (-j) / s)
    return compose(scalar_function_jet(derivs), promote_scalar(jet), order)


def power_jet(jet: list, exponent: float) -> list:
    """Jet of ``s**exponent`` for a positive scalar jet ``s``."""
    s = float(jet[0])
    order = len(jet) - 1
    derivs = []
    coeff = 1.0
    for j in range(order + 1):
        derivs.append(coeff * s ** (exponent - j))
        coeff *= exponent - j
    return compose(scalar_function_jet(derivs), promote_scalar(jet), order)


def exp_jet(jet: list) -> list:
    """Jet of ``exp(s)`` for a scalar jet ``s``."""
    e = float(np.exp(jet[0]))
    order = len(jet) - 1
    return compose(scalar_function_jet([e] * (order + 1)), promote_scalar(jet), order)


def shift(jet: list) -> list:
    """Jet of the gradient field from the jet of a scalar field (drops the value, lowers one order)."""
    return list(jet[1:])
