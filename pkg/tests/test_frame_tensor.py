#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""标架张量：签名、缩并、交错化与射流乘积法则"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tensors.frame_tensor import (
    FrameTensor, LOWER, UPPER, antisymmetrize, einsum, einsum_arrays, permutation_parity, wedge,
)
from tensors.scalar import ScalarContext, ScalarKind
from utils.errors import DimensionMismatchError, ScalarKindError, SlotVarianceError

EXACT = ScalarContext(ScalarKind.EXACT)

small_ints = st.integers(min_value=-4, max_value=4)


def square(dim):
    return st.lists(st.lists(small_ints, min_size=dim, max_size=dim), min_size=dim, max_size=dim)


def test_signature_must_match_rank():
    with pytest.raises(DimensionMismatchError):
        FrameTensor(np.zeros((3, 3)), (UPPER,))
    with pytest.raises(SlotVarianceError):
        FrameTensor(np.zeros(3), ('x',))


def test_exact_and_float_do_not_mix():
    a = FrameTensor.identity(3, ScalarKind.EXACT)
    b = FrameTensor.identity(3, ScalarKind.FLOAT)
    with pytest.raises(ScalarKindError):
        a + b
    with pytest.raises(ScalarKindError):
        a.scale(0.5)


def test_identity_trace_is_dim():
    assert FrameTensor.identity(5, ScalarKind.EXACT).trace().value == 5


@given(square(3), square(3))
def test_compose_matches_matrix_product(a, b):
    ta = FrameTensor.from_values(a, (UPPER, LOWER), EXACT)
    tb = FrameTensor.from_values(b, (UPPER, LOWER), EXACT)
    expected = np.array(a, dtype=object).dot(np.array(b, dtype=object))
    assert (ta.compose(tb).components == expected).all()


def test_contract_requires_upper_and_lower():
    t = FrameTensor.zeros(3, (LOWER, LOWER), ScalarKind.EXACT)
    with pytest.raises(SlotVarianceError):
        t.contract(0, 1)


@given(st.lists(small_ints, min_size=3, max_size=3), st.lists(small_ints, min_size=3, max_size=3))
def test_wedge_of_covectors_is_determinant_convention(a, b):
    ta = FrameTensor.from_values(a, (LOWER,), EXACT)
    tb = FrameTensor.from_values(b, (LOWER,), EXACT)
    w = wedge(ta, tb)
    for i in range(3):
        for j in range(3):
            assert w[i, j] == Fraction(a[i] * b[j] - a[j] * b[i])


@given(square(3))
def test_antisymmetrize_is_idempotent(rows):
    t = FrameTensor.from_values(rows, (LOWER, LOWER), EXACT)
    once = antisymmetrize(t)
    assert (antisymmetrize(once).components == once.components).all()
    assert (once.components == -once.components.T).all()


@pytest.mark.parametrize('perm, sign', [
    ((0, 1, 2), 1), ((1, 0, 2), -1), ((1, 2, 0), 1), ((2, 1, 0), -1),
])
def test_permutation_parity(perm, sign):
    assert permutation_parity(perm) == sign


def test_transpose_moves_slots():
    t = FrameTensor(np.arange(8.0).reshape(2, 2, 2), (UPPER, LOWER, LOWER))
    s = t.transpose(2, 0, 1)
    assert s.signature == (LOWER, UPPER, LOWER)
    assert s[1, 0, 1] == t[0, 1, 1]


def _field(value, grad, hess):
    return FrameTensor(np.asarray(value, dtype=float), (LOWER,),
                       np.asarray(grad, dtype=float), np.asarray(hess, dtype=float), 2)


def test_einsum_propagates_product_rule():
    """(f·g)' = f'g + fg'，(f·g)'' = f''g + 2f'g' + fg''（一维标架）"""
    f = _field([2.0], [[3.0]], [[[5.0]]])
    g = _field([7.0], [[11.0]], [[[13.0]]])
    prod = einsum('i,j->ij', f, g, signature=(LOWER, LOWER))
    assert prod.components[0, 0] == pytest.approx(14.0)
    assert prod.grad[0, 0, 0] == pytest.approx(3.0 * 7.0 + 2.0 * 11.0)
    assert prod.hess[0, 0, 0, 0] == pytest.approx(5.0 * 7.0 + 2 * 3.0 * 11.0 + 2.0 * 13.0)


def test_frame_derivative_of_constant_is_zero():
    t = FrameTensor.identity(3, ScalarKind.EXACT)
    d = t.frame_derivative()
    assert d.signature == (UPPER, LOWER, LOWER)
    assert d.max_abs() == 0


def test_to_float_keeps_values():
    t = FrameTensor.from_values([['1/2', 0], [0, '-3']], (UPPER, LOWER), EXACT)
    f = t.to_float()
    assert f.kind is ScalarKind.FLOAT
    assert f[0, 0] == 0.5 and f[1, 1] == -3.0


def _fractions(rows):
    return np.array([[Fraction(x) for x in row] for row in rows], dtype=object)


@given(square(3), square(3))
def test_exact_einsum_matches_integer_product(a, b):
    product = einsum_arrays('ij,jk->ik', _fractions(a), _fractions(b))
    assert product.dtype == object
    assert (product == np.array(a).dot(np.array(b))).all()
    assert all(isinstance(x, Fraction) for x in product.flat)


@given(square(3), st.lists(small_ints, min_size=3, max_size=3))
def test_exact_einsum_agrees_with_numpy(rows, vec):
    m = _fractions(rows)
    v = np.array([Fraction(x) for x in vec], dtype=object)
    ints = np.array(rows)
    assert einsum_arrays('ii->', m) == np.trace(ints)
    assert (einsum_arrays('ij,j->i', m, v) == ints.dot(np.array(vec))).all()
    assert (einsum_arrays('ij->ji', m) == ints.T).all()
    cube = np.einsum('ij,k->ijk', ints, np.array(vec))
    exact_cube = einsum_arrays('ij,k->ijk', m, v)
    assert (einsum_arrays('ijk,kj->i', exact_cube, m) == np.einsum('ijk,kj->i', cube, ints)).all()
