#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""Levi-Civita 联络、曲率与外微分（李代数上精确计算）"""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from geometry.connection import covariant_derivative, levi_civita, lie_derivative
from geometry.curvature import curvature, sectional
from geometry.forms import (
    d_invariant_form, exterior_derivative, exterior_derivative_via_connection, interior,
)
from hosts.lie_algebra import twisted_abelian
from tensors.frame_tensor import FrameTensor, LOWER, wedge
from tensors.scalar import ScalarContext, ScalarKind
from utils.errors import DegenerateError, NotAlternatingError, PreconditionError

EXACT = ScalarContext(ScalarKind.EXACT)


def koszul_oracle(alg):
    """正交标架：g(∇_i e_j, e_k) = ½(c_ijk − c_jki + c_kij)"""
    c = alg.brackets().components
    n = alg.dim
    gamma = {}
    for i, j, k in itertools.product(range(n), repeat=3):
        gamma[k, i, j] = Fraction(1, 2) * (c[i, j, k] - c[j, k, i] + c[k, i, j])
    return gamma


def ricci_oracle(alg, gamma):
    """R(e_i,e_j)e_k 逐项展开后取迹"""
    c = alg.brackets().components
    n = alg.dim
    ric = {}
    for j, k in itertools.product(range(n), repeat=2):
        total = Fraction(0)
        for i in range(n):
            for m in range(n):
                total += gamma[i, i, m] * gamma[m, j, k] - gamma[i, j, m] * gamma[m, i, k]
                total -= c[i, j, m] * gamma[i, m, k]
        ric[j, k] = total
    return ric


@pytest.mark.parametrize('fixture', ['heisenberg_1', 'heisenberg_12'])
def test_levi_civita_matches_koszul(fixture, request):
    alg, _ = request.getfixturevalue(fixture)
    gamma = levi_civita(alg).gamma.components
    for key, value in koszul_oracle(alg).items():
        assert gamma[key] == value


def test_levi_civita_is_torsion_free_and_metric(heisenberg_12):
    alg, _ = heisenberg_12
    conn = levi_civita(alg)
    assert conn.torsion().max_abs() == 0
    assert covariant_derivative(conn, alg.metric()).max_abs() == 0


def test_ricci_matches_oracle_on_twisted_abelian():
    alg = twisted_abelian('3/2')
    conn = levi_civita(alg)
    ric = curvature(alg, conn).ric.components
    for key, value in ricci_oracle(alg, koszul_oracle(alg)).items():
        assert ric[key] == value


def test_heisenberg_ricci(heisenberg_12):
    """Ric(ξ, ξ) = 4Σλ²，水平方向 −2λ_r²，数量曲率 −4Σλ²"""
    alg, _ = heisenberg_12
    curv = curvature(alg, levi_civita(alg))
    ric = curv.ric.components
    assert ric[0, 0] == 4 * (1 + 4)
    n = 2
    for r, lam in ((1, 1), (2, 2)):
        for slot in (r, n + r, 2 * n + r, 3 * n + r):
            assert ric[slot, slot] == -2 * lam * lam
    off = [ric[a, b] for a in range(9) for b in range(9) if a != b]
    assert not any(off)
    assert curv.scalar == -4 * 5
    assert curv.Q.components[0, 0] == 20


def test_sectional_curvatures(heisenberg_1):
    alg, _ = heisenberg_1
    curv = curvature(alg, levi_civita(alg))
    xi, tau1, tau4 = alg.basis(0), alg.basis(1), alg.basis(4)
    assert sectional(curv, xi, tau1) == 1
    assert sectional(curv, tau1, tau4) == -3
    with pytest.raises(DegenerateError):
        sectional(curv, tau1, tau1.scale(2))


def test_xi_is_killing_on_heisenberg(heisenberg_1):
    alg, _ = heisenberg_1
    conn = levi_civita(alg)
    assert lie_derivative(conn, alg.basis(0), alg.metric()).max_abs() == 0


def _one_form(alg, values):
    return FrameTensor.from_values(values, (LOWER,), EXACT)


@given(st.lists(st.integers(-5, 5), min_size=9, max_size=9))
def test_d_squared_vanishes(values):
    alg = twisted_abelian(1).direct_sum(twisted_abelian('1/2'), 'sum')
    alpha = _one_form(alg, values + [0])
    d_alpha = exterior_derivative(alg, alpha)
    assert exterior_derivative(alg, d_alpha).max_abs() == 0


@given(st.lists(st.integers(-5, 5), min_size=5, max_size=5))
def test_two_routes_for_d_agree(values):
    alg = twisted_abelian(2)
    alpha = _one_form(alg, values)
    conn = levi_civita(alg)
    d_brackets = exterior_derivative(alg, alpha)
    assert (exterior_derivative_via_connection(conn, alpha).components == d_brackets.components).all()
    beta = wedge(alpha, alg.basis(0, LOWER))
    assert (exterior_derivative_via_connection(conn, beta).components
            == exterior_derivative(alg, beta).components).all()


def test_d_eta_on_heisenberg(heisenberg_1):
    """dη(X, Y) = −η([X, Y])"""
    alg, _ = heisenberg_1
    d_eta = d_invariant_form(alg, alg.basis(0, LOWER)).components
    assert d_eta[1, 4] == -2 and d_eta[4, 1] == 2
    assert d_eta[2, 3] == -2
    assert d_eta[1, 2] == 0


def test_d_rejects_non_alternating(heisenberg_1):
    alg, _ = heisenberg_1
    sym = FrameTensor.identity(5, ScalarKind.EXACT)
    sym = FrameTensor(sym.components, (LOWER, LOWER))
    with pytest.raises(NotAlternatingError):
        exterior_derivative(alg, sym)


def test_d_invariant_form_needs_lie_host(disc_patch, disc_points):
    host = disc_patch.at(disc_points[0])
    with pytest.raises(PreconditionError):
        d_invariant_form(host, host.field('eta'))


def test_interior_product(heisenberg_1):
    alg, _ = heisenberg_1
    d_eta = exterior_derivative(alg, alg.basis(0, LOWER))
    contracted = interior(alg.basis(1), d_eta)
    assert contracted.components[4] == -2
    assert interior(alg.basis(0), d_eta).max_abs() == 0
