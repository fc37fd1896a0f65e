#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""齐性变形与 Kähler 因子乘积"""

from fractions import Fraction

import numpy as np
import pytest

from structures.acm import derived_operators, patch_structure, validate
from structures.classification import classify
from structures.deformations import KahlerFactor, homothetic_deform, product_with_kahler
from structures.rank import rank_of_eta
from utils.errors import PreconditionError


def test_homothety_scales_psi(heisenberg_1):
    _, triple = heisenberg_1
    s = triple.structures[0]
    deformed = homothetic_deform(s, '2')
    assert deformed.name.endswith('_h2')
    assert validate(deformed).passed
    assert deformed.host.metric().components[1, 1] == 4
    assert deformed.xi.components[0] == Fraction(1, 2)
    assert (deformed.psi.components == s.psi.components * Fraction(1, 2)).all()
    assert derived_operators(deformed).spectrum.matches({-0.25: 4, 0.0: 1})
    assert classify(deformed).flag('anti_quasi_sasakian')


@pytest.mark.parametrize('lam', [0, '-1/2'])
def test_homothety_needs_positive_factor(heisenberg_1, lam):
    _, triple = heisenberg_1
    with pytest.raises(PreconditionError):
        homothetic_deform(triple.structures[0], lam)


def test_homothety_on_patch(flat_patch):
    x = flat_patch.sample_points(1, seed=2)[0]
    deformed = homothetic_deform(patch_structure(flat_patch, x), 2.0)
    assert deformed.host.patch.name.endswith('_h2')
    value = [v for v, _ in derived_operators(deformed).spectrum.clusters if abs(v) > 1e-8]
    assert value == [pytest.approx(-1.0 / 16.0, rel=1e-8)]


def test_product_gains_flat_kernel(heisenberg_1):
    _, triple = heisenberg_1
    product = product_with_kahler(triple.structures[0], KahlerFactor(2))
    assert product.dim == 7
    assert validate(product).passed
    assert classify(product).flag('anti_quasi_sasakian')
    report = rank_of_eta(product)
    assert (report.p, report.q) == (1, 1)
    assert report.dimension_identity


def test_trivial_factor_returns_structure(heisenberg_1):
    _, triple = heisenberg_1
    s = triple.structures[0]
    assert product_with_kahler(s, KahlerFactor(0)) is s


@pytest.mark.parametrize('factor', [
    KahlerFactor(3),
    KahlerFactor(2, metric=[[1, 0], [0, 2]]),
    KahlerFactor(2, complex_structure=[[0, 1], [1, 0]]),
])
def test_invalid_kahler_factor(heisenberg_1, factor):
    _, triple = heisenberg_1
    with pytest.raises(PreconditionError):
        product_with_kahler(triple.structures[0], factor)


def test_product_on_patch(flat_patch):
    x = flat_patch.sample_points(1, seed=0)[0]
    product = product_with_kahler(patch_structure(flat_patch, x), KahlerFactor(2))
    assert product.dim == 7
    assert validate(product).passed
    assert rank_of_eta(product).q == 1


def test_product_requires_anti_quasi_sasakian(heisenberg_12):
    _, triple = heisenberg_12
    with pytest.raises(PreconditionError):
        product_with_kahler(triple.structures[2], KahlerFactor(2))
    with pytest.raises(PreconditionError):
        product_with_kahler(triple.structures[2], KahlerFactor(0))


def test_product_matches_heisenberg_with_zero_weight(heisenberg_1, heisenberg_10):
    """heisenberg(1) × ℝ⁴ 在标架置换下就是 heisenberg(1, 0)"""
    _, base = heisenberg_1
    alg10, target_triple = heisenberg_10
    target = target_triple.structures[0]
    flat = [2, 4, 6, 8]
    j = target.phi.components[np.ix_(flat, flat)]
    product = product_with_kahler(base.structures[0], KahlerFactor(4, complex_structure=j.tolist()))
    # 乘积标架 (ξ, τ_1..τ_4, k_1..k_4) 在目标标架中的位置
    perm = [0, 1, 3, 5, 7, 2, 4, 6, 8]
    assert product.dim == 9
    assert (product.phi.components == target.phi.components[np.ix_(perm, perm)]).all()
    assert (product.host.brackets().components
            == alg10.brackets().components[np.ix_(perm, perm, perm)]).all()
    assert (product.xi.components == target.xi.components[perm]).all()
    assert (product.eta.components == target.eta.components[perm]).all()
    assert (product.g.components == np.eye(9, dtype=int)).all()
