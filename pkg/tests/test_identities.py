#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""反拟 Sasakian 恒等式、结构方程与 Ricci 相关检验"""

from fractions import Fraction

import pytest

from geometry.curvature import sectional
from hosts.lie_algebra import twisted_abelian
from structures.acm import standard_structure
from structures.einstein import (
    constant_curvature_check, eta_einstein_fit, xi_sectional_curvatures,
)
from structures.identities import (
    aqs_structure_equation, closed_triplet_check, general_identities, identity_suite,
    psi_norm_squared, sasakian_structure_equation, suite_passed,
)
from structures.quaternionic import build_weighted_heisenberg


@pytest.mark.parametrize('index', [0, 1])
def test_identity_suite_on_heisenberg(heisenberg_12, index):
    _, triple = heisenberg_12
    table = identity_suite(triple.structures[index])
    assert suite_passed(table).passed, [c.name for c in table.failures()]
    assert 'q_commutes_phi' in table and 'gqs_matches_cg' in table


def test_identity_suite_on_flat_block(heisenberg_10):
    _, triple = heisenberg_10
    assert suite_passed(identity_suite(triple.structures[0])).passed


def test_identity_suite_on_cokahler(abelian_structure):
    assert suite_passed(identity_suite(abelian_structure)).passed


def test_sasakian_structure_fails_aqs_identities(heisenberg_1):
    _, triple = heisenberg_1
    table = identity_suite(triple.structures[2])
    assert not table['nabla_xi_phi'].passed
    assert table['nabla_xi_phi'].witness is not None
    assert not suite_passed(table).passed


def test_general_identities_hold_everywhere(heisenberg_12):
    _, triple = heisenberg_12
    for s in triple.structures:
        assert general_identities(s).passed
    assert general_identities(standard_structure(twisted_abelian('5/3'))).passed


def test_structure_equations(heisenberg_1):
    _, triple = heisenberg_1
    s1, _, s3 = triple.structures
    assert aqs_structure_equation(s1).passed
    assert closed_triplet_check(s1).passed
    assert sasakian_structure_equation(s3).passed
    assert not sasakian_structure_equation(s1).passed
    assert not aqs_structure_equation(s3)['structure_equation'].passed


def test_psi_norm_equals_ric_xi_xi(heisenberg_12):
    alg, triple = heisenberg_12
    s = triple.structures[0]
    # 每个权重 λ 贡献 4λ²
    assert psi_norm_squared(s) == 4 * (1 + 4)
    assert s.curvature.ric.components[0, 0] == psi_norm_squared(s)


def test_eta_einstein_with_equal_weights(heisenberg_11):
    """λ 全为 1 时 μ = −2，ν = 4n + 2"""
    _, triple = heisenberg_11
    fit = eta_einstein_fit(triple.structures[0])
    assert fit.is_eta_einstein
    assert fit.mu == -2 and fit.nu == 10
    assert fit.residual == 0
    assert fit.to_dict()['scalar_curvature'] == fit.scalar


@pytest.mark.parametrize('n', [1, 2, 3])
def test_unit_weights_eta_einstein_constants(n):
    """μ = −2，ν = 4n + 2，s = −4n，且 K(ξ, e) = 1 对每个水平标架向量"""
    alg, triple = build_weighted_heisenberg(['1'] * n)
    s = triple.structures[0]
    fit = eta_einstein_fit(s)
    assert fit.is_eta_einstein
    assert (fit.mu, fit.nu, fit.scalar) == (-2, 4 * n + 2, -4 * n)
    assert fit.residual == 0
    xi = alg.basis(0)
    assert [sectional(s.curvature, xi, alg.basis(i)) for i in range(1, 4 * n + 1)] == [1] * (4 * n)


def test_unequal_weights_are_not_eta_einstein(heisenberg_12):
    _, triple = heisenberg_12
    fit = eta_einstein_fit(triple.structures[0])
    assert not fit.is_eta_einstein
    assert fit.residual > 0


def test_heisenberg_1_eta_einstein(heisenberg_1):
    _, triple = heisenberg_1
    fit = eta_einstein_fit(triple.structures[1])
    assert (fit.mu, fit.nu) == (Fraction(-2), Fraction(6))


def test_heisenberg_curvature_is_not_constant(heisenberg_1):
    _, triple = heisenberg_1
    verdict = constant_curvature_check(triple.structures[0])
    assert not verdict.constant
    assert verdict.sectional_range[0] < 0 < verdict.sectional_range[1]
    assert not verdict.consequences.checks


def test_flat_cokahler_has_zero_kappa(abelian_structure):
    verdict = constant_curvature_check(abelian_structure)
    assert verdict.constant
    assert verdict.kappa == 0
    assert verdict.consequences['kappa_zero'].passed
    assert verdict.consequences['psi_zero'].passed
    assert verdict.to_dict()['sectional_max'] == 0.0


def test_xi_sectional_matches_psi_spectrum(heisenberg_12):
    _, triple = heisenberg_12
    report = xi_sectional_curvatures(triple.structures[0])
    assert report.nonnegative and report.matches_spectrum
    assert sorted(round(k, 9) for _, k in report.pairs) == [1.0] * 4 + [4.0] * 4
