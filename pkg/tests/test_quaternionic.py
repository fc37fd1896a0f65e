#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""三元组：四元数恒等式、双反拟 Sasakian、五维 SU(2) 与 K(ξ, X) = 1 升级"""

import pytest

from structures.quaternionic import (
    build_weighted_heisenberg, double_aqs_check, hypo_su2_check, k1_promote, lemma_cmd_check,
    quaternionic_check, structure_equations_check,
)
from utils.errors import PreconditionError


@pytest.mark.parametrize('fixture', ['heisenberg_1', 'heisenberg_12', 'heisenberg_10'])
def test_quaternionic_identities(fixture, request):
    _, triple = request.getfixturevalue(fixture)
    table = quaternionic_check(triple)
    assert table.passed
    assert len(table.checks) == 6


def test_double_aqs_for_unit_weights(heisenberg_11):
    _, triple = heisenberg_11
    table = double_aqs_check(triple)
    assert table.passed
    assert 'ricci_null_sasakian' in table


def test_double_aqs_fails_for_unequal_weights(heisenberg_12):
    _, triple = heisenberg_12
    table = double_aqs_check(triple)
    assert table['d_phi1_zero'].passed and table['d_phi2_zero'].passed
    assert not table['d_eta_twice_phi3'].passed
    assert not table.passed


def test_structure_equations_all_or_nothing(heisenberg_11, heisenberg_12):
    _, equal = heisenberg_11
    assert structure_equations_check(equal).passed
    _, unequal = heisenberg_12
    table = structure_equations_check(unequal)
    assert not any(c.passed for c in table)


def test_lemma_holds_for_any_weights(heisenberg_12):
    _, triple = heisenberg_12
    assert lemma_cmd_check(triple).passed


def test_su2_conditions_in_dimension_five(heisenberg_1):
    _, triple = heisenberg_1
    report = hypo_su2_check(triple)
    assert report.compatibility.passed
    assert report.k_contact_hypo
    assert report.contact_calabi_yau
    assert report.lie_criterion.passed
    assert report.to_dict()['su2_compatible'] is True


def test_su2_needs_dimension_five(heisenberg_11):
    _, triple = heisenberg_11
    with pytest.raises(PreconditionError):
        hypo_su2_check(triple)


def test_unit_spectrum_promotes_to_triple(heisenberg_1):
    _, triple = heisenberg_1
    promoted = k1_promote(triple.structures[0])
    assert promoted.realized == [('A', 'phi', 'psi'), ('phi', 'psi', 'A'), ('psi', 'A', 'phi')]
    assert promoted.double_aqs.passed
    assert promoted.to_dict()['double_aqs_sasakian'] is True
    assert promoted.triple.labels == ('A', 'phi', 'psi')


def test_promotion_rejects_other_spectra(heisenberg_12):
    _, triple = heisenberg_12
    with pytest.raises(PreconditionError, match='ψ²'):
        k1_promote(triple.structures[0])


def test_weights_are_required():
    with pytest.raises(PreconditionError):
        build_weighted_heisenberg([])


def test_builder_names_and_dimension():
    alg, triple = build_weighted_heisenberg(['1/2', 3])
    assert alg.dim == 9
    assert triple.n == 2
    assert triple.structures[0].name == 'heisenberg(1/2, 3)/phi1'
    assert alg.brackets().components[1, 7, 0] == 1
