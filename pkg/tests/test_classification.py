#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""分类谓词、Chinea-Gonzalez 类与 η 的秩"""

import numpy as np
import pytest

from hosts.lie_algebra import LieAlgebraData, twisted_abelian
from structures.acm import AcmStructure, standard_structure
from structures.classification import CLASS_FLAGS, classify
from structures.rank import rank_of_eta
from tensors.frame_tensor import LOWER
from utils.errors import PreconditionError


def flags(report):
    return {name for name in CLASS_FLAGS if report.flag(name)}


def test_heisenberg_phi1_phi2_are_anti_quasi_sasakian(heisenberg_12):
    _, triple = heisenberg_12
    for s in triple.structures[:2]:
        report = classify(s)
        assert report.flag('anti_quasi_sasakian')
        assert report.flag('anti_normal')
        assert report.flag('d_phi_zero')
        assert report.flag('xi_killing')
        assert report.flag('d_eta_phi_anti_invariant')
        assert not report.flag('normal')
        assert not report.flag('quasi_sasakian')
        assert not report.flag('cokahler')
        assert report.cg['C10+C11'].passed


def test_phi3_is_sasakian_only_for_unit_weight(heisenberg_1, heisenberg_12):
    _, unit = heisenberg_1
    report = classify(unit.structures[2])
    assert {'sasakian', 'k_contact', 'contact_metric', 'normal'} <= flags(report)
    assert not report.flag('anti_quasi_sasakian')

    _, weighted = heisenberg_12
    report = classify(weighted.structures[2])
    assert report.flag('normal')
    assert not report.flag('contact_metric')
    assert not report.flag('sasakian')


def test_abelian_is_cokahler(abelian_structure):
    report = classify(abelian_structure)
    assert {'cokahler', 'quasi_sasakian', 'anti_quasi_sasakian', 'd_eta_zero',
            'transversely_kahler', 'generalized_quasi_sasakian'} <= flags(report)
    assert not report.flag('contact_metric')


def test_classify_rejects_invalid_structure(heisenberg_1):
    alg, _ = heisenberg_1
    bad = AcmStructure(alg, np.zeros((5, 5), dtype=int), alg.basis(0), alg.basis(0, LOWER), 'bad')
    with pytest.raises(PreconditionError):
        classify(bad)


def test_report_dict_layout(heisenberg_1):
    _, triple = heisenberg_1
    out = classify(triple.structures[0]).to_dict()
    assert set(out) == {'structure', 'classes', 'chinea_gonzalez', 'transverse', 'validity', 'rank'}
    assert list(out['classes'])[0] == 'acm_valid'
    assert out['classes']['anti_quasi_sasakian']['passed'] is True
    assert set(out['chinea_gonzalez']) == {
        'C6+C7', 'C10+C11', 'C6+C7+C10+C11', 'C6', 'C7', 'C10', 'C11'}


def test_failed_flag_carries_violation(heisenberg_12):
    _, triple = heisenberg_12
    check = classify(triple.structures[2]).checks['contact_metric']
    assert not check.passed
    assert check.violation > 0
    assert check.witness is not None


def test_twisted_abelian_rotates_phi():
    # ad ξ 与 φ 反交换：η 闭、ξ Killing，但 φ 不沿 ξ 不变
    s = standard_structure(twisted_abelian(1), 'twisted')
    report = classify(s)
    assert report.flag('d_eta_zero')
    assert report.flag('xi_killing')
    assert not report.flag('lie_xi_phi_zero')
    assert not report.flag('d_phi_zero')
    assert not report.flag('cokahler')


@pytest.mark.parametrize('fixture, p, q', [
    ('heisenberg_1', 1, 0),
    ('heisenberg_12', 2, 0),
    ('heisenberg_10', 1, 2),
])
def test_rank_of_eta(fixture, p, q, request):
    alg, triple = request.getfixturevalue(fixture)
    report = rank_of_eta(triple.structures[0])
    assert (report.p, report.q) == (p, q)
    assert report.rank_eta == 4 * p + 1
    assert report.dimension_identity
    assert report.dim == alg.dim


def test_rank_of_cokahler(abelian_structure):
    report = rank_of_eta(abelian_structure)
    assert report.rank_eta == 1
    assert (report.p, report.q) == (0, 2)
    out = report.to_dict()
    assert out['e_dim'] == 4 and len(out['e_basis']) == 4
    assert 'sampled' not in out


def test_rank_of_general_contact_form():
    # [e1, e2] = e0 only: rk η = 3，不是 4 的倍数加 1
    alg = LieAlgebraData.from_entries(5, [(1, 2, 0, 1)])
    s = standard_structure(alg)
    report = rank_of_eta(s)
    assert report.rank_eta == 3
    assert not report.dimension_identity
