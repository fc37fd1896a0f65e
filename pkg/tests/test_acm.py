#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""几乎切触度量结构：有效性、派生算子与 Nijenhuis 两条路线"""

from fractions import Fraction

import numpy as np
import pytest

from structures.acm import (
    AcmStructure, derived_operators, nijenhuis_via_brackets, nijenhuis_via_connection,
    standard_phi, standard_structure, validate,
)
from structures.quaternionic import build_weighted_heisenberg
from tensors.frame_tensor import FrameTensor, UPPER, LOWER
from tensors.scalar import ScalarKind
from utils.errors import DimensionMismatchError


def weight_matrix(alg, weights):
    """块对角的 Λ：第 r 块的四个标架向量乘 λ_r"""
    n = len(weights)
    lam = FrameTensor.zeros(alg.dim, (UPPER, LOWER), ScalarKind.EXACT)
    for r, w in enumerate(weights, start=1):
        for slot in (r, n + r, 2 * n + r, 3 * n + r):
            lam.components[slot, slot] = Fraction(w)
    return lam


def test_heisenberg_structures_are_valid(heisenberg_12):
    _, triple = heisenberg_12
    for s in triple.structures:
        assert validate(s).passed


def test_invalid_structure_reports_witness(heisenberg_1):
    alg, _ = heisenberg_1
    bad = AcmStructure(alg, np.zeros((5, 5), dtype=int), alg.basis(0), alg.basis(0, LOWER), 'bad')
    table = validate(bad)
    assert not table.passed
    assert not table['phi_squared'].passed
    assert table['phi_squared'].witness is not None
    assert table['eta_xi'].passed


def test_dimension_mismatch_is_rejected(heisenberg_1):
    alg, _ = heisenberg_1
    with pytest.raises(DimensionMismatchError):
        AcmStructure(alg, standard_phi(3, ScalarKind.EXACT), alg.basis(0), alg.basis(0, LOWER))


def test_standard_phi_needs_odd_dimension():
    with pytest.raises(DimensionMismatchError):
        standard_phi(4, ScalarKind.EXACT)


def test_psi_on_heisenberg(heisenberg_12):
    """ψτ_r = λ_r τ_{3n+r}，ψτ_{3n+r} = −λ_r τ_r"""
    _, triple = heisenberg_12
    psi = triple.structures[0].psi.components
    assert psi[7, 1] == 1 and psi[1, 7] == -1
    assert psi[8, 2] == 2 and psi[2, 8] == -2
    assert psi[6, 4] == 2 and psi[4, 6] == -2
    assert not any(psi[:, 0])


@pytest.mark.parametrize('weights', [[1, 2], [3, 5]])
def test_a_operators_on_heisenberg(weights):
    """A_{φ1} = −Λφ_2，A_{φ2} = Λφ_1，A_{φ3} = −Λ|_D"""
    alg, triple = build_weighted_heisenberg([str(w) for w in weights])
    lam = weight_matrix(alg, weights)
    s1, s2, s3 = triple.structures
    assert (s1.op_a.components == (-lam.compose(s2.phi)).components).all()
    assert (s2.op_a.components == lam.compose(s1.phi).components).all()
    assert (s3.op_a.components == (-lam).components).all()


def test_derived_operators_spectrum(heisenberg_12):
    _, triple = heisenberg_12
    ops = derived_operators(triple.structures[0])
    assert ops.spectrum.matches({-4.0: 4, -1.0: 4, 0.0: 1})
    assert ops.kernel_dim == 1 and ops.e_dim == 0
    assert ops.checks.passed
    assert 'psi_route' in ops.checks and 'a_route' in ops.checks


def test_spectrum_for_three_weights():
    _, triple = build_weighted_heisenberg(['1', '2', '3'])
    for s in triple.structures[:2]:
        ops = derived_operators(s)
        assert ops.spectrum.dim == 13
        assert ops.spectrum.matches({-9.0: 4, -4.0: 4, -1.0: 4, 0.0: 1})


def test_kernel_of_psi_contains_flat_block(heisenberg_10):
    _, triple = heisenberg_10
    ops = derived_operators(triple.structures[0])
    assert ops.kernel_dim == 5 and ops.e_dim == 4
    assert ops.spectrum.matches({-1.0: 4, 0.0: 5})
    assert ops.checks['psi_kernel'].passed


def test_psi_form_is_half_d_eta(heisenberg_12):
    _, triple = heisenberg_12
    s = triple.structures[1]
    assert (s.psi_form.scale(2).components == s.d_eta.components).all()


def test_nijenhuis_routes_agree(heisenberg_12):
    _, triple = heisenberg_12
    for s in triple.structures:
        via_c = nijenhuis_via_connection(s).components
        via_b = nijenhuis_via_brackets(s).components
        assert (via_c == via_b).all()


def test_abelian_structure_is_parallel(abelian_structure):
    s = abelian_structure
    assert validate(s).passed
    assert s.psi.max_abs() == 0
    assert s.nijenhuis.max_abs() == 0
    ops = derived_operators(s)
    assert ops.spectrum.matches({0.0: 5})
    assert ops.kernel_dim == 5 and ops.e_dim == 4


def test_describe_round_trips_components(heisenberg_1):
    _, triple = heisenberg_1
    info = triple.structures[2].describe()
    assert info['name'].endswith('/phi3')
    assert info['xi'] == [1, 0, 0, 0, 0]
    assert len(info['phi']) == 5


def test_reeb_index_moves_xi():
    from hosts.lie_algebra import LieAlgebraData
    alg = LieAlgebraData.abelian(3)
    s = standard_structure(alg, reeb_index=2)
    assert s.xi.components[2] == 1
    assert validate(s).passed
