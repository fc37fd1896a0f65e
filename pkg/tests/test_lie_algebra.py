#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""李代数宿主：反对称性、Jacobi 恒等式、换标架与直和"""

from fractions import Fraction

import numpy as np
import pytest

from hosts.lie_algebra import (
    LieAlgebraData, heisenberg_entries, heisenberg_labels, jacobi_check, twisted_abelian,
)
from tensors.scalar import ScalarContext, ScalarKind
from utils.errors import DegenerateError, NotAlternatingError, NotSymmetricError


def test_diagonal_bracket_must_vanish():
    with pytest.raises(NotAlternatingError):
        LieAlgebraData.from_entries(3, [(1, 1, 0, 1)])
    # 零值的对角条目允许
    LieAlgebraData.from_entries(3, [(1, 1, 0, 0)])


def test_entries_are_antisymmetrized(heisenberg_1):
    alg, _ = heisenberg_1
    c = alg.brackets().components
    assert c[1, 4, 0] == 2 and c[4, 1, 0] == -2
    assert c[2, 3, 0] == 2 and c[3, 2, 0] == -2
    assert alg.nonzero_brackets() == [(1, 4, 0, 2), (2, 3, 0, 2)]


def test_heisenberg_entries_layout():
    assert heisenberg_entries([Fraction(1), Fraction(3)]) == [
        (1, 7, 0, 2), (3, 5, 0, 2), (2, 8, 0, 6), (4, 6, 0, 6),
    ]
    assert heisenberg_labels(1) == ['xi', 'tau1', 'tau2', 'tau3', 'tau4']


def test_jacobi_holds_on_examples(heisenberg_12):
    alg, _ = heisenberg_12
    assert jacobi_check(alg).passed
    assert jacobi_check(twisted_abelian('2/3')).passed
    assert jacobi_check(LieAlgebraData.abelian(4)).passed


def test_jacobi_failure_has_witness():
    # [e0, e1] = e2, [e0, e2] = e0 不满足 Jacobi
    alg = LieAlgebraData.from_entries(3, [(0, 1, 2, 1), (0, 2, 0, 1)])
    check = jacobi_check(alg)
    assert not check.passed
    assert check.violation == 1
    assert sorted(check.witness) == [0, 1, 2]


def test_metric_must_be_positive_definite():
    with pytest.raises(DegenerateError):
        LieAlgebraData.from_entries(2, [], metric=[[1, 2], [2, 1]])
    with pytest.raises(NotSymmetricError):
        LieAlgebraData.from_entries(2, [], metric=[[1, 1], [0, 1]])


def test_float_algebra_keeps_tolerance():
    ctx = ScalarContext(ScalarKind.FLOAT, 1e-7)
    alg = LieAlgebraData.from_entries(3, [(0, 1, 2, 0.5)], ctx=ctx)
    assert alg.kind is ScalarKind.FLOAT
    assert alg.ctx.tol == 1e-7
    assert alg.to_float() is alg


def test_change_frame_scales_metric_and_constants(heisenberg_1):
    alg, _ = heisenberg_1
    p = np.diag([Fraction(2)] + [Fraction(1)] * 4).astype(object)
    new, change = alg.change_frame(p)
    # e'_0 = 2ξ：度量 g'_00 = 4，[τ1, τ4] = 2ξ = e'_0
    assert new.metric().components[0, 0] == 4
    assert new.brackets().components[1, 4, 0] == 1
    assert jacobi_check(new).passed
    xi = change.apply(alg.basis(0))
    assert xi.components[0] == Fraction(1, 2)


def test_direct_sum_is_block_diagonal(heisenberg_1):
    alg, _ = heisenberg_1
    total = alg.direct_sum(LieAlgebraData.abelian(2))
    assert total.dim == 7
    assert total.brackets().components[1, 4, 0] == 2
    assert not any(total.brackets().components[5:, :, :].flat)
    assert total.labels[-1] == 'abelian_2.e1'
    assert jacobi_check(total).passed


def test_describe_lists_brackets(heisenberg_1):
    alg, _ = heisenberg_1
    info = alg.describe()
    assert info['dim'] == 5
    assert info['scalars'] == 'rational'
    assert 'metric' not in info
    assert len(info['brackets']) == 2
