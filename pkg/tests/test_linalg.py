#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""线性代数：精确秩、逆、稀疏求解与 Jacobi 谱"""

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tensors.frame_tensor import FrameTensor, LOWER, UPPER
from tensors.linalg import (
    cluster_values, determinant, inverse, is_positive_definite, matrix_rank, nullspace,
    solve_sparse_exact, sym_eigen,
)
from tensors.scalar import ScalarContext, ScalarKind
from utils.errors import DegenerateError, NotSymmetricError

EXACT = ScalarContext(ScalarKind.EXACT)


def int_matrix(rows, cols):
    return st.lists(st.lists(st.integers(-3, 3), min_size=cols, max_size=cols),
                    min_size=rows, max_size=rows)


def rank_by_minors(arr):
    """最大非零子式的阶数"""
    rows, cols = arr.shape
    for k in range(min(rows, cols), 0, -1):
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                if determinant(arr[np.ix_(rs, cs)]) != 0:
                    return k
    return 0


@given(int_matrix(4, 4))
def test_exact_rank_matches_minor_expansion(rows):
    arr = EXACT.array(rows)
    assert matrix_rank(arr) == rank_by_minors(arr)


@given(int_matrix(3, 5))
def test_rank_nullity(rows):
    arr = EXACT.array(rows)
    kernel = nullspace(arr)
    assert matrix_rank(arr) + kernel.shape[1] == 5
    for k in range(kernel.shape[1]):
        assert all(v == 0 for v in arr.dot(kernel[:, k]))


def test_float_rank_uses_tolerance():
    m = np.diag([1.0, 1e-12, 2.0])
    assert matrix_rank(m, ScalarContext(ScalarKind.FLOAT, 1e-9)) == 2
    assert matrix_rank(m, ScalarContext(ScalarKind.FLOAT, 1e-14)) == 3


def test_exact_inverse_and_singular():
    m = EXACT.array([[2, 1], [1, 1]])
    inv = inverse(m)
    assert inv[0, 0] == 1 and inv[0, 1] == -1 and inv[1, 1] == 2
    with pytest.raises(DegenerateError):
        inverse(EXACT.array([[1, 2], [2, 4]]))


def test_positive_definite_by_minors():
    assert is_positive_definite(EXACT.array([[2, 1], [1, 2]]))
    assert not is_positive_definite(EXACT.array([[1, 2], [2, 1]]))


def test_sparse_solver_particular_solution():
    # x0 + x2 = 3, x1 - x2 = 1
    rows = [{0: Fraction(1), 2: Fraction(1)}, {1: Fraction(1), 2: Fraction(-1)}]
    sol = solve_sparse_exact(rows, [Fraction(3), Fraction(1)], 3)
    assert sol.consistent
    assert sol.rank == 2
    assert sol.free == [2]
    assert sol.value(0) == 3 and sol.value(1) == 1 and sol.value(2) == 0


def test_sparse_solver_detects_inconsistency():
    rows = [{0: Fraction(1)}, {0: Fraction(2)}]
    sol = solve_sparse_exact(rows, [Fraction(1), Fraction(3)], 1)
    assert not sol.consistent


@given(st.lists(st.floats(-5, 5), min_size=10, max_size=10))
def test_jacobi_agrees_with_numpy(entries):
    a = np.zeros((4, 4))
    a[np.triu_indices(4)] = entries
    a = a + np.triu(a, 1).T
    spectrum = sym_eigen(a, cluster_tol=1e-12)
    assert np.allclose(spectrum.eigenvalues, np.linalg.eigvalsh(a), atol=1e-8)


def test_jacobi_clusters_multiplicities():
    spectrum = sym_eigen(np.diag([-1.0, 0.0, -1.0, -1.0, 0.0]))
    assert spectrum.matches({-1.0: 3, 0.0: 2})
    assert spectrum.dim == 5


def test_jacobi_with_metric_treats_self_adjoint_operator():
    g = np.array([[2.0, 0.0], [0.0, 1.0]])
    # g-自伴：g·op 对称
    op = FrameTensor(np.array([[1.0, 1.0], [2.0, 3.0]]), (UPPER, LOWER))
    spectrum = sym_eigen(op, metric=g)
    assert np.allclose(spectrum.eigenvalues, sorted(np.linalg.eigvals(op.components).real))


def test_asymmetric_input_reports_violation():
    with pytest.raises(NotSymmetricError) as info:
        sym_eigen(FrameTensor(np.array([[0.0, 1.0], [0.0, 0.0]]), (LOWER, LOWER)))
    assert info.value.asymmetry == pytest.approx(1.0)


def test_cluster_values():
    assert cluster_values([0.0, 1e-10, 1.0], 1e-8) == ((5e-11, 2), (1.0, 1))
