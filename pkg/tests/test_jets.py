#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""二阶射流与中心差分的一致性"""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hosts.jets import JetScalar, central_differences, sqrt, stack_jets, variables
from utils.errors import DegenerateError


def sample_fn(xs):
    x, y = xs
    return x * x * y / (1 + y * y) + sqrt(x + 2) - 3 / (x - 4) + (y + 3) ** 1.5


def plain(p):
    x, y = p
    return x * x * y / (1 + y * y) + math.sqrt(x + 2) - 3 / (x - 4) + (y + 3) ** 1.5


@given(st.floats(-1.0, 1.0), st.floats(-1.0, 1.0))
def test_jet_matches_central_differences(x, y):
    jet = sample_fn(variables([x, y]))
    grad, hess = central_differences(lambda p: np.asarray(plain(p)), [x, y])
    assert jet.value == pytest.approx(plain([x, y]))
    assert np.allclose(jet.grad, grad, rtol=1e-6, atol=1e-6)
    assert np.allclose(jet.hess, hess, rtol=1e-4, atol=1e-4)


def test_hessian_is_symmetric():
    jet = sample_fn(variables([0.3, -0.7]))
    assert np.allclose(jet.hess, jet.hess.T)


def test_constant_has_no_derivatives():
    c = JetScalar.constant(4.0, 3)
    assert c.value == 4.0
    assert not c.grad.any() and not c.hess.any()


def test_reciprocal_of_zero_raises():
    with pytest.raises(DegenerateError):
        1 / JetScalar.constant(0.0, 2)


def test_fractional_power_needs_positive_base():
    with pytest.raises(DegenerateError):
        JetScalar.variable(-1.0, 0, 1) ** 0.5


def test_stack_jets_mixes_constants():
    x, y = variables([1.0, 2.0])
    values, grad, hess = stack_jets([[x * y, 1.0], [0.0, y]], 2)
    assert values.tolist() == [[2.0, 1.0], [0.0, 2.0]]
    assert grad[0, 0].tolist() == [2.0, 1.0]
    assert hess[0, 0].tolist() == [[0.0, 1.0], [1.0, 0.0]]
    assert not grad[0, 1].any()
