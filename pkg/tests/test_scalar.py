#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""标量后端与严格分数解析"""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from tensors.scalar import ScalarContext, ScalarKind, parse_float, parse_fraction
from utils.errors import ScalarKindError


@pytest.mark.parametrize('text, expected', [
    ('3/4', Fraction(3, 4)),
    ('-2', Fraction(-2)),
    ('6/8', Fraction(3, 4)),
    ('1/-2', Fraction(-1, 2)),
    (7, Fraction(7)),
])
def test_parse_fraction_accepts_exact_forms(text, expected):
    assert parse_fraction(text) == expected


@pytest.mark.parametrize('bad', ['0.5', 0.5, '1/0', 'abc', True, '', None])
def test_parse_fraction_rejects_inexact_values(bad):
    with pytest.raises(ValueError):
        parse_fraction(bad)


@given(st.fractions(max_denominator=10 ** 6))
def test_parse_fraction_reads_back_str(value):
    assert parse_fraction(str(value)) == value


def test_parse_float_accepts_fraction_strings():
    assert parse_float('1/4') == 0.25
    assert parse_float('-1e-3') == -1e-3
    with pytest.raises(ValueError):
        parse_float('x')


def test_kind_names():
    assert ScalarKind.from_name('rational') is ScalarKind.EXACT
    assert ScalarKind.from_name('float') is ScalarKind.FLOAT
    assert ScalarKind.from_name('exact') is ScalarKind.EXACT
    with pytest.raises(ValueError):
        ScalarKind.from_name('complex')


def test_exact_context_refuses_floats():
    ctx = ScalarContext(ScalarKind.EXACT)
    with pytest.raises(ScalarKindError):
        ctx.coerce(0.5)
    assert ctx.coerce('1/3') == Fraction(1, 3)
    assert ctx.is_zero(Fraction(0))
    assert not ctx.is_zero(Fraction(1, 10 ** 30))


def test_float_zero_test_is_scale_relative():
    ctx = ScalarContext(ScalarKind.FLOAT, 1e-8)
    assert not ctx.is_zero(1e-7)
    assert ctx.is_zero(1e-7, scale=100.0)
    assert ctx.threshold(0.5) == 1e-8
