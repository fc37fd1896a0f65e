#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
标量模块
两种标量后端：精确有理数（fractions.Fraction）与带容差的双精度浮点数
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Union

import numpy as np

from utils.errors import ScalarKindError

Number = Union[Fraction, float, int]

# 严格的分数字面量："3"、"-2/5"；不接受小数写法
_FRACTION_RE = re.compile(r'^\s*[+-]?\d+(\s*/\s*[+-]?\d+)?\s*$')


class ScalarKind(Enum):
    """标量后端"""
    EXACT = 'rational'
    FLOAT = 'float'

    @classmethod
    def from_name(cls, name: str) -> 'ScalarKind':
        for kind in cls:
            if kind.value == name or kind.name.lower() == name:
                return kind
        raise ValueError(f"未知的标量类型: {name}")


def parse_fraction(value: Any) -> Fraction:
    """
    严格解析精确有理数

    Args:
        value: 整数、Fraction 或形如 "p/q" 的字符串

    Returns:
        约化后的 Fraction（分母为正）

    Raises:
        ValueError: 浮点数或非分数字符串
    """
    if isinstance(value, bool):
        raise ValueError(f"布尔值不是有理数: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str) and _FRACTION_RE.match(value):
        text = value.replace(' ', '')
        if '/' in text:
            num, den = text.split('/')
            if int(den) == 0:
                raise ValueError(f"分母为零: {value!r}")
            return Fraction(int(num), int(den))
        return Fraction(int(text))
    raise ValueError(f"不是精确分数: {value!r}")


def parse_float(value: Any) -> float:
    """解析浮点数，接受数字或可转换的字符串（含 "p/q"）"""
    if isinstance(value, bool):
        raise ValueError(f"布尔值不是数: {value!r}")
    if isinstance(value, (int, float, Fraction)):
        return float(value)
    if isinstance(value, str):
        if _FRACTION_RE.match(value):
            return float(parse_fraction(value))
        try:
            return float(value)
        except ValueError:
            pass
    raise ValueError(f"不是数值: {value!r}")


def kind_of(values: np.ndarray) -> ScalarKind:
    """根据数组 dtype 推断标量后端"""
    return ScalarKind.EXACT if values.dtype == object else ScalarKind.FLOAT


@dataclass(frozen=True)
class ScalarContext:
    """
    标量上下文：后端 + 零判定容差

    精确模式下零判定就是相等判定；浮点模式下 |x| <= tol * max(1, scale)，
    scale 为被检张量的最大分量模。
    """
    kind: ScalarKind = ScalarKind.EXACT
    tol: float = 1e-9

    @property
    def exact(self) -> bool:
        return self.kind is ScalarKind.EXACT

    def zero(self) -> Number:
        return Fraction(0) if self.exact else 0.0

    def one(self) -> Number:
        return Fraction(1) if self.exact else 1.0

    def coerce(self, value: Any) -> Number:
        """把单个数值转换为本后端的标量"""
        if self.exact:
            if isinstance(value, float):
                raise ScalarKindError(f"精确模式下不接受浮点数: {value!r}")
            return parse_fraction(value)
        return parse_float(value)

    def array(self, values: Any) -> np.ndarray:
        """把嵌套列表/数组转换为本后端的数组"""
        raw = np.asarray(values, dtype=object)
        if self.exact:
            out = np.empty(raw.shape, dtype=object)
            for idx, v in np.ndenumerate(raw):
                out[idx] = self.coerce(v)
            return out
        out = np.empty(raw.shape, dtype=float)
        for idx, v in np.ndenumerate(raw):
            out[idx] = self.coerce(v)
        return out

    def with_tol(self, tol: float) -> 'ScalarContext':
        return ScalarContext(self.kind, tol)

    def threshold(self, scale: float = 0.0) -> float:
        """浮点模式下的零判定阈值"""
        return self.tol * max(1.0, float(scale))

    def is_zero(self, value: Number, scale: float = 0.0) -> bool:
        if self.exact:
            return value == 0
        return abs(float(value)) <= self.threshold(scale)


def max_abs(values: np.ndarray) -> Number:
    """数组分量的最大模；精确数组返回 Fraction"""
    if values.size == 0:
        return 0
    if values.dtype == object:
        return max((abs(v) for v in values.flat), default=Fraction(0))
    return float(np.max(np.abs(values)))


def to_float_array(values: np.ndarray) -> np.ndarray:
    """精确数组转浮点数组"""
    if values.dtype == object:
        return np.vectorize(float, otypes=[float])(values) if values.size else values.astype(float)
    return np.asarray(values, dtype=float)


def exact_zeros(shape) -> np.ndarray:
    """全零的精确数组"""
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out
