#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
二阶前向模式射流
JetScalar 同时携带值、梯度与 Hessian，四则运算与幂按链式法则精确传递到二阶
"""

from __future__ import annotations

import math
from typing import Any, Callable, List, Sequence, Tuple, Union

import numpy as np

from utils.errors import DegenerateError

Real = Union[int, float]


class JetScalar:
    """二阶射流标量"""

    __slots__ = ('value', 'grad', 'hess')

    def __init__(self, value: float, grad: np.ndarray, hess: np.ndarray):
        self.value = float(value)
        self.grad = np.asarray(grad, dtype=float)
        self.hess = np.asarray(hess, dtype=float)

    @classmethod
    def constant(cls, value: Real, m: int) -> 'JetScalar':
        return cls(value, np.zeros(m), np.zeros((m, m)))

    @classmethod
    def variable(cls, value: Real, index: int, m: int) -> 'JetScalar':
        grad = np.zeros(m)
        grad[index] = 1.0
        return cls(value, grad, np.zeros((m, m)))

    @property
    def size(self) -> int:
        return self.grad.shape[0]

    def _lift(self, other: Any) -> 'JetScalar':
        if isinstance(other, JetScalar):
            return other
        return JetScalar.constant(float(other), self.size)

    def _chain(self, f0: float, f1: float, f2: float) -> 'JetScalar':
        """复合 f(self)：∇f = f' ∇u，Hf = f' Hu + f'' ∇u ∇uᵀ"""
        return JetScalar(f0, f1 * self.grad, f1 * self.hess + f2 * np.outer(self.grad, self.grad))

    def __add__(self, other: Any) -> 'JetScalar':
        o = self._lift(other)
        return JetScalar(self.value + o.value, self.grad + o.grad, self.hess + o.hess)

    __radd__ = __add__

    def __neg__(self) -> 'JetScalar':
        return JetScalar(-self.value, -self.grad, -self.hess)

    def __sub__(self, other: Any) -> 'JetScalar':
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> 'JetScalar':
        return self._lift(other) - self

    def __mul__(self, other: Any) -> 'JetScalar':
        o = self._lift(other)
        hess = (self.value * o.hess + o.value * self.hess
                + np.outer(self.grad, o.grad) + np.outer(o.grad, self.grad))
        return JetScalar(self.value * o.value, self.value * o.grad + o.value * self.grad, hess)

    __rmul__ = __mul__

    def reciprocal(self) -> 'JetScalar':
        if self.value == 0:
            raise DegenerateError("射流除以零")
        v = self.value
        return self._chain(1.0 / v, -1.0 / v ** 2, 2.0 / v ** 3)

    def __truediv__(self, other: Any) -> 'JetScalar':
        return self * self._lift(other).reciprocal()

    def __rtruediv__(self, other: Any) -> 'JetScalar':
        return self._lift(other) * self.reciprocal()

    def __pow__(self, exponent: Real) -> 'JetScalar':
        if isinstance(exponent, JetScalar):
            raise TypeError("射流指数不支持射流")
        p = float(exponent)
        v = self.value
        if float(p).is_integer() and p >= 0:
            k = int(p)
            f0 = v ** k
            f1 = k * v ** (k - 1) if k >= 1 else 0.0
            f2 = k * (k - 1) * v ** (k - 2) if k >= 2 else 0.0
            return self._chain(f0, f1, f2)
        if v <= 0:
            raise DegenerateError(f"非整数幂要求底数为正: {v}")
        return self._chain(v ** p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2))

    def sqrt(self) -> 'JetScalar':
        return self ** 0.5

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        return f"JetScalar({self.value!r})"


def sqrt(u: Union[JetScalar, Real]):
    return u.sqrt() if isinstance(u, JetScalar) else math.sqrt(u)


def variables(point: Sequence[Real]) -> List[JetScalar]:
    """坐标函数 x_0..x_{m-1} 在 point 处的射流"""
    m = len(point)
    return [JetScalar.variable(float(x), i, m) for i, x in enumerate(point)]


def stack_jets(entries: Any, m: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    把嵌套的射流（或常数）列表堆叠为 (值, 梯度, Hessian) 数组

    Args:
        entries: 任意形状的嵌套列表，元素为 JetScalar 或数
        m: 坐标维数

    Returns:
        values 形状 S，grad 形状 S + (m,)，hess 形状 S + (m, m)
    """
    raw = np.asarray(entries, dtype=object)
    values = np.zeros(raw.shape)
    grad = np.zeros(raw.shape + (m,))
    hess = np.zeros(raw.shape + (m, m))
    for idx, entry in np.ndenumerate(raw):
        if isinstance(entry, JetScalar):
            values[idx] = entry.value
            grad[idx] = entry.grad
            hess[idx] = entry.hess
        else:
            values[idx] = float(entry)
    return values, grad, hess


def central_differences(fn: Callable[[np.ndarray], np.ndarray], point: Sequence[Real],
                        step: float = 1e-4) -> Tuple[np.ndarray, np.ndarray]:
    """
    中心差分：返回 fn 在 point 处的梯度与 Hessian 近似（最后一/两个轴为坐标方向）

    fn 接受浮点坐标数组，返回任意形状的浮点数组。
    """
    x0 = np.asarray(point, dtype=float)
    m = x0.shape[0]
    f0 = np.asarray(fn(x0), dtype=float)
    grad = np.zeros(f0.shape + (m,))
    hess = np.zeros(f0.shape + (m, m))
    for i in range(m):
        e_i = np.zeros(m)
        e_i[i] = step
        fp = np.asarray(fn(x0 + e_i))
        fm = np.asarray(fn(x0 - e_i))
        grad[..., i] = (fp - fm) / (2 * step)
        hess[..., i, i] = (fp - 2 * f0 + fm) / step ** 2
        for j in range(i + 1, m):
            e_j = np.zeros(m)
            e_j[j] = step
            fpp = np.asarray(fn(x0 + e_i + e_j))
            fpm = np.asarray(fn(x0 + e_i - e_j))
            fmp = np.asarray(fn(x0 - e_i + e_j))
            fmm = np.asarray(fn(x0 - e_i - e_j))
            mixed = (fpp - fpm - fmp + fmm) / (4 * step ** 2)
            hess[..., i, j] = mixed
            hess[..., j, i] = mixed
    return grad, hess
