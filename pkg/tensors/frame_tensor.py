#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
标架张量模块
固定标架下的稠密多重线性数组，带上下标签名；可选携带一阶/二阶射流，
使坐标片上的张量场在代数运算中自动按乘积法则传递偏导数。
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from tensors.scalar import ScalarKind, ScalarContext, kind_of, max_abs, exact_zeros
from utils.errors import (
    DimensionMismatchError, SlotVarianceError, ScalarKindError, JetOrderError,
)

UPPER = 'u'
LOWER = 'l'

# 射流乘积法则使用的额外下标，槽位下标只用小写字母
_JET_Y = 'Y'
_JET_Z = 'Z'


def _parse_spec(spec: str) -> Tuple[List[str], str]:
    spec = spec.replace(' ', '')
    if '->' not in spec:
        raise ValueError(f"einsum 表达式必须显式给出输出: {spec}")
    lhs, out = spec.split('->')
    return lhs.split(','), out


def _take_diagonals(arr: np.ndarray, subs: str) -> Tuple[np.ndarray, str]:
    """处理同一操作数内重复的下标（取对角线）"""
    while True:
        seen = {}
        repeat = None
        for pos, letter in enumerate(subs):
            if letter in seen:
                repeat = (seen[letter], pos)
                break
            seen[letter] = pos
        if repeat is None:
            return arr, subs
        a, b = repeat
        letter = subs[a]
        arr = np.diagonal(arr, axis1=a, axis2=b)
        subs = ''.join(s for k, s in enumerate(subs) if k not in (a, b)) + letter


def _object_einsum(spec: str, *arrays: np.ndarray) -> np.ndarray:
    """对象数组（Fraction）的 einsum：广播相乘后按轴求和"""
    inputs, output = _parse_spec(spec)
    prepared = [_take_diagonals(np.asarray(a, dtype=object), s) for s, a in zip(inputs, arrays)]
    letters: List[str] = []
    for _, subs in prepared:
        for letter in subs:
            if letter not in letters:
                letters.append(letter)
    sizes = {}
    for arr, subs in prepared:
        for axis, letter in enumerate(subs):
            sizes[letter] = arr.shape[axis]
    full = None
    for arr, subs in prepared:
        present = [l for l in letters if l in subs]
        arr_t = np.transpose(arr, [subs.index(l) for l in present]) if present else arr
        shape = [sizes[l] if l in subs else 1 for l in letters]
        arr_b = np.asarray(arr_t, dtype=object).reshape(shape)
        full = arr_b if full is None else full * arr_b
    sum_axes = tuple(i for i, l in enumerate(letters) if l not in output)
    result = full.sum(axis=sum_axes) if sum_axes else full
    result = np.asarray(result, dtype=object)
    remaining = [l for l in letters if l in output]
    if remaining:
        result = np.transpose(result, [remaining.index(l) for l in output])
    return result


def einsum_arrays(spec: str, *arrays: np.ndarray) -> np.ndarray:
    """按 dtype 分派的 einsum：浮点走 numpy，精确走对象数组实现"""
    if any(np.asarray(a).dtype == object for a in arrays):
        return _object_einsum(spec, *arrays)
    return np.asarray(np.einsum(spec, *arrays))


@dataclass(frozen=True, eq=False)
class FrameTensor:
    """
    标架张量

    components[i1, ..., ik] 为张量在标架 e_1..e_n 上的分量，signature 给出每个槽位
    的类型（'u' 上标 / 'l' 下标）。jet_order 为 None 表示分量是常数（不变张量，
    标架导数恒为零）；否则 grad / hess 记录沿标架方向的一阶/二阶导数，
    最后一个（两个）轴为求导方向。
    """
    components: np.ndarray
    signature: Tuple[str, ...]
    grad: Optional[np.ndarray] = None
    hess: Optional[np.ndarray] = None
    jet_order: Optional[int] = None
    dim: int = -1

    def __post_init__(self):
        comps = np.asarray(self.components)
        if comps.dtype != object:
            comps = comps.astype(float)
        object.__setattr__(self, 'components', comps)
        sig = tuple(self.signature)
        object.__setattr__(self, 'signature', sig)
        if any(s not in (UPPER, LOWER) for s in sig):
            raise SlotVarianceError(f"非法签名: {sig}")
        if comps.ndim != len(sig):
            raise DimensionMismatchError(f"分量阶数 {comps.ndim} 与签名长度 {len(sig)} 不一致")
        if comps.ndim:
            if len(set(comps.shape)) != 1:
                raise DimensionMismatchError(f"分量形状必须为 dim^k: {comps.shape}")
            object.__setattr__(self, 'dim', comps.shape[0])
        elif self.dim < 0:
            raise DimensionMismatchError("零阶张量需要显式给出 dim")
        if self.jet_order is None:
            if self.grad is not None or self.hess is not None:
                raise JetOrderError("常数张量不应携带射流")
            return
        if comps.dtype == object:
            raise ScalarKindError("射流只支持浮点分量")
        if self.jet_order >= 1:
            if self.grad is None or np.shape(self.grad)[:-1] != comps.shape:
                raise JetOrderError("一阶射流形状不符")
            object.__setattr__(self, 'grad', np.asarray(self.grad, dtype=float))
        if self.jet_order >= 2:
            if self.hess is None or np.shape(self.hess)[:-2] != comps.shape:
                raise JetOrderError("二阶射流形状不符")
            object.__setattr__(self, 'hess', np.asarray(self.hess, dtype=float))
        if self.jet_order < 2:
            object.__setattr__(self, 'hess', None)
        if self.jet_order < 1:
            object.__setattr__(self, 'grad', None)

    # ------------------------------------------------------------------ 构造

    @classmethod
    def from_values(cls, values, signature: Sequence[str], ctx: ScalarContext) -> 'FrameTensor':
        """由嵌套列表构造（按上下文转换标量）"""
        return cls(ctx.array(values), tuple(signature))

    @classmethod
    def zeros(cls, dim: int, signature: Sequence[str], kind: ScalarKind) -> 'FrameTensor':
        shape = (dim,) * len(signature)
        comps = exact_zeros(shape) if kind is ScalarKind.EXACT else np.zeros(shape)
        return cls(comps, tuple(signature), dim=dim)

    @classmethod
    def identity(cls, dim: int, kind: ScalarKind) -> 'FrameTensor':
        t = cls.zeros(dim, (UPPER, LOWER), kind)
        one = Fraction(1) if kind is ScalarKind.EXACT else 1.0
        for i in range(dim):
            t.components[i, i] = one
        return t

    @classmethod
    def basis(cls, dim: int, index: int, kind: ScalarKind, variance: str = UPPER) -> 'FrameTensor':
        """第 index 个标架向量（或对偶余向量）"""
        t = cls.zeros(dim, (variance,), kind)
        t.components[index] = Fraction(1) if kind is ScalarKind.EXACT else 1.0
        return t

    # ------------------------------------------------------------------ 属性

    @property
    def kind(self) -> ScalarKind:
        return kind_of(self.components)

    @property
    def rank(self) -> int:
        return len(self.signature)

    @property
    def is_field(self) -> bool:
        return self.jet_order is not None

    @property
    def value(self):
        """零阶张量的值"""
        return self.components.item() if self.rank == 0 else self.components

    def __getitem__(self, index):
        return self.components[index]

    def max_abs(self):
        return max_abs(self.components)

    # ------------------------------------------------------------------ 线性运算

    def _linear(self, fn) -> 'FrameTensor':
        """把线性映射 fn（作用于前 rank 个轴）同时施加到分量与射流"""
        comps = fn(self.components)
        grad = fn(self.grad) if self.grad is not None else None
        hess = fn(self.hess) if self.hess is not None else None
        return FrameTensor(comps, self.signature, grad, hess, self.jet_order, self.dim)

    def scale(self, factor) -> 'FrameTensor':
        if self.kind is ScalarKind.FLOAT:
            factor = float(factor)
        elif isinstance(factor, float):
            raise ScalarKindError("精确张量不能乘浮点数")
        return self._linear(lambda a: a * factor)

    def __neg__(self) -> 'FrameTensor':
        return self._linear(lambda a: -a)

    def __add__(self, other: 'FrameTensor') -> 'FrameTensor':
        return _combine(self, other, 1)

    def __sub__(self, other: 'FrameTensor') -> 'FrameTensor':
        return _combine(self, other, -1)

    def transpose(self, *order: int) -> 'FrameTensor':
        """重排槽位：新张量第 a 个槽位取原第 order[a] 个槽位"""
        order = tuple(order)
        if sorted(order) != list(range(self.rank)):
            raise DimensionMismatchError(f"非法的槽位排列: {order}")
        k = self.rank
        comps = np.transpose(self.components, order)
        grad = np.transpose(self.grad, order + (k,)) if self.grad is not None else None
        hess = np.transpose(self.hess, order + (k, k + 1)) if self.hess is not None else None
        sig = tuple(self.signature[i] for i in order)
        return FrameTensor(comps, sig, grad, hess, self.jet_order, self.dim)

    # ------------------------------------------------------------------ 射流

    def frame_derivative(self) -> 'FrameTensor':
        """沿标架方向的导数 e_i(T)，求导槽位追加在最后"""
        sig = self.signature + (LOWER,)
        if self.jet_order is None:
            return FrameTensor.zeros(self.dim, sig, self.kind)
        if self.jet_order == 0:
            raise JetOrderError("该张量未记录导数")
        if self.jet_order == 1:
            return FrameTensor(self.grad, sig, jet_order=0, dim=self.dim)
        return FrameTensor(self.grad, sig, grad=self.hess, jet_order=1, dim=self.dim)

    def values_only(self) -> 'FrameTensor':
        """丢弃射流；场张量的导数随之变为未知"""
        if self.jet_order is None:
            return self
        return FrameTensor(self.components, self.signature, jet_order=0, dim=self.dim)

    def to_float(self) -> 'FrameTensor':
        if self.kind is ScalarKind.FLOAT:
            return self
        comps = np.vectorize(float, otypes=[float])(self.components) if self.components.size else \
            self.components.astype(float)
        return FrameTensor(comps, self.signature, dim=self.dim)

    # ------------------------------------------------------------------ 常用组合

    def tensor(self, other: 'FrameTensor') -> 'FrameTensor':
        a = _letters(self.rank)
        b = _letters(other.rank, offset=self.rank)
        return einsum(f"{a},{b}->{a}{b}", self, other, signature=self.signature + other.signature)

    def contract(self, upper_slot: int, lower_slot: int) -> 'FrameTensor':
        if self.signature[upper_slot] != UPPER or self.signature[lower_slot] != LOWER:
            raise SlotVarianceError("缩并需要一个上标槽位和一个下标槽位")
        subs = list(_letters(self.rank))
        subs[lower_slot] = subs[upper_slot]
        out = ''.join(s for k, s in enumerate(subs) if k not in (upper_slot, lower_slot))
        sig = tuple(s for k, s in enumerate(self.signature) if k not in (upper_slot, lower_slot))
        return einsum(f"{''.join(subs)}->{out}", self, signature=sig)

    def compose(self, other: 'FrameTensor') -> 'FrameTensor':
        """自同态复合 (self ∘ other)"""
        _require_endomorphism(self)
        _require_endomorphism(other)
        return einsum("ij,jk->ik", self, other, signature=(UPPER, LOWER))

    def apply(self, vector: 'FrameTensor') -> 'FrameTensor':
        _require_endomorphism(self)
        return einsum("ij,j->i", self, vector, signature=(UPPER,))

    def trace(self) -> 'FrameTensor':
        _require_endomorphism(self)
        return self.contract(0, 1)

    def lower_with(self, metric: 'FrameTensor', slot: int) -> 'FrameTensor':
        """用度量把第 slot 个上标降为下标"""
        if self.signature[slot] != UPPER:
            raise SlotVarianceError("只能降上标槽位")
        subs = _letters(self.rank)
        new = subs[:slot] + 'z' + subs[slot + 1:]
        sig = self.signature[:slot] + (LOWER,) + self.signature[slot + 1:]
        return einsum(f"z{subs[slot]},{subs}->{new}", metric, self, signature=sig)

    def raise_with(self, metric_inverse: 'FrameTensor', slot: int) -> 'FrameTensor':
        """用逆度量把第 slot 个下标升为上标"""
        if self.signature[slot] != LOWER:
            raise SlotVarianceError("只能升下标槽位")
        subs = _letters(self.rank)
        new = subs[:slot] + 'z' + subs[slot + 1:]
        sig = self.signature[:slot] + (UPPER,) + self.signature[slot + 1:]
        return einsum(f"z{subs[slot]},{subs}->{new}", metric_inverse, self, signature=sig)


def _letters(count: int, offset: int = 0) -> str:
    return 'abcdefghijklmnop'[offset:offset + count]


def _require_endomorphism(t: FrameTensor):
    if t.signature != (UPPER, LOWER):
        raise SlotVarianceError(f"需要 (1,1) 张量，实际签名 {t.signature}")


def _check_compatible(a: FrameTensor, b: FrameTensor):
    if a.dim != b.dim:
        raise DimensionMismatchError(f"维数不一致: {a.dim} vs {b.dim}")
    if a.kind is not b.kind:
        raise ScalarKindError("标量类型不一致")


def _combine(a: FrameTensor, b: FrameTensor, sign: int) -> FrameTensor:
    _check_compatible(a, b)
    if a.signature != b.signature:
        raise SlotVarianceError(f"签名不一致: {a.signature} vs {b.signature}")
    comps = a.components + b.components if sign > 0 else a.components - b.components
    orders = [t.jet_order for t in (a, b) if t.jet_order is not None]
    if not orders:
        return FrameTensor(comps, a.signature, dim=a.dim)
    order = min(orders)

    def part(attr):
        pa, pb = getattr(a, attr), getattr(b, attr)
        if pa is None:
            return sign * pb
        if pb is None:
            return pa
        return pa + sign * pb

    grad = part('grad') if order >= 1 else None
    hess = part('hess') if order >= 2 else None
    return FrameTensor(comps, a.signature, grad, hess, order, a.dim)


def einsum(spec: str, *tensors: FrameTensor, signature: Sequence[str]) -> FrameTensor:
    """
    张量的 einsum，射流按乘积法则传递

    Args:
        spec: 显式输出的 einsum 表达式（只用小写字母）
        tensors: 参与运算的张量
        signature: 结果的签名

    Returns:
        结果张量；射流阶数取各操作数阶数的最小值
    """
    inputs, output = _parse_spec(spec)
    if len(inputs) != len(tensors):
        raise DimensionMismatchError("einsum 操作数数目不符")
    kinds = {t.kind for t in tensors}
    if len(kinds) > 1:
        raise ScalarKindError("einsum 的操作数标量类型不一致")
    dims = {t.dim for t in tensors}
    if len(dims) > 1:
        raise DimensionMismatchError(f"einsum 的操作数维数不一致: {sorted(dims)}")
    dim = tensors[0].dim
    values = einsum_arrays(spec, *[t.components for t in tensors])
    orders = [t.jet_order for t in tensors if t.jet_order is not None]
    if not orders:
        return FrameTensor(values, tuple(signature), dim=dim)
    order = min(orders)
    grad = hess = None
    if order >= 1:
        grad = 0
        for i, t in enumerate(tensors):
            if t.jet_order is None:
                continue
            subs = list(inputs)
            subs[i] += _JET_Z
            arrays = [u.components for u in tensors]
            arrays[i] = t.grad
            grad = grad + np.einsum(f"{','.join(subs)}->{output}{_JET_Z}", *arrays)
    if order >= 2:
        hess = 0
        for i, t in enumerate(tensors):
            if t.jet_order is None:
                continue
            subs = list(inputs)
            subs[i] += _JET_Y + _JET_Z
            arrays = [u.components for u in tensors]
            arrays[i] = t.hess
            hess = hess + np.einsum(f"{','.join(subs)}->{output}{_JET_Y}{_JET_Z}", *arrays)
            for j, u in enumerate(tensors):
                if j == i or u.jet_order is None:
                    continue
                subs = list(inputs)
                subs[i] += _JET_Y
                subs[j] += _JET_Z
                arrays = [w.components for w in tensors]
                arrays[i] = t.grad
                arrays[j] = u.grad
                hess = hess + np.einsum(f"{','.join(subs)}->{output}{_JET_Y}{_JET_Z}", *arrays)
    return FrameTensor(values, tuple(signature), grad, hess, order, dim)


def tensor_arith(a: FrameTensor, b: Optional[FrameTensor], op: str,
                 slots: Optional[Tuple[int, int]] = None, factor=None) -> FrameTensor:
    """
    统一的张量算术入口

    op 取值: add, sub, scale, contract, tensor, compose
    contract 作用于 a 的 slots=(上标槽位, 下标槽位)；scale 使用 factor。
    """
    if op == 'add':
        return a + b
    if op == 'sub':
        return a - b
    if op == 'scale':
        return a.scale(factor)
    if op == 'contract':
        if slots is None:
            raise SlotVarianceError("contract 需要指定槽位")
        return a.contract(*slots)
    if op in ('tensor', 'tensor-product'):
        return a.tensor(b)
    if op == 'compose':
        return a.compose(b)
    raise ValueError(f"未知的张量运算: {op}")


def permutation_parity(perm: Sequence[int]) -> int:
    """置换的符号 (+1 / -1)"""
    perm = list(perm)
    sign = 1
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def antisymmetrize(t: FrameTensor) -> FrameTensor:
    """完全交错化，带 1/k! 归一化"""
    if any(s != LOWER for s in t.signature):
        raise SlotVarianceError("交错化要求所有槽位为下标")
    k = t.rank
    if k <= 1:
        return t
    total = None
    for perm in itertools.permutations(range(k)):
        term = t.transpose(*perm)
        if permutation_parity(perm) < 0:
            term = -term
        total = term if total is None else total + term
    norm = Fraction(1, math.factorial(k)) if t.kind is ScalarKind.EXACT else 1.0 / math.factorial(k)
    return total.scale(norm)


def wedge(a: FrameTensor, b: FrameTensor) -> FrameTensor:
    """外积 α∧β = ((k+l)!/(k!l!)) Alt(α⊗β)（行列式约定）"""
    k, l = a.rank, b.rank
    coeff = math.factorial(k + l) // (math.factorial(k) * math.factorial(l))
    return antisymmetrize(a.tensor(b)).scale(coeff if a.kind is ScalarKind.EXACT else float(coeff))
