#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
李代数宿主
由结构常数与内积给出的左不变几何；精确模式下全部为有理数
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from hosts.base_host import BaseHost
from tensors.checks import IdentityCheck
from tensors.frame_tensor import FrameTensor, UPPER, LOWER, einsum_arrays
from tensors.linalg import inverse
from tensors.scalar import ScalarContext, ScalarKind, exact_zeros, max_abs
from utils.errors import DimensionMismatchError, NotAlternatingError
from utils.logger import get_logger

logger = get_logger()

BracketEntry = Tuple[int, int, int, Any]


class LieAlgebraData(BaseHost):
    """
    左不变标架上的李代数

    constants[i, j, k] 为 [e_i, e_j] 的第 k 个分量；metric 默认单位阵（标架正交）。
    """

    def __init__(self, constants: np.ndarray, metric: Optional[np.ndarray] = None,
                 ctx: Optional[ScalarContext] = None, name: str = 'lie_algebra',
                 labels: Optional[Sequence[str]] = None):
        """
        初始化李代数

        Args:
            constants: 结构常数数组 (n, n, n)
            metric: 内积矩阵，默认单位阵
            ctx: 标量上下文，默认精确模式
            name: 名称
            labels: 标架向量名称（报告用）

        Raises:
            NotAlternatingError: 结构常数关于 (i, j) 不反对称
        """
        super().__init__(name, ctx or ScalarContext(ScalarKind.EXACT))
        c = np.asarray(constants)
        if c.ndim != 3 or len(set(c.shape)) != 1:
            raise DimensionMismatchError(f"结构常数形状必须为 (n, n, n): {c.shape}")
        n = c.shape[0]
        self._dim = n
        self._constants = FrameTensor(self.ctx.array(c) if self.ctx.exact else np.asarray(c, float),
                                      (LOWER, LOWER, UPPER), dim=n)
        if metric is None:
            g = FrameTensor.identity(n, self.kind).components
        else:
            g = self.ctx.array(metric) if self.ctx.exact else np.asarray(metric, float)
        self._metric = FrameTensor(g, (LOWER, LOWER), dim=n)
        self.labels = list(labels) if labels else [f"e{i}" for i in range(n)]
        comps = self._constants.components
        asym = max_abs(comps + np.transpose(comps, (1, 0, 2)))
        if not self.ctx.is_zero(asym, float(max_abs(comps))):
            raise NotAlternatingError(f"{name}: 结构常数不反对称 (偏差 {asym})")
        self.check_metric()

    # ------------------------------------------------------------------ 构造

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable[BracketEntry],
                     metric: Optional[np.ndarray] = None, ctx: Optional[ScalarContext] = None,
                     name: str = 'lie_algebra', labels: Optional[Sequence[str]] = None) -> 'LieAlgebraData':
        """
        由非零括号条目构造，条目 (i, j, k, v) 表示 [e_i, e_j] 含 v·e_k，反对称部分自动补齐

        Raises:
            NotAlternatingError: i == j 且值非零
        """
        ctx = ctx or ScalarContext(ScalarKind.EXACT)
        c = exact_zeros((dim, dim, dim)) if ctx.exact else np.zeros((dim, dim, dim))
        for i, j, k, value in entries:
            v = ctx.coerce(value)
            if i == j:
                if v != 0:
                    raise NotAlternatingError(f"[e{i}, e{i}] 必须为零，实际分量 {v}")
                continue
            c[i, j, k] = c[i, j, k] + v
            c[j, i, k] = c[j, i, k] - v
        return cls(c, metric, ctx, name, labels)

    @classmethod
    def abelian(cls, dim: int, kind: ScalarKind = ScalarKind.EXACT) -> 'LieAlgebraData':
        ctx = ScalarContext(kind)
        c = exact_zeros((dim, dim, dim)) if ctx.exact else np.zeros((dim, dim, dim))
        labels = ['xi'] + [f"e{i}" for i in range(1, dim)]
        return cls(c, None, ctx, f"abelian_{dim}", labels)

    # ------------------------------------------------------------------ 接口实现

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def is_invariant(self) -> bool:
        return True

    def metric(self) -> FrameTensor:
        return self._metric

    def brackets(self) -> FrameTensor:
        return self._constants

    def bracket(self, u: FrameTensor, v: FrameTensor) -> FrameTensor:
        """[u, v] 的分量"""
        comps = einsum_arrays('i,j,ijk->k', u.components, v.components, self._constants.components)
        return FrameTensor(comps, (UPPER,), dim=self.dim)

    def nonzero_brackets(self) -> List[BracketEntry]:
        """i < j 的非零括号条目"""
        c = self._constants.components
        out = []
        for i, j in itertools.combinations(range(self.dim), 2):
            for k in range(self.dim):
                if not self.ctx.is_zero(c[i, j, k]):
                    out.append((i, j, k, c[i, j, k]))
        return out

    def describe(self) -> Dict[str, Any]:
        info: Dict[str, Any] = {
            'kind': 'lie_algebra',
            'name': self.name,
            'dim': self.dim,
            'scalars': self.kind.value,
            'labels': list(self.labels),
            'brackets': [[i, j, k, v] for i, j, k, v in self.nonzero_brackets()],
        }
        g = self._metric.components
        if not all(self.ctx.is_zero(g[i, j] - (1 if i == j else 0))
                   for i in range(self.dim) for j in range(self.dim)):
            info['metric'] = g.tolist()
        return info

    # ------------------------------------------------------------------ 变换

    def to_float(self) -> 'LieAlgebraData':
        if not self.ctx.exact:
            return self
        ctx = ScalarContext(ScalarKind.FLOAT, self.ctx.tol)
        return LieAlgebraData(self._constants.to_float().components,
                              self._metric.to_float().components, ctx, self.name, self.labels)

    def with_context(self, ctx: ScalarContext) -> 'LieAlgebraData':
        """换用新的容差（标量类型不变）"""
        alg = self.to_float() if (self.ctx.exact and not ctx.exact) else self
        return LieAlgebraData(alg._constants.components, alg._metric.components, ctx,
                              alg.name, alg.labels)

    def change_frame(self, matrix: np.ndarray, name: Optional[str] = None) -> Tuple['LieAlgebraData', 'FrameChange']:
        """
        换标架：新标架 e'_a = Σ_i P[i, a] e_i

        Args:
            matrix: 可逆矩阵 P（列为新标架向量在旧标架下的分量）
            name: 新名称

        Returns:
            (新标架下的李代数, 用于变换张量的 FrameChange)
        """
        p = self.ctx.array(matrix) if self.ctx.exact else np.asarray(matrix, float)
        change = FrameChange(p, inverse(p))
        constants = change.apply(self._constants)
        metric = change.apply(self._metric)
        alg = LieAlgebraData(constants.components, metric.components, self.ctx,
                             name or f"{self.name}_reframed", None)
        return alg, change

    def direct_sum(self, other: 'LieAlgebraData', name: Optional[str] = None) -> 'LieAlgebraData':
        """直和 g ⊕ h，标架依次拼接，度量取分块对角"""
        if self.kind is not other.kind:
            other = other.to_float() if not self.ctx.exact else other
            if other.kind is not self.kind:
                raise DimensionMismatchError("直和的两个李代数标量类型不一致")
        n, m = self.dim, other.dim
        total = n + m
        c = exact_zeros((total,) * 3) if self.ctx.exact else np.zeros((total,) * 3)
        g = exact_zeros((total, total)) if self.ctx.exact else np.zeros((total, total))
        c[:n, :n, :n] = self._constants.components
        c[n:, n:, n:] = other.brackets().components
        g[:n, :n] = self._metric.components
        g[n:, n:] = other.metric().components
        labels = list(self.labels) + [f"{other.name}.{lab}" for lab in other.labels]
        return LieAlgebraData(c, g, self.ctx, name or f"{self.name}+{other.name}", labels)


@dataclass(frozen=True)
class FrameChange:
    """
    标架变换 e'_a = P[i, a] e_i

    上标槽位乘 P⁻¹，下标槽位乘 P。
    """
    matrix: np.ndarray
    inverse: np.ndarray

    def apply(self, t: FrameTensor) -> FrameTensor:
        comps = t.components
        letters = 'abcdefgh'[:t.rank]
        for slot, variance in enumerate(t.signature):
            src = letters[:slot] + 'z' + letters[slot + 1:]
            if variance == UPPER:
                comps = einsum_arrays(f"{letters[slot]}z,{src}->{letters}", self.inverse, comps)
            else:
                comps = einsum_arrays(f"z{letters[slot]},{src}->{letters}", self.matrix, comps)
        return FrameTensor(comps, t.signature, dim=t.dim)


def jacobi_check(alg: LieAlgebraData) -> IdentityCheck:
    """
    Jacobi 恒等式：对所有三元组检查轮换和
    [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j] = 0

    Returns:
        IdentityCheck，见证为违背最大的三元组 (i, j, k)
    """
    c = alg.brackets().components
    # cyc[i,j,k,m] = Σ_l c[i,j,l] c[l,k,m] + c[j,k,l] c[l,i,m] + c[k,i,l] c[l,j,m]
    first = einsum_arrays('ijl,lkm->ijkm', c, c)
    cyc = first + np.transpose(first, (2, 0, 1, 3)) + np.transpose(first, (1, 2, 0, 3))
    worst = None
    worst_val = 0
    for idx in itertools.product(range(alg.dim), repeat=4):
        val = abs(cyc[idx])
        if val > worst_val:
            worst_val = val
            worst = idx[:3]
    passed = alg.ctx.is_zero(worst_val, float(max_abs(c)) ** 2 if c.size else 0.0)
    if not passed:
        logger.debug(f"{alg.name}: Jacobi 恒等式在 {worst} 处不成立，偏差 {worst_val}")
    violation = Fraction(worst_val) if alg.ctx.exact else float(worst_val)
    return IdentityCheck('jacobi', bool(passed), violation, None if passed else tuple(worst))


# ---------------------------------------------------------------------- 示例代数

def heisenberg_entries(weights: Sequence[Fraction]) -> List[BracketEntry]:
    """
    加权 Heisenberg 代数的非零括号
    标架顺序 (ξ, τ_1, …, τ_4n)，[τ_r, τ_{3n+r}] = [τ_{n+r}, τ_{2n+r}] = 2λ_r ξ
    """
    n = len(weights)
    entries = []
    for r, lam in enumerate(weights, start=1):
        two_lam = 2 * lam
        entries.append((r, 3 * n + r, 0, two_lam))
        entries.append((n + r, 2 * n + r, 0, two_lam))
    return entries


def heisenberg_labels(n: int) -> List[str]:
    return ['xi'] + [f"tau{l}" for l in range(1, 4 * n + 1)]


def twisted_abelian(weight: Any = 1, ctx: Optional[ScalarContext] = None) -> LieAlgebraData:
    """
    ℝ ⋉ ℝ⁴：ξ 以反对称导子 D 作用于 ℝ⁴，D 与标准 φ 反交换

    D e1 = μ e3, D e3 = −μ e1, D e2 = −μ e4, D e4 = μ e2，其中 μ 为 weight。
    """
    ctx = ctx or ScalarContext(ScalarKind.EXACT)
    mu = ctx.coerce(weight)
    entries = [
        (0, 1, 3, mu), (0, 3, 1, -mu),
        (0, 2, 4, -mu), (0, 4, 2, mu),
    ]
    return LieAlgebraData.from_entries(5, entries, None, ctx, 'twisted_abelian',
                                       ['xi', 'e1', 'e2', 'e3', 'e4'])
