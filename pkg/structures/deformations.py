#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
结构变形
齐性变形 φ' = φ，ξ' = ξ/λ，η' = λη，g' = λ²g，
以及与平坦 Kähler 因子的乘积 (φ ⊕ J, ξ, η, g ⊕ h)。
两种操作在李代数与坐标片上都可用。
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from hosts.lie_algebra import LieAlgebraData
from hosts.patch import FieldSpec, PatchGeometry, PatchPoint
from structures.acm import AcmStructure, UL, patch_structure
from structures.classification import classify
from tensors.checks import CheckTable
from tensors.frame_tensor import FrameTensor, LOWER, UPPER
from tensors.linalg import is_positive_definite
from tensors.scalar import ScalarContext, exact_zeros
from utils.errors import InvariantViolation, PreconditionError
from utils.logger import get_logger

logger = get_logger()


# ---------------------------------------------------------------------- 齐性变形

def _positive(ctx: ScalarContext, lam: Any):
    value = ctx.coerce(lam) if ctx.exact else float(lam)
    if not value > 0:
        raise PreconditionError(f"齐性变形要求 λ > 0，实际 {lam}")
    return value


def _scaled(fn, factor: float):
    def wrapped(xs):
        return (np.asarray(fn(xs), dtype=object) * factor).tolist()
    return wrapped


def homothetic_patch(patch: PatchGeometry, lam: float) -> PatchGeometry:
    """
    坐标片上的齐性变形：度量乘 λ²，ξ 乘 1/λ，η 乘 λ，φ 不变

    Raises:
        PreconditionError: λ ≤ 0 或坐标片缺少结构场
    """
    lam = _positive(patch.ctx, lam)
    for name in ('phi', 'xi', 'eta'):
        if name not in patch.fields:
            raise PreconditionError(f"{patch.name}: 缺少结构场 {name}")
    fields = dict(patch.fields)
    fields['xi'] = FieldSpec(_scaled(patch.fields['xi'].fn, 1.0 / lam), patch.fields['xi'].signature)
    fields['eta'] = FieldSpec(_scaled(patch.fields['eta'].fn, lam), patch.fields['eta'].signature)
    params = dict(patch.params)
    params['homothety'] = lam
    return PatchGeometry(f"{patch.name}_h{lam:g}", patch.dim, _scaled(patch.metric_fn, lam * lam),
                         patch.domain_fn, patch.sampler, fields, params, patch.ctx)


def homothetic_deform(s: AcmStructure, lam: Any) -> AcmStructure:
    """
    齐性变形

    变形后核对 ψ' = ψ/λ 与 A' = A/λ。

    Args:
        s: 结构（李代数或坐标片上的点）
        lam: 正的标量；精确模式下接受有理数或 "p/q" 字符串

    Returns:
        变形后的结构

    Raises:
        PreconditionError: λ ≤ 0
        InvariantViolation: ψ' 或 A' 与预期不符
    """
    host = s.host
    value = _positive(s.ctx, lam)
    name = f"{s.name}_h{value}"
    if isinstance(host, LieAlgebraData):
        metric = host.metric().components * (value * value)
        alg = LieAlgebraData(host.brackets().components, metric, host.ctx,
                             f"{host.name}_h{value}", host.labels)
        deformed = AcmStructure(alg, s.phi, s.xi.scale(1 / value), s.eta.scale(value), name)
    elif isinstance(host, PatchPoint):
        deformed = patch_structure(homothetic_patch(host.patch, value), host.point, name)
    else:
        raise PreconditionError(f"不支持的宿主类型: {type(host).__name__}")

    table = CheckTable()
    inv = 1 / value
    table.add(deformed.equal_check('psi_scaled', deformed.psi, s.psi.values_only().scale(inv)))
    table.add(deformed.equal_check('a_scaled', deformed.op_a, s.op_a.values_only().scale(inv)))
    if not table.passed:
        worst = table.failures()[0]
        raise InvariantViolation(f"{name}: 齐性变形后 {worst.name} 不成立，偏差 {worst.violation}")
    logger.debug(f"{s.name}: 齐性变形 λ={value}")
    return deformed


# ---------------------------------------------------------------------- Kähler 因子

@dataclass
class KahlerFactor:
    """
    常系数平坦 Kähler 因子 (ℝ^{2m}, h, J)

    metric 默认单位阵；complex_structure 默认把相邻坐标配对，J e_{2i} = e_{2i+1}。
    """
    dim: int
    metric: Optional[np.ndarray] = None
    complex_structure: Optional[np.ndarray] = None
    box: float = 1.0

    def arrays(self, ctx: ScalarContext):
        """
        按上下文给出 (h, J)

        Raises:
            PreconditionError: 维数为奇数，J² ≠ −I，h 非正定或不是 J-不变的
        """
        m = self.dim
        if m < 0 or m % 2:
            raise PreconditionError(f"Kähler 因子维数必须为非负偶数，实际 {m}")
        one = ctx.one()
        if self.metric is None:
            h = FrameTensor.identity(m, ctx.kind).components
        else:
            h = ctx.array(self.metric)
        if self.complex_structure is None:
            j = exact_zeros((m, m)) if ctx.exact else np.zeros((m, m))
            for a in range(0, m, 2):
                j[a + 1, a] = one
                j[a, a + 1] = -one
        else:
            j = ctx.array(self.complex_structure)
        if m:
            ident = FrameTensor.identity(m, ctx.kind).components
            ft = FrameTensor(j, UL)
            square = ft.compose(ft).components
            if not ctx.is_zero(np.max(np.abs((square + ident).astype(float)))):
                raise PreconditionError("Kähler 因子的 J 不满足 J² = −I")
            pulled = j.T.dot(h).dot(j)
            if not ctx.is_zero(np.max(np.abs((pulled - h).astype(float)))):
                raise PreconditionError("Kähler 因子的度量不是 J-不变的")
            if not is_positive_definite(h):
                raise PreconditionError("Kähler 因子的度量不是正定的")
        return h, j


def _block(a: np.ndarray, b: np.ndarray, exact: bool) -> np.ndarray:
    n, m = a.shape[0], b.shape[0]
    out = exact_zeros((n + m, n + m)) if exact else np.zeros((n + m, n + m))
    out[:n, :n] = a
    out[n:, n:] = b
    return out


def _pad(v: np.ndarray, m: int, exact: bool) -> np.ndarray:
    tail = exact_zeros((m,)) if exact else np.zeros(m)
    return np.concatenate([v, tail])


def product_patch(patch: PatchGeometry, k: KahlerFactor) -> PatchGeometry:
    """
    坐标片与平坦 Kähler 因子的乘积，结构场按分块扩展

    Raises:
        PreconditionError: 因子无效或度量不是单位阵
    """
    h, j = k.arrays(patch.ctx)
    if k.metric is not None and not np.allclose(np.asarray(h, float), np.eye(k.dim)):
        raise PreconditionError("坐标片乘积只支持单位度量的 Kähler 因子")
    n, m = patch.dim, k.dim
    base = patch.fields
    j_rows = np.asarray(j, float).tolist()

    def phi_fn(xs):
        rows = [list(row) + [0.0] * m for row in base['phi'].fn(xs[:n])]
        rows.extend([0.0] * n + jr for jr in j_rows)
        return rows

    def xi_fn(xs):
        return list(base['xi'].fn(xs[:n])) + [0.0] * m

    def eta_fn(xs):
        return list(base['eta'].fn(xs[:n])) + [0.0] * m

    fields = {
        'phi': FieldSpec(phi_fn, (UPPER, LOWER)),
        'xi': FieldSpec(xi_fn, (UPPER,)),
        'eta': FieldSpec(eta_fn, (LOWER,)),
    }
    return patch.with_flat_factor(m, k.box, fields)


def product_with_kahler(s: AcmStructure, k: KahlerFactor) -> AcmStructure:
    """
    与平坦 Kähler 因子的乘积 (φ ⊕ J, (ξ, 0), (η, 0), g ⊕ h)

    因子维数为 0 时原样返回。

    Raises:
        PreconditionError: s 不是反拟 Sasakian 结构，或因子无效
    """
    if not classify(s, with_rank=False).flag('anti_quasi_sasakian'):
        raise PreconditionError(f"{s.name}: 只有反拟 Sasakian 结构可以与 Kähler 因子作乘积")
    if k.dim == 0:
        k.arrays(s.ctx)
        return s
    host = s.host
    exact = s.ctx.exact
    name = f"{s.name}xK{k.dim}"
    if isinstance(host, LieAlgebraData):
        h, j = k.arrays(host.ctx)
        zeros = exact_zeros((k.dim,) * 3) if exact else np.zeros((k.dim,) * 3)
        factor = LieAlgebraData(zeros, h, host.ctx, f"kahler_{k.dim}",
                                [f"k{i}" for i in range(1, k.dim + 1)])
        alg = host.direct_sum(factor)
        phi = _block(s.phi.components, j, exact)
        xi = _pad(s.xi.components, k.dim, exact)
        eta = _pad(s.eta.components, k.dim, exact)
        product = AcmStructure(alg, FrameTensor(phi, UL),
                               FrameTensor(xi, (UPPER,)), FrameTensor(eta, (LOWER,)), name)
    elif isinstance(host, PatchPoint):
        patch = product_patch(host.patch, k)
        point = np.concatenate([host.point, np.zeros(k.dim)])
        product = patch_structure(patch, point, name)
    else:
        raise PreconditionError(f"不支持的宿主类型: {type(host).__name__}")
    logger.debug(f"{s.name}: 与 {k.dim} 维 Kähler 因子作乘积")
    return product

