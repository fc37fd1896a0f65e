#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
微分形式
标架下的外微分（含标架导数项与括号项）、内乘与交错性检查
"""

from __future__ import annotations

from geometry.connection import ConnectionData, covariant_derivative
from hosts.base_host import BaseHost
from tensors.frame_tensor import FrameTensor, LOWER, UPPER, antisymmetrize, einsum
from tensors.scalar import ScalarKind, max_abs
from utils.errors import NotAlternatingError, PreconditionError, SlotVarianceError

_SLOTS = 'abcdefghijklmnop'


def _require_form(omega: FrameTensor):
    if any(s != LOWER for s in omega.signature):
        raise SlotVarianceError("微分形式的所有槽位必须为下标")


def require_alternating(host: BaseHost, omega: FrameTensor):
    """
    检查形式交错

    Raises:
        NotAlternatingError: 交错化后与原形式不同
    """
    _require_form(omega)
    if omega.rank <= 1:
        return
    values = omega.values_only()
    defect = max_abs((antisymmetrize(values) - values).components)
    if not host.ctx.is_zero(defect, float(values.max_abs())):
        raise NotAlternatingError(f"形式不交错，偏差 {defect}")


def exterior_derivative(host: BaseHost, omega: FrameTensor) -> FrameTensor:
    """
    外微分
    dω(X_0..X_k) = Σ_i (−1)^i X_i ω(..X̂_i..) + Σ_{i<j} (−1)^{i+j} ω([X_i,X_j], ..X̂_i..X̂_j..)

    按交错化写成 dω = (k+1)·Alt(D) − (k(k+1)/2)·Alt(E)，其中
    D[i0, i1..ik] = e_{i0} ω[i1..ik]，E[a, b, rest] = ω([e_a, e_b], rest)。

    Args:
        host: 宿主（提供括号；坐标片上 ω 需携带一阶射流）
        omega: 交错的 k-形式

    Returns:
        (k+1)-形式

    Raises:
        NotAlternatingError: 输入不交错
    """
    require_alternating(host, omega)
    k = omega.rank
    kind = host.kind
    dim = host.dim
    # 求导槽位移到最前
    deriv = omega.frame_derivative()
    deriv = deriv.transpose(k, *range(k)) if k else deriv
    result = antisymmetrize(deriv).scale(_int(k + 1, kind))
    if k >= 1:
        rest = _SLOTS[1:k]
        brackets = host.brackets()
        bracket_term = einsum(f"xym,m{rest}->xy{rest}", brackets, omega,
                              signature=(LOWER,) * (k + 1))
        result = result - antisymmetrize(bracket_term).scale(_int(k * (k + 1) // 2, kind))
    if result.dim != dim:
        raise PreconditionError("外微分维数不一致")
    return result


def d_invariant_form(host: BaseHost, omega: FrameTensor) -> FrameTensor:
    """
    左不变形式的外微分：标架导数项为零，只剩括号项（1-形式时 dα(X,Y) = −α([X,Y])）

    Raises:
        PreconditionError: 宿主不是李代数
    """
    if not host.is_invariant:
        raise PreconditionError(f"{host.name} 不是左不变标架")
    return exterior_derivative(host, omega)


def exterior_derivative_via_connection(conn: ConnectionData, omega: FrameTensor) -> FrameTensor:
    """无挠联络给出的外微分 dω = (k+1)·Alt(∇ω)，求导槽位在前"""
    if not conn.torsion_free:
        raise PreconditionError("该公式要求无挠联络")
    _require_form(omega)
    k = omega.rank
    nabla = covariant_derivative(conn, omega)
    nabla = nabla.transpose(k, *range(k)) if k else nabla
    return antisymmetrize(nabla).scale(_int(k + 1, conn.host.kind))


def interior(vector: FrameTensor, omega: FrameTensor) -> FrameTensor:
    """内乘 i_X ω：X 填入第一个槽位"""
    _require_form(omega)
    if vector.signature != (UPPER,):
        raise SlotVarianceError("内乘需要向量")
    if omega.rank == 0:
        raise SlotVarianceError("函数没有内乘")
    rest = _SLOTS[1:omega.rank]
    return einsum(f"a,a{rest}->{rest}", vector, omega, signature=omega.signature[1:])


def _int(value: int, kind: ScalarKind):
    return value if kind is ScalarKind.EXACT else float(value)
