#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
曲率模块
约定 R(X,Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z，
Ric(Y,Z) = tr(X ↦ R(X,Y)Z)，Q 为 Ric 对应的 (1,1) 张量
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict

from geometry.connection import ConnectionData
from hosts.base_host import BaseHost
from tensors.frame_tensor import FrameTensor, UPPER, LOWER, einsum
from utils.errors import DegenerateError, DimensionMismatchError
from utils.logger import get_logger

logger = get_logger()

CONVENTION = 'R(X,Y)Z = [nabla_X, nabla_Y]Z - nabla_[X,Y] Z; Ric(Y,Z) = tr(X -> R(X,Y)Z)'


@dataclass(frozen=True, eq=False)
class CurvatureData:
    """
    曲率数据

    R[l, i, j, k] 为 R(e_i, e_j) e_k 的第 l 个分量；ric[j, k] = Σ_i R[i, i, j, k]。
    """
    R: FrameTensor
    ric: FrameTensor
    Q: FrameTensor
    scalar: Any
    host: BaseHost
    connection: str = 'levi_civita'
    convention: str = CONVENTION

    def summary(self) -> Dict[str, Any]:
        return {
            'connection': self.connection,
            'convention': self.convention,
            'ricci': self.ric.components.tolist(),
            'scalar': self.scalar,
        }


def curvature(host: BaseHost, conn: ConnectionData) -> CurvatureData:
    """
    由联络系数计算曲率

    R[l,i,j,k] = e_i Γ[l,j,k] − e_j Γ[l,i,k] + Γ[l,i,m]Γ[m,j,k] − Γ[l,j,m]Γ[m,i,k] − c[i,j,m]Γ[l,m,k]

    Args:
        host: 宿主（提供括号与度量）
        conn: 任意联络（Levi-Civita 或带挠联络）

    Returns:
        CurvatureData；带挠联络的 Ric 不一定对称
    """
    gamma = conn.gamma
    c = host.brackets()
    sig4 = (UPPER, LOWER, LOWER, LOWER)
    d_gamma = gamma.frame_derivative()
    # d_gamma[l,j,k,i] = e_i Γ[l,j,k]
    deriv = d_gamma.transpose(0, 3, 1, 2)
    quad = einsum('lim,mjk->lijk', gamma, gamma, signature=sig4)
    brk = einsum('ijm,lmk->lijk', c, gamma, signature=sig4)
    riemann = (deriv - deriv.transpose(0, 2, 1, 3)
               + quad - quad.transpose(0, 2, 1, 3) - brk).values_only()
    ric = einsum('iijk->jk', riemann, signature=(LOWER, LOWER))
    q_op = einsum('aj,jk->ak', host.metric_inverse().values_only(), ric, signature=(UPPER, LOWER))
    scalar = q_op.trace().value
    logger.debug(f"{host.name}: 曲率已计算 ({conn.name})")
    return CurvatureData(riemann, ric, q_op, scalar, host, conn.name)


def riemann_apply(curv: CurvatureData, x: FrameTensor, y: FrameTensor) -> FrameTensor:
    """R(X, Y) 作为 (1,1) 张量"""
    partial = einsum('lijk,i->ljk', curv.R, x, signature=(UPPER, LOWER, LOWER))
    return einsum('ljk,j->lk', partial, y, signature=(UPPER, LOWER))


def sectional(curv: CurvatureData, u: FrameTensor, v: FrameTensor, metric: FrameTensor = None):
    """
    截面曲率 K(u,v) = g(R(u,v)v, u) / (g(u,u)g(v,v) − g(u,v)²)

    Raises:
        DegenerateError: u, v 线性相关（Gram 行列式为零）
    """
    if u.signature != (UPPER,) or v.signature != (UPPER,):
        raise DimensionMismatchError("截面曲率需要两个向量")
    g = (metric if metric is not None else curv.host.metric()).values_only()
    u, v = u.values_only(), v.values_only()

    def inner(a, b):
        return einsum('i,ij,j->', a, g, b, signature=()).value

    gram = inner(u, u) * inner(v, v) - inner(u, v) ** 2
    if curv.host.ctx.is_zero(gram, max(abs(inner(u, u)), abs(inner(v, v))) ** 2):
        raise DegenerateError("u 与 v 线性相关，截面退化")
    r_uv = riemann_apply(curv, u, v)
    w = einsum('lk,k->l', r_uv, v, signature=(UPPER,))
    numerator = inner(w, u)
    return numerator / gram
