#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
联络模块
标架下的联络系数、Koszul 公式给出的 Levi-Civita 联络、协变导数与李导数
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict

from hosts.base_host import BaseHost
from tensors.frame_tensor import FrameTensor, UPPER, LOWER, einsum
from tensors.scalar import ScalarKind
from utils.errors import DimensionMismatchError, PreconditionError
from utils.logger import get_logger

logger = get_logger()

_SLOTS = 'abcdefghijklmnop'


def half(kind: ScalarKind):
    return Fraction(1, 2) if kind is ScalarKind.EXACT else 0.5


@dataclass(frozen=True, eq=False)
class ConnectionData:
    """
    标架下的线性联络

    gamma[k, i, j] 为 ∇_{e_i} e_j 的第 k 个分量，签名 (u, l, l)。
    """
    gamma: FrameTensor
    host: BaseHost
    name: str = 'levi_civita'
    metric_compatible: bool = True
    torsion_free: bool = True

    @property
    def dim(self) -> int:
        return self.gamma.dim

    def torsion(self) -> FrameTensor:
        """T[k, i, j] = Γ[k,i,j] − Γ[k,j,i] − c[i,j,k]"""
        brackets = self.host.brackets().transpose(2, 0, 1)
        return self.gamma - self.gamma.transpose(0, 2, 1) - brackets

    def with_difference(self, h: FrameTensor, name: str, torsion_free: bool = False) -> 'ConnectionData':
        """∇ + H，H[k, i, j] 为 H(e_i, e_j) 的第 k 个分量"""
        return ConnectionData(self.gamma + h, self.host, name, self.metric_compatible, torsion_free)

    def summary(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'metric_compatible': self.metric_compatible,
            'torsion_free': self.torsion_free,
        }


def levi_civita(host: BaseHost) -> ConnectionData:
    """
    Koszul 公式：
    2g(∇_X Y, Z) = X g(Y,Z) + Y g(X,Z) − Z g(X,Y) + g([X,Y],Z) − g([Y,Z],X) + g([Z,X],Y)

    Args:
        host: 李代数或坐标片上的点

    Returns:
        无挠、度量相容的联络；精确模式下系数为有理数

    Raises:
        DegenerateError: 度量退化
    """
    g = host.metric()
    ginv = host.metric_inverse()
    c = host.brackets()
    dg = g.frame_derivative()
    # cg[i,j,l] = g([e_i,e_j], e_l)
    cg = einsum('ijm,ml->ijl', c, g, signature=(LOWER, LOWER, LOWER))
    koszul = (dg.transpose(2, 0, 1) + dg.transpose(0, 2, 1) - dg
              + cg - cg.transpose(2, 0, 1) + cg.transpose(1, 2, 0))
    gamma = einsum('kl,ijl->kij', ginv, koszul, signature=(UPPER, LOWER, LOWER)).scale(half(host.kind))
    logger.debug(f"{host.name}: Levi-Civita 联络已计算 (dim={host.dim})")
    return ConnectionData(gamma, host)


def covariant_derivative(conn: ConnectionData, t: FrameTensor) -> FrameTensor:
    """
    协变导数，求导槽位追加在最后：(∇T)[..., z] = (∇_{e_z} T)[...]

    上标槽位加 Γ[a,z,y] T[..y..]，下标槽位减 Γ[y,z,a] T[..y..]。
    """
    if t.dim != conn.dim:
        raise DimensionMismatchError(f"张量维数 {t.dim} 与联络维数 {conn.dim} 不一致")
    sig = t.signature + (LOWER,)
    letters = _SLOTS[:t.rank]
    result = t.frame_derivative()
    for s, variance in enumerate(t.signature):
        src = letters[:s] + 'y' + letters[s + 1:]
        if variance == UPPER:
            result = result + einsum(f"{letters[s]}zy,{src}->{letters}z", conn.gamma, t, signature=sig)
        else:
            result = result - einsum(f"yz{letters[s]},{src}->{letters}z", conn.gamma, t, signature=sig)
    return result


def along(nabla_t: FrameTensor, vector: FrameTensor) -> FrameTensor:
    """把最后一个（求导）槽位与向量缩并：∇_X T"""
    if vector.signature != (UPPER,):
        raise DimensionMismatchError("方向必须是向量")
    letters = _SLOTS[:nabla_t.rank - 1]
    return einsum(f"{letters}z,z->{letters}", nabla_t, vector, signature=nabla_t.signature[:-1])


def lie_derivative(conn: ConnectionData, xi: FrameTensor, t: FrameTensor) -> FrameTensor:
    """
    沿向量场 ξ 的李导数（借助无挠联络）

    L_ξ T = ∇_ξ T + Σ_下标 T[..y..] B[y,a] − Σ_上标 B[a,y] T[..y..]，B = ∇ξ

    Raises:
        PreconditionError: 联络有挠
    """
    if not conn.torsion_free:
        raise PreconditionError("李导数公式要求无挠联络")
    b = covariant_derivative(conn, xi)
    result = along(covariant_derivative(conn, t), xi)
    letters = _SLOTS[:t.rank]
    for s, variance in enumerate(t.signature):
        src = letters[:s] + 'y' + letters[s + 1:]
        if variance == UPPER:
            result = result - einsum(f"{letters[s]}y,{src}->{letters}", b, t, signature=t.signature)
        else:
            result = result + einsum(f"y{letters[s]},{src}->{letters}", b, t, signature=t.signature)
    return result
