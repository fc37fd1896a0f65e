#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
几乎切触度量结构
(φ, ξ, η, g) 及其派生张量：基本 2-形式 Φ、ψ = −∇ξ、A = φψ、Nijenhuis 挠率；
Nijenhuis 挠率在李代数上按括号与 Levi-Civita 两条路线计算并交叉验证。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Optional, Sequence

import numpy as np

from geometry.connection import ConnectionData, covariant_derivative, half, levi_civita, lie_derivative
from geometry.curvature import CurvatureData, curvature
from geometry.forms import exterior_derivative
from hosts.base_host import BaseHost
from hosts.patch import PatchGeometry
from tensors.checks import CheckTable, IdentityCheck, check_all, check_true, check_zero
from tensors.frame_tensor import FrameTensor, LOWER, UPPER, einsum, einsum_arrays
from tensors.linalg import SymSpectrum, nullspace, sym_eigen
from tensors.scalar import ScalarKind
from utils.errors import (
    DegenerateError, DimensionMismatchError, NotSymmetricError, RouteDisagreementError,
    SlotVarianceError,
)
from utils.logger import get_logger

logger = get_logger()

UL = (UPPER, LOWER)
LL = (LOWER, LOWER)
ULL = (UPPER, LOWER, LOWER)


def _coerce(host: BaseHost, value: Any, signature: Sequence[str]) -> FrameTensor:
    if isinstance(value, FrameTensor):
        if value.signature != tuple(signature):
            raise SlotVarianceError(f"签名应为 {tuple(signature)}，实际 {value.signature}")
        return value
    return FrameTensor.from_values(value, signature, host.ctx)


class AcmStructure:
    """
    几乎切触度量结构

    host 提供标架、度量与括号；phi 为 (1,1) 张量，xi 为向量，eta 为余向量。
    派生张量按需计算并缓存，结构本身不可变。
    """

    def __init__(self, host: BaseHost, phi: Any, xi: Any, eta: Any, name: str = 'structure'):
        """
        初始化结构

        Args:
            host: 李代数或坐标片上的点
            phi: (1,1) 张量或矩阵（phi[k, j] 为 φ(e_j) 的第 k 个分量）
            xi: Reeb 向量
            eta: 1-形式
            name: 结构名称

        Raises:
            DimensionMismatchError: 分量维数与宿主不一致
            SlotVarianceError: 签名错误
        """
        self.host = host
        self.name = name
        self.phi = _coerce(host, phi, UL)
        self.xi = _coerce(host, xi, (UPPER,))
        self.eta = _coerce(host, eta, (LOWER,))
        for t in (self.phi, self.xi, self.eta):
            if t.dim != host.dim:
                raise DimensionMismatchError(f"{name}: 张量维数 {t.dim} 与宿主维数 {host.dim} 不一致")

    # ------------------------------------------------------------------ 基本属性

    @property
    def ctx(self):
        return self.host.ctx

    @property
    def kind(self) -> ScalarKind:
        return self.host.kind

    @property
    def dim(self) -> int:
        return self.host.dim

    @property
    def g(self) -> FrameTensor:
        return self.host.metric()

    def with_phi(self, phi: Any, name: str) -> 'AcmStructure':
        """同一 (ξ, η, g) 上换一个 φ"""
        return AcmStructure(self.host, phi, self.xi, self.eta, name)

    def describe(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'host': self.host.name,
            'dim': self.dim,
            'phi': self.phi.values_only().components.tolist(),
            'xi': self.xi.values_only().components.tolist(),
            'eta': self.eta.values_only().components.tolist(),
        }

    # ------------------------------------------------------------------ 派生张量

    @cached_property
    def connection(self) -> ConnectionData:
        return levi_civita(self.host)

    @cached_property
    def curvature(self) -> CurvatureData:
        return curvature(self.host, self.connection)

    @cached_property
    def scale(self) -> float:
        """浮点判零的尺度：度量、联络系数与结构张量的最大分量模"""
        if self.ctx.exact:
            return 0.0
        parts = (self.g, self.connection.gamma, self.phi, self.xi, self.eta)
        return max(float(t.values_only().max_abs()) for t in parts)

    @cached_property
    def nabla_xi(self) -> FrameTensor:
        """B[k, j] = (∇_{e_j} ξ)^k"""
        return covariant_derivative(self.connection, self.xi)

    @cached_property
    def psi(self) -> FrameTensor:
        return -self.nabla_xi

    @cached_property
    def op_a(self) -> FrameTensor:
        """A = −φ∘∇ξ = φψ"""
        return self.phi.compose(self.psi)

    @cached_property
    def fundamental(self) -> FrameTensor:
        """Φ(X, Y) = g(X, φY)"""
        return einsum('ia,aj->ij', self.g, self.phi, signature=LL)

    @cached_property
    def psi_form(self) -> FrameTensor:
        """Ψ(X, Y) = g(X, ψY)"""
        return einsum('ia,aj->ij', self.g, self.psi, signature=LL)

    @cached_property
    def a_form(self) -> FrameTensor:
        """𝒜(X, Y) = g(X, AY)"""
        return einsum('ia,aj->ij', self.g, self.op_a, signature=LL)

    @cached_property
    def d_eta(self) -> FrameTensor:
        return exterior_derivative(self.host, self.eta)

    @cached_property
    def d_fundamental(self) -> FrameTensor:
        return exterior_derivative(self.host, self.fundamental)

    @cached_property
    def nabla_phi(self) -> FrameTensor:
        """D[k, j, a] = ((∇_{e_a} φ) e_j)^k"""
        return covariant_derivative(self.connection, self.phi)

    @cached_property
    def nabla_fundamental(self) -> FrameTensor:
        """(∇Φ)[y, z, x] = (∇_{e_x} Φ)(e_y, e_z)"""
        return covariant_derivative(self.connection, self.fundamental)

    @cached_property
    def lie_phi(self) -> FrameTensor:
        return lie_derivative(self.connection, self.xi, self.phi)

    @cached_property
    def killing_defect(self) -> FrameTensor:
        """(L_ξ g)(X, Y) = g(∇_X ξ, Y) + g(X, ∇_Y ξ)"""
        lowered = einsum('aj,ai->ij', self.g, self.nabla_xi, signature=LL)
        return lowered + lowered.transpose(1, 0)

    @cached_property
    def nijenhuis(self) -> FrameTensor:
        return nijenhuis(self)

    @cached_property
    def horizontal_projector(self) -> FrameTensor:
        """P = I − ξ⊗η，投影到 D = ker η"""
        xi_eta = einsum('k,j->kj', self.xi.values_only(), self.eta.values_only(), signature=UL)
        return FrameTensor.identity(self.dim, self.kind) - xi_eta

    @cached_property
    def horizontal_kernel(self) -> np.ndarray:
        """E = ker η ∩ ker dη 的基（按列）"""
        eta = self.eta.values_only().components
        d_eta = self.d_eta.values_only().components
        stacked = np.concatenate([eta.reshape(1, -1), d_eta], axis=0)
        return nullspace(stacked, self.ctx)

    # ------------------------------------------------------------------ 判零辅助

    def zero_check(self, name: str, t: FrameTensor, note: str = '') -> IdentityCheck:
        return check_zero(name, t.values_only(), self.ctx, self.scale, note)

    def equal_check(self, name: str, a: FrameTensor, b: FrameTensor, note: str = '') -> IdentityCheck:
        a, b = a.values_only(), b.values_only()
        scale = self.scale
        if not self.ctx.exact:
            scale = max(scale, float(a.max_abs()), float(b.max_abs()))
        return check_zero(name, a - b, self.ctx, scale, note)

    def one(self) -> FrameTensor:
        """零阶张量 1"""
        return FrameTensor(np.asarray(self.ctx.one()), (), dim=self.dim)


# ---------------------------------------------------------------------- 结构有效性

def validate(s: AcmStructure) -> CheckTable:
    """
    检查几乎切触度量结构的代数恒等式

    φ² = −I + η⊗ξ，η(ξ) = 1，η∘φ = 0，φξ = 0，g(φX, φY) = g(X, Y) − η(X)η(Y)，度量对称正定

    Returns:
        CheckTable，失败项带见证下标
    """
    phi, xi, eta = s.phi.values_only(), s.xi.values_only(), s.eta.values_only()
    g = s.g.values_only()
    table = CheckTable()
    identity = FrameTensor.identity(s.dim, s.kind)
    xi_eta = einsum('k,j->kj', xi, eta, signature=UL)
    table.add(s.equal_check('phi_squared', phi.compose(phi), xi_eta - identity))
    eta_xi = einsum('i,i->', eta, xi, signature=())
    table.add(s.equal_check('eta_xi', eta_xi, s.one()))
    table.add(s.zero_check('eta_phi', einsum('k,kj->j', eta, phi, signature=(LOWER,))))
    table.add(s.zero_check('phi_xi', phi.apply(xi)))
    g_phi = einsum('ab,bj->aj', g, phi, signature=LL)
    pulled = einsum('ai,aj->ij', phi, g_phi, signature=LL)
    eta_eta = einsum('i,j->ij', eta, eta, signature=LL)
    table.add(s.equal_check('metric_compatible', pulled, g - eta_eta))
    try:
        s.host.check_metric()
        table.add(check_true('metric_positive', True))
    except (DegenerateError, NotSymmetricError) as e:
        table.add(check_true('metric_positive', False, str(e)))
    if not table.passed:
        logger.debug(f"{s.name}: 结构无效 ({', '.join(c.name for c in table.failures())})")
    return table


# ---------------------------------------------------------------------- Nijenhuis 挠率

def nijenhuis_via_connection(s: AcmStructure) -> FrameTensor:
    """
    N_φ = [φ,φ] + dη⊗ξ 的 Levi-Civita 展开：
    (∇_{φX}φ)Y − (∇_{φY}φ)X + (∇_Xφ)φY − (∇_Yφ)φX + η(X)∇_Yξ − η(Y)∇_Xξ
    """
    d = s.nabla_phi
    first = einsum('kja,ai->kij', d, s.phi, signature=ULL)
    second = einsum('kai,aj->kij', d, s.phi, signature=ULL)
    reeb = einsum('i,kj->kij', s.eta, s.nabla_xi, signature=ULL)
    return (first - first.transpose(0, 2, 1) + second - second.transpose(0, 2, 1)
            + reeb - reeb.transpose(0, 2, 1))


def nijenhuis_via_brackets(s: AcmStructure) -> FrameTensor:
    """
    左不变标架上的定义式：
    [φX,φY] + φ²[X,Y] − φ[φX,Y] − φ[X,φY] + dη(X,Y)ξ
    """
    c = s.host.brackets()
    phi = s.phi
    lll = (LOWER, LOWER, UPPER)
    u = einsum('ai,abk->ibk', phi, c, signature=lll)
    both = einsum('ibk,bj->kij', u, phi, signature=ULL)
    square = einsum('km,ijm->kij', phi.compose(phi), c, signature=ULL)
    right = einsum('ibm,bj->ijm', c, phi, signature=lll)
    left = einsum('ai,ajm->ijm', phi, c, signature=lll)
    mixed = einsum('km,ijm->kij', phi, right + left, signature=ULL)
    reeb = einsum('k,ij->kij', s.xi, s.d_eta, signature=ULL)
    return both + square - mixed + reeb


def nijenhuis(s: AcmStructure) -> FrameTensor:
    """
    Nijenhuis 挠率 N[k, i, j] = N_φ(e_i, e_j)^k

    李代数上两条路线都计算并比较；坐标片上只用 Levi-Civita 路线。

    Raises:
        RouteDisagreementError: 两条路线结果不一致
    """
    via_connection = nijenhuis_via_connection(s)
    if not s.host.is_invariant:
        return via_connection
    via_brackets = nijenhuis_via_brackets(s)
    agreement = s.equal_check('nijenhuis_routes', via_connection, via_brackets)
    if not agreement:
        raise RouteDisagreementError(
            f"{s.name}: Nijenhuis 两条路线不一致，偏差 {agreement.violation}，位置 {agreement.witness}")
    return via_brackets


def nijenhuis_form(s: AcmStructure) -> FrameTensor:
    """N(X, Y, Z) = g(N(X, Y), Z)，槽位顺序 [i, j, z]"""
    return einsum('kij,kz->ijz', s.nijenhuis, s.g.values_only(), signature=(LOWER,) * 3)


# ---------------------------------------------------------------------- 派生算子

@dataclass
class DerivedOperators:
    """A、ψ 及其 2-形式，ψ² 的谱与两条定义路线的比较"""
    op_a: FrameTensor
    psi: FrameTensor
    psi_form: FrameTensor
    a_form: FrameTensor
    spectrum: Optional[SymSpectrum]
    checks: CheckTable = field(default_factory=CheckTable)
    kernel_dim: int = 0
    e_dim: int = 0
    note: str = ''

    def to_dict(self) -> Dict[str, Any]:
        return {
            'A': self.op_a.values_only().components.tolist(),
            'psi': self.psi.values_only().components.tolist(),
            'spectrum': self.spectrum.to_dict() if self.spectrum is not None else None,
            'kernel_dim': self.kernel_dim,
            'e_dim': self.e_dim,
            'checks': self.checks.to_dict(),
            'note': self.note,
        }


def derived_operators(s: AcmStructure, cluster_tol: float = 1e-8, offdiag_tol: float = 1e-12,
                      max_sweeps: int = 100) -> DerivedOperators:
    """
    派生算子 A、ψ、Ψ、𝒜 与 ψ² 的谱

    ξ 为 Killing 场时另按 dη 计算：Ψ = ½dη，𝒜(Z, X) = ½dη(X, φZ)，并与 ∇ξ 路线比较。
    ker ψ 与 ⟨ξ⟩ ⊕ E 比较，E = ker η ∩ ker dη。

    Raises:
        RouteDisagreementError: Killing 情形下两条路线不一致
    """
    checks = CheckTable()
    notes = []
    killing = s.zero_check('xi_killing', s.killing_defect)
    checks.add(killing)
    if killing:
        h = half(s.kind)
        psi_route = s.equal_check('psi_route', s.psi_form, s.d_eta.scale(h))
        a_dual = einsum('xb,bz->zx', s.d_eta.values_only(), s.phi.values_only(), signature=LL).scale(h)
        a_route = s.equal_check('a_route', s.a_form, a_dual)
        for check in (psi_route, a_route):
            checks.add(check)
            if not check:
                raise RouteDisagreementError(
                    f"{s.name}: {check.name} 两条路线不一致，偏差 {check.violation}")
    else:
        notes.append('xi 不是 Killing 场，未比较 dη 路线')

    psi = s.psi.values_only()
    psi_sq = psi.compose(psi)
    spectrum = None
    try:
        spectrum = sym_eigen(psi_sq, metric=s.g.values_only(), offdiag_tol=offdiag_tol,
                             cluster_tol=cluster_tol, max_sweeps=max_sweeps,
                             sym_tol=max(s.ctx.tol, 1e-12))
    except NotSymmetricError as e:
        notes.append(f"ψ² 不是 g-自伴的 (非对称量 {e.asymmetry:.3e})，未给出谱")

    kernel = nullspace(psi.components, s.ctx)
    e_basis = s.horizontal_kernel
    psi_on_e = einsum_arrays('ij,jk->ik', psi.components, e_basis) if e_basis.shape[1] else None
    pieces = [s.zero_check('psi_xi', psi.apply(s.xi.values_only()))]
    if psi_on_e is not None:
        pieces.append(check_zero('psi_e', psi_on_e, s.ctx, s.scale))
    pieces.append(check_true('kernel_dim', kernel.shape[1] == 1 + e_basis.shape[1],
                             f"dim ker ψ = {kernel.shape[1]}, 1 + dim E = {1 + e_basis.shape[1]}"))
    checks.add(check_all('psi_kernel', pieces))
    logger.debug(f"{s.name}: 派生算子已计算, dim ker ψ = {kernel.shape[1]}")
    return DerivedOperators(s.op_a, s.psi, s.psi_form, s.a_form, spectrum, checks,
                            int(kernel.shape[1]), int(e_basis.shape[1]), '; '.join(notes))


# ---------------------------------------------------------------------- 构造辅助

def standard_phi(dim: int, kind: ScalarKind, reeb_index: int = 0) -> FrameTensor:
    """
    标准 φ：除 Reeb 方向外按相邻两个标架向量配对，φ e_a = e_b，φ e_b = −e_a

    Raises:
        DimensionMismatchError: 维数为偶数
    """
    if dim % 2 == 0:
        raise DimensionMismatchError(f"几乎切触结构需要奇数维，实际 {dim}")
    phi = FrameTensor.zeros(dim, UL, kind)
    one = FrameTensor.identity(1, kind).components[0, 0]
    rest = [i for i in range(dim) if i != reeb_index]
    for a, b in zip(rest[0::2], rest[1::2]):
        phi.components[b, a] = one
        phi.components[a, b] = -one
    return phi


def standard_structure(host: BaseHost, name: str = 'standard', reeb_index: int = 0) -> AcmStructure:
    """正交标架上的标准结构：ξ = e_reeb，η 为其对偶，φ 见 standard_phi"""
    xi = host.basis(reeb_index)
    eta = host.basis(reeb_index, LOWER)
    return AcmStructure(host, standard_phi(host.dim, host.kind, reeb_index), xi, eta, name)


def patch_structure(patch: PatchGeometry, point: Sequence[float], name: Optional[str] = None) -> AcmStructure:
    """
    坐标片在一点上的结构，场名为 phi、xi、eta

    Raises:
        DomainError: 点不在定义域内
    """
    host = patch.at(point)
    return AcmStructure(host, host.field('phi'), host.field('xi'), host.field('eta'),
                        name or f"{patch.name}@{np.round(np.asarray(point, float), 6).tolist()}")
