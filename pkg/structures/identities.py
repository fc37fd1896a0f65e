#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
恒等式验证
反拟 Sasakian 结构方程、Sasakian 结构方程、闭形式三元组 (𝒜, Φ, Ψ)，
以及反拟 Sasakian 流形上的整套恒等式（李导数、∇_ξ、曲率、Ricci）。
对一般几乎切触度量结构成立的恒等式单独放在 general_identities。
"""

from __future__ import annotations

from typing import List

import numpy as np

from geometry.connection import along, covariant_derivative, lie_derivative
from geometry.curvature import sectional
from geometry.forms import exterior_derivative, interior
from structures.acm import AcmStructure, LL, UL, ULL, derived_operators
from structures.classification import (
    cg_membership, gqs_and_transverse_checks, phi_pullback, reeb_nijenhuis,
)
from tensors.checks import CheckTable, IdentityCheck, check_all, check_true, check_zero
from tensors.frame_tensor import FrameTensor, LOWER, UPPER, einsum
from utils.errors import DegenerateError, InvariantViolation, NotAlternatingError
from utils.logger import get_logger

logger = get_logger()

LLL = (LOWER, LOWER, LOWER)


def _int(s: AcmStructure, value: int):
    return value if s.ctx.exact else float(value)


# ---------------------------------------------------------------------- 结构方程

def aqs_structure_equation(s: AcmStructure) -> CheckTable:
    """
    反拟 Sasakian 结构方程
    (∇_Xφ)Y = 2η(X)AY + η(Y)AX + g(X, AY)ξ，并且 A 反对称、Aφ = −φA

    Returns:
        CheckTable，键为 structure_equation、a_skew、a_anticommutes_phi
    """
    eta = s.eta.values_only()
    xi = s.xi.values_only()
    op_a = s.op_a.values_only()
    # 布局 [k, j, x]：X = e_x 为求导方向，Y = e_j
    rhs = (einsum('x,kj->kjx', eta, op_a, signature=ULL).scale(_int(s, 2))
           + einsum('j,kx->kjx', eta, op_a, signature=ULL)
           + einsum('xj,k->kjx', s.a_form.values_only(), xi, signature=ULL))
    table = CheckTable()
    table.add(s.equal_check('structure_equation', s.nabla_phi, rhs))
    a_form = s.a_form.values_only()
    table.add(s.zero_check('a_skew', a_form + a_form.transpose(1, 0)))
    phi = s.phi.values_only()
    table.add(s.zero_check('a_anticommutes_phi', op_a.compose(phi) + phi.compose(op_a)))
    return table


def sasakian_structure_equation(s: AcmStructure) -> IdentityCheck:
    """(∇_Xφ)Y = g(X, Y)ξ − η(Y)X"""
    g = s.g.values_only()
    rhs = (einsum('xj,k->kjx', g, s.xi.values_only(), signature=ULL)
           - einsum('j,kx->kjx', s.eta.values_only(), FrameTensor.identity(s.dim, s.kind), signature=ULL))
    return s.equal_check('sasakian_structure_equation', s.nabla_phi, rhs)


def _closed(s: AcmStructure, name: str, form: FrameTensor) -> IdentityCheck:
    try:
        return s.zero_check(name, exterior_derivative(s.host, form))
    except NotAlternatingError as e:
        return check_true(name, False, str(e))


def closed_triplet_check(s: AcmStructure) -> CheckTable:
    """
    d𝒜 = 0，dΦ = 0，dΨ = 0，dη = 2Ψ

    𝒜 或 Ψ 不交错时对应项记为失败，不抛异常。
    """
    table = CheckTable()
    table.add(_closed(s, 'd_a_form_zero', s.a_form))
    table.add(s.zero_check('d_phi_zero', s.d_fundamental))
    table.add(_closed(s, 'd_psi_form_zero', s.psi_form))
    table.add(s.equal_check('d_eta_twice_psi', s.d_eta, s.psi_form.scale(_int(s, 2))))
    return table


# ---------------------------------------------------------------------- 一般恒等式

def general_identities(s: AcmStructure) -> CheckTable:
    """
    任意几乎切触度量结构上都成立的恒等式

    dΦ(ξ, X, Y) = (L_ξg)(X, φY) + g(X, (L_ξφ)Y)
    η(N_φ(X, Y)) = −dη(φX, φY) + dη(X, Y)
    N_φ(ξ, X) = −φ(L_ξφ)X + dη(ξ, X)ξ
    dη(ξ, X) = η((L_ξφ)φX)
    """
    phi = s.phi.values_only()
    xi = s.xi.values_only()
    eta = s.eta.values_only()
    g = s.g.values_only()
    lie_phi = s.lie_phi.values_only()
    d_eta = s.d_eta.values_only()
    table = CheckTable()

    lhs = interior(xi, s.d_fundamental.values_only())
    rhs = (einsum('xa,ay->xy', s.killing_defect.values_only(), phi, signature=LL)
           + einsum('xa,ay->xy', g, lie_phi, signature=LL))
    table.add(s.equal_check('d_phi_reeb', lhs, rhs))

    eta_n = einsum('k,kij->ij', eta, s.nijenhuis.values_only(), signature=LL)
    table.add(s.equal_check('eta_nijenhuis', eta_n, d_eta - phi_pullback(s, d_eta)))

    reeb_d_eta = interior(xi, d_eta)
    expected = (einsum('k,x->kx', xi, reeb_d_eta, signature=UL)
                - phi.compose(lie_phi))
    table.add(s.equal_check('reeb_nijenhuis', reeb_nijenhuis(s), expected))

    eta_lie = einsum('k,kx->x', eta, lie_phi.compose(phi), signature=(LOWER,))
    table.add(s.equal_check('d_eta_reeb', reeb_d_eta, eta_lie))
    return table


# ---------------------------------------------------------------------- 反拟 Sasakian 恒等式

def _nabla_psi_form_checks(s: AcmStructure) -> List[IdentityCheck]:
    """
    ∇Ψ 的三个恒等式，(∇_XΨ)(Y, Z) 记为 P[y, z, x]，W(X, Z) = g(ψ²X, Z)：

    P(φY, Z; X) − P(Y, φZ; X) = η(Y)W(X, φZ) + η(Z)W(X, φY)
    P(φY, φZ; X) + P(Y, Z; X) = −η(Y)W(X, Z) + η(Z)W(X, Y)
    P(φY, Z; φX) + P(Y, Z; X) = −η(Y)W(X, Z) + 2η(Z)W(X, Y)
    """
    phi = s.phi.values_only()
    eta = s.eta.values_only()
    g = s.g.values_only()
    psi = s.psi.values_only()
    p = covariant_derivative(s.connection, s.psi_form).values_only()
    # 统一换成 [x, y, z]
    pxyz = p.transpose(2, 0, 1)
    w = einsum('bx,bz->xz', psi.compose(psi), g, signature=LL)
    w_phi = einsum('xc,cz->xz', w, phi, signature=LL)

    phi_y = einsum('ay,xaz->xyz', phi, pxyz, signature=LLL)
    phi_z = einsum('az,xya->xyz', phi, pxyz, signature=LLL)
    phi_yz = einsum('az,xya->xyz', phi, phi_y, signature=LLL)
    phi_xy = einsum('cx,cyz->xyz', phi, phi_y, signature=LLL)

    y_wphi = einsum('y,xz->xyz', eta, w_phi, signature=LLL)
    z_wphi = einsum('z,xy->xyz', eta, w_phi, signature=LLL)
    y_w = einsum('y,xz->xyz', eta, w, signature=LLL)
    z_w = einsum('z,xy->xyz', eta, w, signature=LLL)

    return [
        s.equal_check('nabla_psi_form_1', phi_y - phi_z, y_wphi + z_wphi),
        s.equal_check('nabla_psi_form_2', phi_yz + pxyz, z_w - y_w),
        s.equal_check('nabla_psi_form_3', phi_xy + pxyz, z_w.scale(_int(s, 2)) - y_w),
    ]


def _xi_sectional_defect(s: AcmStructure) -> np.ndarray:
    """K(ξ, X) − |ψX|²/|X|²，X 取各标架向量的水平投影（投影为零的跳过）"""
    g = s.g.values_only()
    psi = s.psi.values_only()
    p = s.horizontal_projector
    xi = s.xi.values_only()
    defects = []
    for i in range(s.dim):
        x = FrameTensor(p.components[:, i].copy(), (UPPER,), dim=s.dim)
        norm = einsum('i,ij,j->', x, g, x, signature=()).value
        if s.ctx.is_zero(norm, s.scale):
            continue
        try:
            k = sectional(s.curvature, xi, x, g)
        except DegenerateError:
            continue
        psi_x = psi.apply(x)
        defects.append(k - einsum('i,ij,j->', psi_x, g, psi_x, signature=()).value / norm)
    return np.array(defects, dtype=object if s.ctx.exact else float)


def psi_norm_squared(s: AcmStructure):
    """|ψ|² = Σ g^{ab} g(ψe_a, ψe_b)"""
    gram = einsum('ka,kb->ab', s.psi.values_only(), s.psi_form.values_only(), signature=LL)
    return einsum('ab,ab->', s.host.metric_inverse().values_only(), gram, signature=()).value


def identity_suite(s: AcmStructure) -> CheckTable:
    """
    反拟 Sasakian 流形上的全部恒等式

    李导数：dη(ξ,·) = 0，L_ξη = 0，L_ξφ = L_ξψ = L_ξA = 0，dη(φX, φY) = −dη(X, Y)；
    沿 ξ 的导数：∇_ξφ = 2A，∇_ξψ = 0，∇_ξA = −2ψA，∇_ξξ = 0；
    代数关系：ψ² = A²，ψ² 自伴，φψ = A = −ψφ，ψA = −Aψ，ker ψ = ⟨ξ⟩ ⊕ E；
    曲率：(∇_Xψ)Y = R(ξ,X)Y，ψ²X = R(ξ,X)ξ，K(ξ,X) = |ψX|²，∇Ψ 的三个恒等式；
    Ricci：Ric(ξ,ξ) = |ψ|²，Ric(ξ,X) = 0，Qξ = |ψ|²ξ，Qφ = φQ；
    以及 general_identities 与 gQS ⇔ C6⊕C7⊕C10⊕C11。

    Returns:
        CheckTable（调用方应先确认结构为反拟 Sasakian）
    """
    phi = s.phi.values_only()
    xi = s.xi.values_only()
    eta = s.eta.values_only()
    psi = s.psi.values_only()
    op_a = s.op_a.values_only()
    conn = s.connection
    table = CheckTable()
    two = _int(s, 2)

    # 李导数
    table.add(s.zero_check('d_eta_reeb_zero', interior(xi, s.d_eta.values_only())))
    table.add(s.zero_check('lie_xi_eta', lie_derivative(conn, s.xi, s.eta)))
    table.add(s.zero_check('lie_xi_phi', s.lie_phi))
    table.add(s.zero_check('lie_xi_psi', lie_derivative(conn, s.xi, s.psi)))
    table.add(s.zero_check('lie_xi_a', lie_derivative(conn, s.xi, s.op_a)))
    d_eta = s.d_eta.values_only()
    table.add(s.zero_check('d_eta_phi_anti_invariant', phi_pullback(s, d_eta) + d_eta))

    # 沿 ξ 的协变导数
    nabla_psi = covariant_derivative(conn, s.psi)
    table.add(s.equal_check('nabla_xi_phi', along(s.nabla_phi, s.xi), op_a.scale(two)))
    table.add(s.zero_check('nabla_xi_psi', along(nabla_psi, s.xi)))
    table.add(s.equal_check('nabla_xi_a', along(covariant_derivative(conn, s.op_a), s.xi),
                            psi.compose(op_a).scale(-two)))
    table.add(s.zero_check('nabla_xi_xi', s.nabla_xi.values_only().apply(xi)))
    table.add(s.zero_check('xi_killing', s.killing_defect))

    # 代数关系
    psi_sq = psi.compose(psi)
    table.add(s.equal_check('psi_sq_eq_a_sq', psi_sq, op_a.compose(op_a)))
    lowered = einsum('ka,aj->kj', s.g.values_only(), psi_sq, signature=LL)
    table.add(s.equal_check('psi_sq_symmetric', lowered, lowered.transpose(1, 0)))
    table.add(s.equal_check('phi_psi_eq_a', phi.compose(psi), op_a))
    table.add(s.equal_check('psi_phi_eq_minus_a', psi.compose(phi), -op_a))
    table.add(s.zero_check('psi_a_anticommute', psi.compose(op_a) + op_a.compose(psi)))
    table.add(s.equal_check('psi_form_half_d_eta', s.psi_form.scale(two), d_eta))
    derived = derived_operators(s)
    table.add(derived.checks['psi_kernel'])
    if derived.spectrum is not None:
        top = max(derived.spectrum.eigenvalues)
        limit = max(derived.spectrum.cluster_tol, s.ctx.threshold(s.scale))
        table.add(check_true('psi_sq_nonpositive', top <= limit,
                             f"最大特征值 {top:.3e}"))

    # 曲率
    r_xi = einsum('i,lixy->lxy', xi, s.curvature.R, signature=ULL)
    table.add(s.equal_check('nabla_psi_curvature', nabla_psi, r_xi.transpose(0, 2, 1)))
    table.add(s.equal_check('psi_sq_jacobi', psi_sq, einsum('lxy,y->lx', r_xi, xi, signature=UL)))
    for check in _nabla_psi_form_checks(s):
        table.add(check)
    table.add(check_zero('xi_sectional', _xi_sectional_defect(s), s.ctx, s.scale))

    # Ricci
    ric = s.curvature.ric
    norm = psi_norm_squared(s)
    ric_xi_xi = einsum('i,ij,j->', xi, ric, xi, signature=())
    table.add(s.equal_check('ric_xi_xi', ric_xi_xi, FrameTensor(np.asarray(norm), (), dim=s.dim)))
    ric_xi = einsum('i,ij->j', xi, ric, signature=(LOWER,))
    table.add(s.zero_check('ric_xi_horizontal',
                           einsum('j,jx->x', ric_xi, s.horizontal_projector, signature=(LOWER,))))
    q_op = s.curvature.Q
    table.add(s.equal_check('q_xi', q_op.apply(xi), xi.scale(norm)))
    table.add(s.equal_check('q_commutes_phi', q_op.compose(phi), phi.compose(q_op)))

    for check in general_identities(s):
        table.add(check)

    cg = cg_membership(s)
    try:
        gqs = gqs_and_transverse_checks(s, cg)['generalized_quasi_sasakian']
        table.add(check_true('gqs_matches_cg', gqs.passed == cg['C6+C7+C10+C11'].passed))
    except InvariantViolation as e:
        table.add(check_true('gqs_matches_cg', False, str(e)))

    failed = [c.name for c in table.failures()]
    if failed:
        logger.warning(f"{s.name}: 恒等式检查未通过: {', '.join(failed)}")
    else:
        logger.debug(f"{s.name}: 恒等式检查全部通过 ({len(table.checks)} 项)")
    return table


def suite_passed(table: CheckTable) -> IdentityCheck:
    """整套恒等式的合取"""
    return check_all('identity_suite', table)
