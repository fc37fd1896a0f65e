#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Sp(n) 几乎切触度量三元组
共享 (ξ, η, g) 的三个结构 φ_1, φ_2, φ_3，满足 φ_iφ_j = φ_k = −φ_jφ_i；
双反拟 Sasakian 判定、Levi-Civita 结构方程、Nijenhuis 与 dΦ 的恒等式、
五维 SU(2) / hypo 条件，以及加权 Heisenberg 代数的构造。
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from geometry.curvature import sectional
from geometry.forms import exterior_derivative
from hosts.lie_algebra import LieAlgebraData, heisenberg_entries, heisenberg_labels
from structures.acm import AcmStructure, LL, UL, ULL, derived_operators, nijenhuis_form
from structures.classification import classify, phi_pullback
from structures.identities import sasakian_structure_equation
from tensors.checks import CheckTable, IdentityCheck, check_true
from tensors.frame_tensor import FrameTensor, LOWER, UPPER, einsum, wedge
from tensors.scalar import ScalarContext, ScalarKind
from utils.errors import DegenerateError, InvariantViolation, PreconditionError
from utils.logger import get_logger

logger = get_logger()

LLL = (LOWER, LOWER, LOWER)

# (1,2,3) 的偶置换，按 0 起始下标
EVEN_PERMUTATIONS = ((0, 1, 2), (1, 2, 0), (2, 0, 1))


@dataclass
class SpnTriple:
    """
    三个共享 (ξ, η, g) 的几乎切触度量结构

    Raises:
        PreconditionError: 三个结构的宿主、ξ 或 η 不同
    """
    structures: Tuple[AcmStructure, AcmStructure, AcmStructure]
    name: str = 'triple'
    labels: Tuple[str, str, str] = ('phi1', 'phi2', 'phi3')

    def __post_init__(self):
        first = self.structures[0]
        for other in self.structures[1:]:
            if other.host is not first.host:
                raise PreconditionError(f"{self.name}: 三个结构必须共享同一宿主（度量）")
            same_xi = first.equal_check('xi', first.xi, other.xi)
            same_eta = first.equal_check('eta', first.eta, other.eta)
            if not (same_xi and same_eta):
                raise PreconditionError(f"{self.name}: 三个结构的 ξ 或 η 不一致")

    @property
    def host(self):
        return self.structures[0].host

    @property
    def dim(self) -> int:
        return self.structures[0].dim

    @property
    def n(self) -> int:
        return (self.dim - 1) // 4

    @property
    def ctx(self):
        return self.structures[0].ctx

    def phi(self, i: int) -> FrameTensor:
        return self.structures[i].phi.values_only()

    def fundamental(self, i: int) -> FrameTensor:
        return self.structures[i].fundamental

    def omega(self, i: int) -> FrameTensor:
        """五维 SU(2) 约定 ω_i = −Φ_i"""
        return -self.structures[i].fundamental.values_only()


# ---------------------------------------------------------------------- 加权 Heisenberg

def weighted_heisenberg_phis(n: int, kind: ScalarKind = ScalarKind.EXACT) -> List[FrameTensor]:
    """
    标架 (ξ, τ_1..τ_4n) 上的 φ_1, φ_2, φ_3

    φ_1: τ_r → τ_{n+r} → −τ_r，τ_{2n+r} → τ_{3n+r} → −τ_{2n+r}
    φ_2: τ_r → τ_{2n+r} → −τ_r，τ_{n+r} → −τ_{3n+r}，τ_{3n+r} → τ_{n+r}
    φ_3: τ_r → τ_{3n+r} → −τ_r，τ_{n+r} → τ_{2n+r} → −τ_{n+r}
    """
    dim = 4 * n + 1
    one = Fraction(1) if kind is ScalarKind.EXACT else 1.0
    phis = [FrameTensor.zeros(dim, UL, kind) for _ in range(3)]
    for r in range(1, n + 1):
        a, b, c, d = r, n + r, 2 * n + r, 3 * n + r
        # (目标, 源, 符号)
        maps = (
            ((b, a, 1), (a, b, -1), (d, c, 1), (c, d, -1)),
            ((c, a, 1), (d, b, -1), (a, c, -1), (b, d, 1)),
            ((d, a, 1), (c, b, 1), (b, c, -1), (a, d, -1)),
        )
        for phi, entries in zip(phis, maps):
            for target, source, sign in entries:
                phi.components[target, source] = one * sign
    return phis


def build_weighted_heisenberg(weights: Sequence[Any], ctx: Optional[ScalarContext] = None,
                              name: Optional[str] = None) -> Tuple[LieAlgebraData, SpnTriple]:
    """
    加权 Heisenberg 代数及其上的三元组

    [τ_r, τ_{3n+r}] = [τ_{n+r}, τ_{2n+r}] = 2λ_r ξ，标架正交，η 为 ξ 的对偶

    Args:
        weights: 权重 λ_1..λ_n（精确模式下为有理数或 "p/q" 字符串）
        ctx: 标量上下文，默认精确模式
        name: 代数名称

    Returns:
        (LieAlgebraData, SpnTriple)

    Raises:
        PreconditionError: 权重列表为空
    """
    if not len(weights):
        raise PreconditionError("加权 Heisenberg 代数至少需要一个权重")
    ctx = ctx or ScalarContext(ScalarKind.EXACT)
    lams = [ctx.coerce(w) for w in weights]
    n = len(lams)
    dim = 4 * n + 1
    label = name or f"heisenberg({', '.join(str(l) for l in lams)})"
    alg = LieAlgebraData.from_entries(dim, heisenberg_entries(lams), None, ctx, label,
                                      heisenberg_labels(n))
    xi = alg.basis(0)
    eta = alg.basis(0, LOWER)
    phis = weighted_heisenberg_phis(n, ctx.kind)
    structures = tuple(AcmStructure(alg, phi, xi, eta, f"{label}/phi{i}")
                       for i, phi in enumerate(phis, start=1))
    logger.info(f"已构造 {label}: dim={dim}")
    return alg, SpnTriple(structures, label)


# ---------------------------------------------------------------------- 三元组检查

def quaternionic_check(t: SpnTriple) -> CheckTable:
    """对每个偶置换 (i, j, k) 检查 φ_iφ_j = φ_k 与 φ_jφ_i = −φ_k"""
    s = t.structures[0]
    table = CheckTable()
    for i, j, k in EVEN_PERMUTATIONS:
        a, b, c = t.labels[i], t.labels[j], t.labels[k]
        table.add(s.equal_check(f"{a}{b}={c}", t.phi(i).compose(t.phi(j)), t.phi(k)))
        table.add(s.equal_check(f"{b}{a}=-{c}", t.phi(j).compose(t.phi(i)), -t.phi(k)))
    return table


def _two(t: SpnTriple):
    return 2 if t.ctx.exact else 2.0


def double_aqs_check(t: SpnTriple, with_consequences: bool = True) -> CheckTable:
    """
    双反拟 Sasakian：dΦ_1 = 0，dΦ_2 = 0，dη = 2Φ_3

    通过时再断言其推论：φ_1、φ_2 为反拟 Sasakian，φ_3 为 Sasakian；
    Φ_3 关于 φ_3 不变、关于 φ_1, φ_2 反不变；水平方向 K(ξ, X) = 1；
    Ric = −2g + (4n+2)η⊗η。

    Raises:
        InvariantViolation: 条件成立但推论不成立
    """
    s1, s2, s3 = t.structures
    table = CheckTable()
    table.add(s1.zero_check('d_phi1_zero', s1.d_fundamental))
    table.add(s2.zero_check('d_phi2_zero', s2.d_fundamental))
    table.add(s3.equal_check('d_eta_twice_phi3', s3.d_eta, s3.fundamental.scale(_two(t))))
    if not table.passed or not with_consequences:
        return table

    consequences = []
    for idx, (s, flag) in enumerate(((s1, 'anti_quasi_sasakian'), (s2, 'anti_quasi_sasakian'),
                                     (s3, 'sasakian')), start=1):
        report = classify(s, with_rank=False)
        consequences.append(check_true(f"phi{idx}_{flag}", report.flag(flag)))
    phi3_form = s3.fundamental.values_only()
    consequences.append(s3.equal_check('phi3_form_invariant', phi_pullback(s3, phi3_form), phi3_form))
    for idx, s in ((1, s1), (2, s2)):
        consequences.append(s.equal_check(f"phi3_form_anti_invariant_{idx}",
                                          phi_pullback(s, phi3_form), -phi3_form))
    consequences.append(_unit_xi_sectional(s3))
    g = s3.g.values_only()
    eta = s3.eta.values_only()
    n4 = t.dim - 1
    eta_eta = einsum('i,j->ij', eta, eta, signature=LL)
    if t.ctx.exact:
        expected = g.scale(-2) + eta_eta.scale(n4 + 2)
    else:
        expected = g.scale(-2.0) + eta_eta.scale(float(n4 + 2))
    consequences.append(s3.equal_check('ricci_null_sasakian', s3.curvature.ric, expected))
    for check in consequences:
        table.add(check)
    broken = [c.name for c in consequences if not c.passed]
    if broken:
        raise InvariantViolation(f"{t.name}: 双反拟 Sasakian 条件成立但推论不成立: {', '.join(broken)}")
    return table


def _unit_xi_sectional(s: AcmStructure) -> IdentityCheck:
    """水平标架方向上 K(ξ, X) = 1"""
    p = s.horizontal_projector
    g = s.g.values_only()
    xi = s.xi.values_only()
    worst = s.ctx.zero()
    for i in range(s.dim):
        x = FrameTensor(p.components[:, i].copy(), (UPPER,), dim=s.dim)
        if s.ctx.is_zero(s.host.inner(x, x), s.scale):
            continue
        try:
            k = sectional(s.curvature, xi, x, g)
        except DegenerateError:
            continue
        worst = max(worst, abs(k - 1))
    return check_true('xi_sectional_one', s.ctx.is_zero(worst, s.scale), f"最大偏差 {worst}")


def _aqs_shape(s: AcmStructure, op: FrameTensor) -> FrameTensor:
    """2η(X)BY + η(Y)BX + g(X, BY)ξ，布局 [k, j, x]"""
    eta = s.eta.values_only()
    xi = s.xi.values_only()
    two = 2 if s.ctx.exact else 2.0
    lowered = einsum('xa,aj->xj', s.g.values_only(), op, signature=LL)
    return (einsum('x,kj->kjx', eta, op, signature=ULL).scale(two)
            + einsum('j,kx->kjx', eta, op, signature=ULL)
            + einsum('xj,k->kjx', lowered, xi, signature=ULL))


def structure_equations_check(t: SpnTriple) -> CheckTable:
    """
    Levi-Civita 结构方程
    (i)   (∇_Xφ_1)Y = −2η(X)φ_2Y − η(Y)φ_2X − g(X, φ_2Y)ξ
    (ii)  (∇_Xφ_2)Y = 2η(X)φ_1Y + η(Y)φ_1X + g(X, φ_1Y)ξ
    (iii) (∇_Xφ_3)Y = g(X, Y)ξ − η(Y)X

    Raises:
        InvariantViolation: 任意两条成立而第三条不成立
    """
    s1, s2, s3 = t.structures
    table = CheckTable()
    first = table.add(s1.equal_check('equation_i', s1.nabla_phi, -_aqs_shape(s1, t.phi(1))))
    second = table.add(s2.equal_check('equation_ii', s2.nabla_phi, _aqs_shape(s2, t.phi(0))))
    third = table.add(sasakian_structure_equation(s3).renamed('equation_iii'))
    flags = [first.passed, second.passed, third.passed]
    if sum(flags) == 2:
        raise InvariantViolation(f"{t.name}: 结构方程两条成立而第三条不成立 {flags}")
    return table


def lemma_cmd_check(t: SpnTriple) -> CheckTable:
    """
    对每个偶置换 (i, j, k)：
    g(N_i(X, Y), φ_jZ) = dΦ_j(X,Y,Z) − dΦ_j(φ_iX, φ_iY, Z) − dΦ_k(φ_iX, Y, Z) − dΦ_k(X, φ_iY, Z)
    """
    table = CheckTable()
    for i, j, k in EVEN_PERMUTATIONS:
        si = t.structures[i]
        phi_i = t.phi(i)
        lhs = einsum('xyb,bz->xyz', nijenhuis_form(si), t.phi(j), signature=LLL)
        d_j = t.structures[j].d_fundamental.values_only()
        d_k = t.structures[k].d_fundamental.values_only()
        d_j_x = einsum('ax,ayz->xyz', phi_i, d_j, signature=LLL)
        d_j_xy = einsum('by,xbz->xyz', phi_i, d_j_x, signature=LLL)
        d_k_x = einsum('ax,ayz->xyz', phi_i, d_k, signature=LLL)
        d_k_y = einsum('by,xbz->xyz', phi_i, d_k, signature=LLL)
        rhs = d_j - d_j_xy - d_k_x - d_k_y
        table.add(si.equal_check(f"lemma_{t.labels[i]}", lhs, rhs))
    return table


# ---------------------------------------------------------------------- 五维 SU(2)

@dataclass
class HypoReport:
    """五维三元组的 SU(2) 相容性、K-contact hypo、contact Calabi-Yau 与李导数判据"""
    compatibility: CheckTable
    hypo: CheckTable
    calabi_yau: CheckTable
    lie_criterion: IdentityCheck

    @property
    def k_contact_hypo(self) -> bool:
        return self.hypo.passed

    @property
    def contact_calabi_yau(self) -> bool:
        return self.calabi_yau.passed

    def to_dict(self) -> Dict[str, Any]:
        return {
            'su2_compatible': self.compatibility.passed,
            'compatibility': self.compatibility.to_dict(),
            'k_contact_hypo': self.k_contact_hypo,
            'hypo': self.hypo.to_dict(),
            'contact_calabi_yau': self.contact_calabi_yau,
            'calabi_yau': self.calabi_yau.to_dict(),
            'lie_xi_phi1_or_phi2_zero': self.lie_criterion.to_dict(),
        }


def hypo_su2_check(t: SpnTriple) -> HypoReport:
    """
    五维 SU(2) 条件，ω_i = −Φ_i

    (a) ω_i∧ω_j = δ_ij v，v = ω_1∧ω_1，且 v∧η ≠ 0
    (b) K-contact hypo：ξ Killing，d(η∧ω_1) = 0，d(η∧ω_2) = 0，dη = −2ω_3
    (c) contact Calabi-Yau：dω_1 = 0，dω_2 = 0，dη = −2ω_3
    (d) L_ξφ_1 = 0 或 L_ξφ_2 = 0；(b) 成立时 (c) ⇔ (d)

    Raises:
        PreconditionError: 维数不是 5
        InvariantViolation: (b) 成立而 (c) 与 (d) 不一致
    """
    if t.dim != 5:
        raise PreconditionError(f"{t.name}: SU(2) 条件只适用于 5 维，实际 {t.dim}")
    s1, s2, s3 = t.structures
    host = s1.host
    omegas = [t.omega(i) for i in range(3)]
    eta = s1.eta.values_only()

    compat = CheckTable()
    v = wedge(omegas[0], omegas[0])
    for i, j in itertools.combinations_with_replacement(range(3), 2):
        if (i, j) == (0, 0):
            continue
        product = wedge(omegas[i], omegas[j])
        name = f"omega{i + 1}^omega{j + 1}"
        compat.add(s1.equal_check(name, product, v) if i == j else s1.zero_check(name, product))
    top = wedge(v, eta).components[0, 1, 2, 3, 4]
    compat.add(check_true('v^eta_nonzero', not s1.ctx.is_zero(top, s1.scale), f"体积分量 {top}"))

    minus_two = -2 if s1.ctx.exact else -2.0
    d_eta_rule = s1.equal_check('d_eta_minus_twice_omega3', s1.d_eta, omegas[2].scale(minus_two))

    hypo = CheckTable()
    hypo.add(s1.zero_check('xi_killing', s1.killing_defect))
    for idx in (0, 1):
        form = wedge(eta, omegas[idx])
        hypo.add(s1.zero_check(f"d(eta^omega{idx + 1})_zero", exterior_derivative(host, form)))
    hypo.add(d_eta_rule)

    cy = CheckTable()
    for idx in (0, 1):
        cy.add(s1.zero_check(f"d_omega{idx + 1}_zero", exterior_derivative(host, omegas[idx])))
    cy.add(d_eta_rule)

    lie_1 = s1.zero_check('lie_xi_phi1', s1.lie_phi)
    lie_2 = s2.zero_check('lie_xi_phi2', s2.lie_phi)
    lie = check_true('lie_xi_phi1_or_phi2_zero', lie_1.passed or lie_2.passed,
                     f"L_ξφ_1 = 0: {lie_1.passed}, L_ξφ_2 = 0: {lie_2.passed}")
    if hypo.passed and cy.passed != lie.passed:
        raise InvariantViolation(
            f"{t.name}: K-contact hypo 结构上 contact Calabi-Yau ({cy.passed}) 与李导数判据 ({lie.passed}) 不一致")
    return HypoReport(compat, hypo, cy, lie)


# ---------------------------------------------------------------------- K(ξ, X) = 1

@dataclass
class PromotedTriple:
    """k1_promote 的结果：三元组 (A, φ, ψ) 及实际成立的偶置换"""
    triple: SpnTriple
    realized: List[Tuple[str, str, str]] = field(default_factory=list)
    double_aqs: Optional[CheckTable] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'order': list(self.triple.labels),
            'realized_orderings': [list(r) for r in self.realized],
            'double_aqs_sasakian': self.double_aqs.passed if self.double_aqs else None,
        }


def k1_promote(s: AcmStructure) -> PromotedTriple:
    """
    ψ²|_D = −I 的反拟 Sasakian 结构升级为三元组 (A, φ, ψ)

    列出 (A, φ, ψ) 的所有排列中满足四元数恒等式的那些，并断言双反拟 Sasakian 条件。

    Raises:
        PreconditionError: ψ² ≠ −I + η⊗ξ（附谱）
        InvariantViolation: 升级后的三元组不是双反拟 Sasakian
    """
    psi = s.psi.values_only()
    xi_eta = einsum('k,j->kj', s.xi.values_only(), s.eta.values_only(), signature=UL)
    target = xi_eta - FrameTensor.identity(s.dim, s.kind)
    if not s.equal_check('psi_sq_unit', psi.compose(psi), target):
        ops = derived_operators(s)
        spectrum = ops.spectrum.distinct if ops.spectrum is not None else '无实谱'
        raise PreconditionError(f"{s.name}: ψ² 的谱不是 {{0, −1}}: {spectrum}")
    members = {
        'A': s.with_phi(s.op_a, f"{s.name}/A"),
        'phi': s,
        'psi': s.with_phi(s.psi, f"{s.name}/psi"),
    }
    realized = []
    for order in itertools.permutations(('A', 'phi', 'psi')):
        candidate = SpnTriple(tuple(members[o] for o in order), f"{s.name}/{'-'.join(order)}", order)
        if quaternionic_check(candidate).passed:
            realized.append(order)
    triple = SpnTriple((members['A'], members['phi'], members['psi']), f"{s.name}/K1",
                       ('A', 'phi', 'psi'))
    double = double_aqs_check(triple)
    if not double.passed:
        raise InvariantViolation(
            f"{s.name}: (A, φ, ψ) 不是双反拟 Sasakian: {', '.join(c.name for c in double.failures())}")
    logger.info(f"{s.name}: 升级为双反拟 Sasakian 三元组，成立的排列 {realized}")
    return PromotedTriple(triple, realized, double)
