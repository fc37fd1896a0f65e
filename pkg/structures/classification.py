#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
结构分类
正规 / 反正规、拟 Sasakian / 反拟 Sasakian、Sasakian、cokähler、K-contact 等类谓词，
Chinea-Gonzalez 类的成员检验，广义拟 Sasakian 与横向 Kähler 判定，以及事后一致性断言。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional

from structures.acm import AcmStructure, LL, nijenhuis_form, validate
from structures.rank import RankReport, rank_of_eta
from tensors.checks import CheckTable, check_all
from tensors.frame_tensor import FrameTensor, LOWER, UPPER, einsum
from utils.errors import InvariantViolation, PreconditionError
from utils.logger import get_logger

logger = get_logger()

LLL = (LOWER, LOWER, LOWER)

# 报告中的类谓词顺序
CLASS_FLAGS = (
    'acm_valid', 'd_phi_zero', 'd_eta_zero', 'normal', 'anti_normal', 'quasi_sasakian',
    'anti_quasi_sasakian', 'contact_metric', 'sasakian', 'cokahler', 'xi_killing', 'k_contact',
    'lie_xi_phi_zero', 'd_eta_phi_invariant', 'd_eta_phi_anti_invariant',
    'generalized_quasi_sasakian', 'transversely_kahler',
)


@dataclass
class ClassificationReport:
    """分类结果：每个谓词都带最大违背量与见证"""
    structure: str
    checks: CheckTable
    cg: CheckTable
    transverse: CheckTable
    rank: Optional[RankReport] = None
    validity: CheckTable = field(default_factory=CheckTable)

    def flag(self, name: str) -> bool:
        return bool(self.checks[name])

    def to_dict(self) -> Dict[str, Any]:
        out = {
            'structure': self.structure,
            'classes': self.checks.to_dict(),
            'chinea_gonzalez': self.cg.to_dict(),
            'transverse': self.transverse.to_dict(),
            'validity': self.validity.to_dict(),
        }
        if self.rank is not None:
            out['rank'] = self.rank.to_dict()
        return out


# ---------------------------------------------------------------------- 辅助张量

def phi_pullback(s: AcmStructure, form: FrameTensor) -> FrameTensor:
    """ω(φX, φY)"""
    phi = s.phi.values_only()
    first = einsum('ab,ai->ib', form.values_only(), phi, signature=LL)
    return einsum('ib,bj->ij', first, phi, signature=LL)


def horizontal_part(s: AcmStructure, t: FrameTensor) -> FrameTensor:
    """三阶协变张量在 D 上的限制：各槽位先用 P = I − ξ⊗η 投影"""
    p = s.horizontal_projector
    t = t.values_only()
    t = einsum('abc,ax->xbc', t, p, signature=LLL)
    t = einsum('xbc,by->xyc', t, p, signature=LLL)
    return einsum('xyc,cz->xyz', t, p, signature=LLL)


def reeb_nijenhuis(s: AcmStructure) -> FrameTensor:
    """N_φ(ξ, ·)"""
    return einsum('i,kij->kj', s.xi.values_only(), s.nijenhuis.values_only(), signature=(UPPER, LOWER))


def reeb_tensor(s: AcmStructure) -> FrameTensor:
    """dη ⊗ ξ，N[k, i, j] 的布局"""
    return einsum('k,ij->kij', s.xi.values_only(), s.d_eta.values_only(), signature=(UPPER, LOWER, LOWER))


# ---------------------------------------------------------------------- Chinea-Gonzalez

def cg_membership(s: AcmStructure) -> CheckTable:
    """
    用 α(X, Y, Z) = (∇_XΦ)(Y, Z) 检验 Chinea-Gonzalez 类的定义条件

    C6⊕C7:            α = η(Z)α(Y,X,ξ) − η(Y)α(φX,φZ,ξ)
    C10⊕C11:          α = −η(Z)α(Y,X,ξ) + η(Y)α(φX,φZ,ξ) − η(X)α(ξ,φY,φZ)
    C6⊕C7⊕C10⊕C11:    α = η(Z)α(X,Y,ξ) − η(Y)α(φZ,φX,ξ) − η(X)α(ξ,φY,φZ)
    C10:              α = −η(Z)α(Y,X,ξ) + η(Y)α(φX,φZ,ξ)
    C11:              α = −η(X)α(ξ,φY,φZ)
    C6:               α = (1/2n)[g(X,Y)η(Z) − g(X,Z)η(Y)](c₁₂α)(ξ)
    C7:               C6⊕C7 且 (c₁₂α)(ξ) = 0

    Returns:
        CheckTable，键为 C6+C7、C10+C11、C6+C7+C10+C11、C6、C7、C10、C11
    """
    phi = s.phi.values_only()
    xi = s.xi.values_only()
    eta = s.eta.values_only()
    g = s.g.values_only()
    alpha = s.nabla_fundamental.values_only().transpose(2, 0, 1)

    a3 = einsum('xyd,d->xy', alpha, xi, signature=LL)
    a1 = einsum('d,dyz->yz', xi, alpha, signature=LL)
    m = einsum('xc,cz->xz', einsum('ax,ac->xc', phi, a3, signature=LL), phi, signature=LL)
    nphi = einsum('yc,cz->yz', einsum('by,bc->yc', phi, a1, signature=LL), phi, signature=LL)

    z_a3yx = einsum('z,yx->xyz', eta, a3, signature=LLL)
    z_a3xy = einsum('z,xy->xyz', eta, a3, signature=LLL)
    y_mxz = einsum('y,xz->xyz', eta, m, signature=LLL)
    y_mzx = einsum('y,zx->xyz', eta, m, signature=LLL)
    x_n = einsum('x,yz->xyz', eta, nphi, signature=LLL)

    table = CheckTable()
    c67 = table.add(s.equal_check('C6+C7', alpha, z_a3yx - y_mxz))
    table.add(s.equal_check('C10+C11', alpha, -z_a3yx + y_mxz - x_n))
    table.add(s.equal_check('C6+C7+C10+C11', alpha, z_a3xy - y_mzx - x_n))

    c12 = einsum('ij,ij->', s.host.metric_inverse().values_only(), a3, signature=())
    n = (s.dim - 1) // 2
    if n >= 1:
        factor = Fraction(1, 2 * n) if s.ctx.exact else 1.0 / (2 * n)
        shape = (einsum('xy,z->xyz', g, eta, signature=LLL)
                 - einsum('xz,y->xyz', g, eta, signature=LLL))
        c6_rhs = shape.scale(factor * c12.value)
        table.add(s.equal_check('C6', alpha, c6_rhs))
    else:
        table.add(s.zero_check('C6', alpha, 'dim 1'))
    table.add(check_all('C7', [c67, s.zero_check('c12_xi', c12)]))
    table.add(s.equal_check('C10', alpha, -z_a3yx + y_mxz))
    table.add(s.equal_check('C11', alpha, -x_n))
    return table


# ---------------------------------------------------------------------- gQS 与横向 Kähler

def gqs_and_transverse_checks(s: AcmStructure, cg: Optional[CheckTable] = None) -> CheckTable:
    """
    广义拟 Sasakian 与横向 Kähler

    gQS: ξ Killing，且对水平的 X, Y, Z 有 dΦ(X,Y,Z) = 0、g(N_φ(X,Y), Z) = 0。
    横向 Kähler 的两条判定路线：
        直接: dΦ = 0，N_φ(ξ, ·) = 0，N_φ 在 D 上为零；
        经 gQS: gQS 且 L_ξφ = 0。

    Raises:
        InvariantViolation: 两条路线不一致，或 gQS 与 C6⊕C7⊕C10⊕C11 条件不一致
    """
    table = CheckTable()
    killing = table.add(s.zero_check('xi_killing', s.killing_defect))
    d_phi_h = table.add(s.zero_check('d_phi_horizontal', horizontal_part(s, s.d_fundamental)))
    n_h = table.add(s.zero_check('nijenhuis_horizontal', horizontal_part(s, nijenhuis_form(s))))
    gqs = table.add(check_all('generalized_quasi_sasakian', [killing, d_phi_h, n_h]))
    lie_phi = table.add(s.zero_check('lie_xi_phi_zero', s.lie_phi))
    via_gqs = table.add(check_all('transversely_kahler', [gqs, lie_phi]))
    direct = table.add(check_all('transversely_kahler_direct', [
        s.zero_check('d_phi_zero', s.d_fundamental),
        s.zero_check('reeb_nijenhuis_zero', reeb_nijenhuis(s)),
        n_h,
    ]))
    if via_gqs.passed != direct.passed:
        raise InvariantViolation(
            f"{s.name}: 横向 Kähler 的两条判定不一致 (gQS 路线 {via_gqs.passed}, 直接 {direct.passed})")
    cg = cg if cg is not None else cg_membership(s)
    if cg['C6+C7+C10+C11'].passed != gqs.passed:
        raise InvariantViolation(
            f"{s.name}: gQS 判定 ({gqs.passed}) 与 C6⊕C7⊕C10⊕C11 条件 "
            f"({cg['C6+C7+C10+C11'].passed}) 不一致")
    return table


# ---------------------------------------------------------------------- 分类

def classify(s: AcmStructure, with_rank: bool = True) -> ClassificationReport:
    """
    计算全部类谓词

    Args:
        s: 有效的几乎切触度量结构
        with_rank: 是否附带秩数据

    Returns:
        ClassificationReport

    Raises:
        PreconditionError: 结构无效
        InvariantViolation: 事后一致性断言失败
    """
    validity = validate(s)
    if not validity.passed:
        raise PreconditionError(
            f"{s.name}: 结构无效，无法分类 ({', '.join(c.name for c in validity.failures())})")
    table = CheckTable()
    table.add(check_all('acm_valid', validity))
    d_phi = table.add(s.zero_check('d_phi_zero', s.d_fundamental))
    d_eta = table.add(s.zero_check('d_eta_zero', s.d_eta))
    normal = table.add(s.zero_check('normal', s.nijenhuis))
    two = 2 if s.ctx.exact else 2.0
    anti = table.add(s.equal_check('anti_normal', s.nijenhuis, reeb_tensor(s).scale(two)))
    table.add(check_all('quasi_sasakian', [normal, d_phi]))
    table.add(check_all('anti_quasi_sasakian', [anti, d_phi]))
    contact = table.add(s.equal_check('contact_metric', s.d_eta, s.fundamental.scale(two)))
    table.add(check_all('sasakian', [normal, contact]))
    table.add(check_all('cokahler', [normal, d_eta, d_phi]))

    cg = cg_membership(s)
    transverse = gqs_and_transverse_checks(s, cg)
    killing = table.add(transverse['xi_killing'])
    table.add(check_all('k_contact', [contact, killing]))
    table.add(transverse['lie_xi_phi_zero'])
    pulled = phi_pullback(s, s.d_eta)
    table.add(s.equal_check('d_eta_phi_invariant', pulled, s.d_eta))
    table.add(s.equal_check('d_eta_phi_anti_invariant', pulled, -s.d_eta.values_only()))
    table.add(transverse['generalized_quasi_sasakian'])
    table.add(transverse['transversely_kahler'])

    report = ClassificationReport(s.name, table, cg, transverse,
                                  rank_of_eta(s) if with_rank else None, validity)
    assert_consistency(report)
    flags = [name for name in CLASS_FLAGS if name in table and table[name].passed]
    logger.info(f"{s.name}: 分类完成 -> {', '.join(flags) if flags else '无'}")
    return report


def assert_consistency(report: ClassificationReport):
    """
    事后一致性：cokähler ⇒ 拟 Sasakian 且反拟 Sasakian；反拟 Sasakian ⇒ C10⊕C11；
    拟 Sasakian 且反拟 Sasakian ⇒ dη = 0

    Raises:
        InvariantViolation: 任一蕴含不成立
    """
    f = report.flag
    rules = [
        ('cokahler => quasi_sasakian & anti_quasi_sasakian',
         not f('cokahler') or (f('quasi_sasakian') and f('anti_quasi_sasakian'))),
        ('anti_quasi_sasakian => C10+C11',
         not f('anti_quasi_sasakian') or report.cg['C10+C11'].passed),
        ('quasi_sasakian & anti_quasi_sasakian => d_eta_zero',
         not (f('quasi_sasakian') and f('anti_quasi_sasakian')) or f('d_eta_zero')),
    ]
    broken = [name for name, ok in rules if not ok]
    if broken:
        raise InvariantViolation(f"{report.structure}: 分类结果自相矛盾: {'; '.join(broken)}")
