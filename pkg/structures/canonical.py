#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
反拟 Sasakian 结构的典范联络
∇̄ = ∇ + H，H(X,Y) = η(X)ψY + η(Y)ψX + g(X,ψY)ξ，挠率 T̄ = dη⊗ξ。
包括平行挠率判定 ∇̄ψ = 0、李代数上的分裂检查、局部对称与非负曲率检测，
以及由线性约束重建 H 的唯一性检查。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from geometry.connection import ConnectionData, covariant_derivative, levi_civita
from geometry.curvature import curvature, sectional
from hosts.lie_algebra import LieAlgebraData
from structures.acm import AcmStructure, LL, ULL, derived_operators, nijenhuis_form
from structures.classification import classify
from tensors.checks import CheckTable, IdentityCheck, check_true, check_zero
from tensors.frame_tensor import FrameTensor, LOWER, UPPER, einsum, einsum_arrays
from tensors.linalg import matrix_rank, nullspace, solve_sparse_exact
from utils.errors import (DegenerateError, InvariantViolation, PreconditionError,
                          RouteDisagreementError)
from utils.logger import get_logger

logger = get_logger()

LLL = (LOWER, LOWER, LOWER)


def difference_tensor(s: AcmStructure) -> FrameTensor:
    """H[k, i, j] = η_i ψ[k, j] + η_j ψ[k, i] + Ψ[i, j] ξ^k"""
    eta = s.eta
    psi = s.psi
    return (einsum('i,kj->kij', eta, psi, signature=ULL)
            + einsum('j,ki->kij', eta, psi, signature=ULL)
            + einsum('ij,k->kij', s.psi_form, s.xi, signature=ULL))


@dataclass
class CanonicalConnection:
    """典范联络及其构造时验证的性质"""
    structure: AcmStructure
    base: ConnectionData
    h: FrameTensor
    connection: ConnectionData
    torsion: FrameTensor
    checks: CheckTable = field(default_factory=CheckTable)

    @property
    def is_lie(self) -> bool:
        return isinstance(self.structure.host, LieAlgebraData)

    @property
    def coefficients_zero(self) -> bool:
        return self.structure.zero_check('bar_gamma', self.connection.gamma).passed

    def h_lowered(self) -> FrameTensor:
        """H(X, Y, Z) = g(H(X, Y), Z)，槽位 [x, y, z]"""
        return einsum('kxy,kz->xyz', self.h.values_only(), self.structure.g.values_only(), signature=LLL)

    def torsion_lowered(self) -> FrameTensor:
        """T̄(X, Y, Z) = g(T̄(X, Y), Z)"""
        return einsum('kxy,kz->xyz', self.torsion.values_only(), self.structure.g.values_only(),
                      signature=LLL)

    def summary(self) -> Dict[str, Any]:
        return {
            'coefficients_zero': self.coefficients_zero,
            'checks': self.checks.to_dict(),
        }


def canonical_connection(s: AcmStructure) -> CanonicalConnection:
    """
    构造典范联络并断言其性质：∇̄g = 0，∇̄φ = 0，∇̄ξ = 0，T̄ = dη⊗ξ = 2Ψ⊗ξ，
    T̄(ξ, ·) = 0，T̄ 在 D 上完全反对称

    Raises:
        PreconditionError: 结构不是反拟 Sasakian
        InvariantViolation: 上述性质不成立
    """
    report = classify(s, with_rank=False)
    if not report.flag('anti_quasi_sasakian'):
        raise PreconditionError(f"{s.name}: 典范联络只对反拟 Sasakian 结构定义")
    h = difference_tensor(s)
    bar = s.connection.with_difference(h, 'canonical')
    torsion = bar.torsion()
    xi = s.xi.values_only()
    table = CheckTable()
    table.add(s.zero_check('bar_nabla_g', covariant_derivative(bar, s.g)))
    table.add(s.zero_check('bar_nabla_phi', covariant_derivative(bar, s.phi)))
    table.add(s.zero_check('bar_nabla_xi', covariant_derivative(bar, s.xi)))
    d_eta_xi = einsum('ij,k->kij', s.d_eta.values_only(), xi, signature=ULL)
    table.add(s.equal_check('torsion_d_eta', torsion, d_eta_xi))
    two = 2 if s.ctx.exact else 2.0
    psi_xi = einsum('ij,k->kij', s.psi_form.values_only(), xi, signature=ULL).scale(two)
    table.add(s.equal_check('torsion_twice_psi', torsion, psi_xi))
    table.add(s.zero_check('torsion_xi', einsum('i,kij->kj', xi, torsion.values_only(),
                                                 signature=(UPPER, LOWER))))
    result = CanonicalConnection(s, s.connection, h, bar, torsion, table)
    table.add(_skew_on_horizontal(result))
    if not table.passed:
        names = ', '.join(f"{c.name}({c.violation})" for c in table.failures())
        raise InvariantViolation(f"{s.name}: 典范联络性质不成立: {names}")
    logger.debug(f"{s.name}: 典范联络已构造, 系数为零={result.coefficients_zero}")
    return result


def _horizontal_basis(s: AcmStructure) -> np.ndarray:
    return nullspace(s.eta.values_only().components.reshape(1, -1), s.ctx)


def _restrict3(t: FrameTensor, basis: np.ndarray) -> np.ndarray:
    first = einsum_arrays('ayz,ai->iyz', t.components, basis)
    second = einsum_arrays('iyz,yj->ijz', first, basis)
    return einsum_arrays('ijz,zk->ijk', second, basis)


def _skew_on_horizontal(c: CanonicalConnection) -> IdentityCheck:
    """T̄(X, Y, Z) 在水平向量上对后两个槽位反对称（前两个已反对称）"""
    s = c.structure
    restricted = _restrict3(c.torsion_lowered(), _horizontal_basis(s))
    return check_zero('torsion_skew_on_D', restricted + np.transpose(restricted, (0, 2, 1)),
                      s.ctx, s.scale)


# ---------------------------------------------------------------------- 平行挠率

@dataclass
class ParallelTorsionResult:
    """∇̄ψ = 0 的判定，Levi-Civita 路线在所有宿主上运行，李代数上另算 ∇̄ψ 与 ∇̄T̄"""
    passed: bool
    levi_civita: IdentityCheck
    bar_psi: Optional[IdentityCheck] = None
    bar_torsion: Optional[IdentityCheck] = None

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> Dict[str, Any]:
        out = {'passed': self.passed, 'levi_civita_route': self.levi_civita.to_dict()}
        if self.bar_psi is not None:
            out['bar_psi_route'] = self.bar_psi.to_dict()
        if self.bar_torsion is not None:
            out['bar_torsion_route'] = self.bar_torsion.to_dict()
        return out


def parallel_torsion_test(c: CanonicalConnection) -> ParallelTorsionResult:
    """
    ∇̄ψ = 0 ⇔ (∇_Xψ)Y = −g(X, ψ²Y)ξ + η(Y)ψ²X

    Raises:
        RouteDisagreementError: 李代数上各路线结论不一致
    """
    s = c.structure
    psi = s.psi.values_only()
    psi_sq = psi.compose(psi)
    lowered_sq = einsum('xa,aj->xj', s.g.values_only(), psi_sq, signature=LL)
    rhs = (einsum('j,kx->kjx', s.eta.values_only(), psi_sq, signature=ULL)
           - einsum('xj,k->kjx', lowered_sq, s.xi.values_only(), signature=ULL))
    nabla_psi = covariant_derivative(s.connection, s.psi)
    lc = s.equal_check('nabla_psi_levi_civita', nabla_psi, rhs)
    if not c.is_lie:
        return ParallelTorsionResult(lc.passed, lc)
    bar_psi = s.zero_check('bar_nabla_psi', covariant_derivative(c.connection, s.psi))
    bar_torsion = s.zero_check('bar_nabla_torsion', covariant_derivative(c.connection, c.torsion))
    verdicts = {lc.passed, bar_psi.passed, bar_torsion.passed}
    if len(verdicts) > 1:
        raise RouteDisagreementError(
            f"{s.name}: ∇̄ψ = 0 的路线不一致 (Levi-Civita={lc.passed}, ∇̄ψ={bar_psi.passed}, "
            f"∇̄T̄={bar_torsion.passed})")
    return ParallelTorsionResult(lc.passed, lc, bar_psi, bar_torsion)


# ---------------------------------------------------------------------- 分裂

@dataclass
class SplitFactor:
    """分布及其闭性"""
    name: str
    basis: np.ndarray
    bracket_closed: bool
    nabla_closed: bool
    eigenvalue: Optional[Fraction] = None

    @property
    def dim(self) -> int:
        return int(self.basis.shape[1])

    def to_dict(self) -> Dict[str, Any]:
        out = {
            'name': self.name,
            'dim': self.dim,
            'bracket_closed': self.bracket_closed,
            'nabla_closed': self.nabla_closed,
            'basis': self.basis.T.tolist(),
        }
        if self.eigenvalue is not None:
            out['psi_sq_eigenvalue'] = self.eigenvalue
        return out


@dataclass
class SplitReport:
    """TM = E ⊕ E^⊥ 及各特征分布加 ξ 的闭性"""
    kernel: SplitFactor
    complement: SplitFactor
    blocks: List[SplitFactor]
    checks: CheckTable
    eigenvalues_constant: bool = True
    note: str = ''

    @property
    def passed(self) -> bool:
        factors = [self.kernel, self.complement] + self.blocks
        return self.checks.passed and all(f.bracket_closed and f.nabla_closed for f in factors)

    def to_dict(self) -> Dict[str, Any]:
        out = {
            'passed': self.passed,
            'kernel_factor': self.kernel.to_dict(),
            'complement_factor': self.complement.to_dict(),
            'eigen_blocks': [b.to_dict() for b in self.blocks],
            'checks': self.checks.to_dict(),
            'eigenvalues_constant': self.eigenvalues_constant,
        }
        if self.note:
            out['note'] = self.note
        return out


def _in_span(basis: np.ndarray, vector: np.ndarray, ctx) -> bool:
    rank = matrix_rank(basis, ctx)
    return matrix_rank(np.concatenate([basis, vector.reshape(-1, 1)], axis=1), ctx) == rank


def _closure(alg: LieAlgebraData, gamma: FrameTensor, basis: np.ndarray) -> Tuple[bool, bool]:
    """左不变基上的括号闭性与 ∇-闭性"""
    c = alg.brackets().components
    gam = gamma.components
    bracket_ok = nabla_ok = True
    for a in range(basis.shape[1]):
        for b in range(basis.shape[1]):
            u, v = basis[:, a], basis[:, b]
            brk = einsum_arrays('ijk,i->jk', c, u)
            if not _in_span(basis, einsum_arrays('jk,j->k', brk, v), alg.ctx):
                bracket_ok = False
            cov = einsum_arrays('kij,i->kj', gam, u)
            if not _in_span(basis, einsum_arrays('kj,j->k', cov, v), alg.ctx):
                nabla_ok = False
    return bracket_ok, nabla_ok


def _factor(name: str, alg: LieAlgebraData, gamma: FrameTensor, basis: np.ndarray,
            eigenvalue: Optional[Fraction] = None) -> SplitFactor:
    if basis.shape[1] == 0:
        return SplitFactor(name, basis, True, True, eigenvalue)
    bracket_ok, nabla_ok = _closure(alg, gamma, basis)
    return SplitFactor(name, basis, bracket_ok, nabla_ok, eigenvalue)


def _eigen_blocks(s: AcmStructure, limit: int = 10 ** 6) -> Tuple[List[Tuple[Fraction, np.ndarray]], str]:
    """
    把浮点谱化为有理数后用精确零空间重建 ψ² 的特征分布

    Returns:
        ([(−μ, 基)], 说明)；重建失败的特征值写入说明
    """
    ops = derived_operators(s)
    if ops.spectrum is None:
        return [], 'ψ² 没有实谱'
    psi = s.psi.values_only()
    psi_sq = psi.compose(psi).components
    ident = FrameTensor.identity(s.dim, s.kind).components
    blocks, missed = [], []
    for value, mult in ops.spectrum.clusters:
        if abs(value) <= ops.spectrum.cluster_tol:
            continue
        exact = Fraction(value).limit_denominator(limit)
        basis = nullspace(psi_sq - ident * exact, s.ctx)
        if basis.shape[1] != mult:
            missed.append(f"{value:.12g}")
            continue
        blocks.append((exact, basis))
    note = f"未能精确重建的特征值: {', '.join(missed)}" if missed else ''
    return blocks, note


def decomposition_check(c: CanonicalConnection, parallel: Optional[ParallelTorsionResult] = None) -> SplitReport:
    """
    李代数上的分裂：E = ker η ∩ ker dη 与其正交补 E^⊥ = ⟨ξ⟩ ⊕ im ψ，
    以及每个非零特征值 −μ 对应的 ⟨ξ⟩ ⊕ D_μ，逐一检查括号闭性与 ∇-闭性

    另检查 E 上曲率为零（平坦 Kähler 因子）且 dη 在 E^⊥ ∩ D 上满秩。

    Raises:
        PreconditionError: 宿主不是精确模式的李代数，或 ∇̄ψ ≠ 0
    """
    s = c.structure
    alg = s.host
    if not isinstance(alg, LieAlgebraData) or not s.ctx.exact:
        raise PreconditionError(f"{s.name}: 分裂检查只在精确模式的李代数上进行")
    parallel = parallel if parallel is not None else parallel_torsion_test(c)
    if not parallel.passed:
        raise PreconditionError(f"{s.name}: 分裂检查要求 ∇̄ψ = 0")
    gamma = s.connection.gamma
    g = s.g.values_only().components
    xi = s.xi.values_only().components.reshape(-1, 1)

    e_basis = s.horizontal_kernel
    if e_basis.shape[1]:
        complement = nullspace(einsum_arrays('ai,ab->ib', e_basis, g), s.ctx)
    else:
        complement = FrameTensor.identity(s.dim, s.kind).components
    kernel = _factor('E', alg, gamma, e_basis)
    comp = _factor('E_perp', alg, gamma, complement)

    checks = CheckTable()
    if e_basis.shape[1]:
        r = s.curvature.R.components
        restricted = einsum_arrays('lijk,ia->lajk', r, e_basis)
        restricted = einsum_arrays('lajk,jb->labk', restricted, e_basis)
        restricted = einsum_arrays('labk,kc->labc', restricted, e_basis)
        checks.add(check_zero('kernel_flat', restricted, s.ctx))
    horizontal_comp = nullspace(np.concatenate(
        [s.eta.values_only().components.reshape(1, -1),
         einsum_arrays('ai,ab->ib', e_basis, g)], axis=0), s.ctx)
    d_eta = s.d_eta.values_only().components
    on_comp = einsum_arrays('ai,ab->ib', horizontal_comp, d_eta)
    on_comp = einsum_arrays('ib,bj->ij', on_comp, horizontal_comp)
    checks.add(check_true('complement_max_rank',
                          matrix_rank(on_comp, s.ctx) == horizontal_comp.shape[1],
                          f"dim E^⊥ ∩ D = {horizontal_comp.shape[1]}"))

    blocks_raw, note = _eigen_blocks(s)
    blocks = [_factor(f"xi+D({-value})", alg, gamma, np.concatenate([xi, basis], axis=1), value)
              for value, basis in blocks_raw]
    report = SplitReport(kernel, comp, blocks, checks, True, note)
    logger.info(f"{s.name}: 分裂 dim E = {kernel.dim}, dim E^⊥ = {comp.dim}, "
                f"{len(blocks)} 个特征块, 通过={report.passed}")
    return report


# ---------------------------------------------------------------------- 检测

@dataclass
class LocalSymmetryResult:
    max_entry: Any
    witness: Optional[Tuple[int, ...]]
    locally_symmetric: bool

    def to_dict(self) -> Dict[str, Any]:
        out = {'max_nabla_r': self.max_entry, 'locally_symmetric': self.locally_symmetric}
        if self.witness is not None:
            out['witness'] = list(self.witness)
        return out


def local_symmetry_check(alg: LieAlgebraData) -> LocalSymmetryResult:
    """
    ∇R 的最大分量；齐性空间上为零当且仅当局部对称

    Raises:
        PreconditionError: 宿主不是李代数
    """
    if not isinstance(alg, LieAlgebraData):
        raise PreconditionError("局部对称检测只在李代数上进行")
    conn = levi_civita(alg)
    nabla_r = covariant_derivative(conn, curvature(alg, conn).R)
    check = check_zero('nabla_r', nabla_r, alg.ctx)
    logger.debug(f"{alg.name}: max |∇R| = {check.violation}")
    return LocalSymmetryResult(check.violation, check.witness, check.passed)


@dataclass
class NegativeCurvatureWitness:
    found: bool
    plane: Optional[Tuple[str, str]]
    value: Any
    minimum: Any
    note: str = ''

    def to_dict(self) -> Dict[str, Any]:
        out = {'negative_plane_found': self.found, 'minimum_sectional': self.minimum}
        if self.plane is not None:
            out['plane'] = list(self.plane)
            out['sectional'] = self.value
        if self.note:
            out['note'] = self.note
        return out


def nonnegative_curvature_check(c: CanonicalConnection,
                                parallel: Optional[ParallelTorsionResult] = None) -> NegativeCurvatureWitness:
    """
    在标架 2-平面中寻找截面曲率严格为负的平面；找不到只报告不断言

    Raises:
        PreconditionError: 结构为 cokähler（ψ = 0）或 ∇̄ψ ≠ 0
    """
    s = c.structure
    if s.zero_check('psi_zero', s.psi):
        raise PreconditionError(f"{s.name}: cokähler 结构不在非负曲率检测范围内")
    parallel = parallel if parallel is not None else parallel_torsion_test(c)
    if not parallel.passed:
        raise PreconditionError(f"{s.name}: 非负曲率检测要求 ∇̄ψ = 0")
    labels = getattr(s.host, 'labels', None) or [f"e{i}" for i in range(s.dim)]
    g = s.g.values_only()
    best, plane = None, None
    for i in range(s.dim):
        for j in range(i + 1, s.dim):
            try:
                k = sectional(s.curvature, s.host.basis(i), s.host.basis(j), g)
            except DegenerateError:
                continue
            if best is None or k < best:
                best, plane = k, (labels[i], labels[j])
    found = best is not None and best < -s.ctx.threshold(s.scale)
    note = '' if found else '标架平面中没有负截面曲率（标架平面并非全部 2-平面）'
    return NegativeCurvatureWitness(found, plane if found else None, best if found else None, best, note)


# ---------------------------------------------------------------------- 唯一性与挠率恒等式

def uniqueness_check(c: CanonicalConnection) -> IdentityCheck:
    """
    求解 H 的线性约束：度量相容、∇̄φ = 0、∇̄ξ = 0、T̄(ξ, ·) = 0、T̄ 在 D 上完全反对称；
    解唯一且等于 H

    Raises:
        PreconditionError: 非精确模式的李代数
        InvariantViolation: 约束不相容
    """
    s = c.structure
    if not isinstance(s.host, LieAlgebraData) or not s.ctx.exact:
        raise PreconditionError(f"{s.name}: 唯一性重建只在精确模式的李代数上进行")
    n = s.dim
    g = s.g.values_only().components
    phi = s.phi.values_only().components
    xi = s.xi.values_only().components
    nabla_phi = s.nabla_phi.values_only().components
    nabla_xi = s.nabla_xi.values_only().components

    def var(k, i, j):
        return (k * n + i) * n + j

    def add(row, key, value):
        if value:
            row[key] = row.get(key, Fraction(0)) + value

    rows, rhs = [], []
    for x in range(n):
        for y in range(n):
            for z in range(n):
                row = {}
                for k in range(n):
                    add(row, var(k, x, y), g[k, z])
                    add(row, var(k, x, z), g[y, k])
                rows.append(row)
                rhs.append(Fraction(0))
    # (∇̄_Xφ)Y = (∇_Xφ)Y + H(X, φY) − φH(X, Y)
    for k in range(n):
        for j in range(n):
            for x in range(n):
                row = {}
                for a in range(n):
                    add(row, var(k, x, a), phi[a, j])
                    add(row, var(a, x, j), -phi[k, a])
                rows.append(row)
                rhs.append(-nabla_phi[k, j, x])
    for k in range(n):
        for x in range(n):
            row = {}
            for a in range(n):
                add(row, var(k, x, a), xi[a])
            rows.append(row)
            rhs.append(-nabla_xi[k, x])
    for k in range(n):
        for j in range(n):
            row = {}
            for a in range(n):
                add(row, var(k, a, j), xi[a])
                add(row, var(k, j, a), -xi[a])
            rows.append(row)
            rhs.append(Fraction(0))
    basis = _horizontal_basis(s)
    m = basis.shape[1]
    for a in range(m):
        for b in range(m):
            for d in range(b, m):
                row = {}
                # T̄(u, v, w) + T̄(u, w, v)，T̄(X, Y) = H(X, Y) − H(Y, X)
                for (p, q, r) in ((a, b, d), (a, d, b)):
                    for i in range(n):
                        for j in range(n):
                            coeff = basis[i, p] * basis[j, q]
                            if not coeff:
                                continue
                            for k in range(n):
                                w = sum(g[k, z] * basis[z, r] for z in range(n))
                                add(row, var(k, i, j), coeff * w)
                                add(row, var(k, j, i), -coeff * w)
                rows.append(row)
                rhs.append(Fraction(0))

    solution = solve_sparse_exact(rows, rhs, n ** 3)
    if not solution.consistent:
        raise InvariantViolation(f"{s.name}: 典范联络的约束不相容")
    h = c.h.values_only().components
    worst = Fraction(0)
    for k in range(n):
        for i in range(n):
            for j in range(n):
                worst = max(worst, abs(solution.value(var(k, i, j)) - h[k, i, j]))
    unique = not solution.free
    passed = unique and worst == 0
    note = f"秩 {solution.rank}/{n ** 3}" + ('' if unique else f"，{len(solution.free)} 个自由变量")
    logger.debug(f"{s.name}: H 唯一性重建 {note}")
    return IdentityCheck('h_unique', passed, worst, None, note)


def torsion_determines_h(c: CanonicalConnection) -> IdentityCheck:
    """2H(X,Y,Z) = T̄(X,Y,Z) − T̄(Y,Z,X) + T̄(Z,X,Y)"""
    s = c.structure
    t = c.torsion_lowered()
    two = 2 if s.ctx.exact else 2.0
    rhs = t - t.transpose(2, 0, 1) + t.transpose(1, 2, 0)
    return s.equal_check('torsion_determines_h', c.h_lowered().scale(two), rhs)


def nijenhuis_alternation_defect(s: AcmStructure) -> IdentityCheck:
    """
    N(X, Y, Z) = g(N(X, Y), Z) 的交错性缺陷；dη ≠ 0 时缺陷必须非零

    检查结果以“缺陷非零或 dη = 0”为通过。

    Raises:
        InvariantViolation: dη ≠ 0 而 N 完全反对称
    """
    form = nijenhuis_form(s)
    defect = form + form.transpose(0, 2, 1)
    skew = s.zero_check('nijenhuis_alternation', defect)
    d_eta_zero = s.zero_check('d_eta_zero', s.d_eta)
    if skew.passed and not d_eta_zero.passed:
        raise InvariantViolation(f"{s.name}: dη ≠ 0 但 Nijenhuis 张量完全反对称")
    return IdentityCheck('nijenhuis_not_skew', True, skew.violation, skew.witness,
                         'dη = 0' if d_eta_zero.passed else '')


def connection_suite(s: AcmStructure) -> Tuple[CanonicalConnection, CheckTable, ParallelTorsionResult]:
    """典范联络的全部检查（唯一性重建只在精确李代数上运行）"""
    c = canonical_connection(s)
    table = CheckTable()
    for check in c.checks:
        table.add(check)
    table.add(torsion_determines_h(c))
    table.add(nijenhuis_alternation_defect(s))
    if c.is_lie and s.ctx.exact:
        table.add(uniqueness_check(c))
    parallel = parallel_torsion_test(c)
    return c, table, parallel
