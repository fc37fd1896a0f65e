#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
报告编排
按子命令范围对每个结构运行分类、谱、曲率、恒等式、联络与分裂检查，
坐标片上逐点运行并汇总；输出确定性的 JSON 报告与退出码。
"""

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from config import APP_NAME, APP_VERSION, Config
from hosts.builtins import disc_eta_einstein, disc_psi_eigenvalue
from hosts.lie_algebra import LieAlgebraData, jacobi_check
from reports.serializer import dumps
from reports.spec_parser import Manifold, ManifoldSpec, materialize
from structures.acm import AcmStructure, derived_operators, patch_structure, validate
from structures.canonical import (
    connection_suite, decomposition_check, local_symmetry_check, nonnegative_curvature_check,
)
from structures.classification import CLASS_FLAGS, classify
from structures.einstein import (
    constant_curvature_check, eta_einstein_fit, eta_einstein_over_samples, xi_sectional_curvatures,
)
from structures.identities import general_identities, identity_suite
from structures.quaternionic import (
    double_aqs_check, hypo_su2_check, k1_promote, lemma_cmd_check, quaternionic_check,
    structure_equations_check,
)
from structures.rank import rank_of_eta, rank_over_samples
from tensors.checks import CheckTable, check_true
from utils.errors import AqsError, InvariantViolation, PreconditionError, RouteDisagreementError, SpecError
from utils.logger import get_logger

logger = get_logger()

COMMANDS = ('classify', 'curvature', 'spectrum', 'connection', 'decompose', 'report')

# 各子命令运行的部分
SCOPES = {
    'classify': {'classify', 'identities', 'triple'},
    'curvature': {'curvature'},
    'spectrum': {'spectrum'},
    'connection': {'connection'},
    'decompose': {'decompose'},
    'report': {'classify', 'identities', 'triple', 'curvature', 'spectrum', 'connection', 'decompose'},
}

# 圆盘丛期望值的相对容差
DISC_RELATIVE_TOL = 1e-6


class ExitCode(IntEnum):
    """退出码；多个类别失败时取最小的非零值"""
    OK = 0
    MODULE_ERROR = 1
    SPEC_ERROR = 2
    HOST_INVARIANT = 3
    STRUCTURE_INVALID = 4
    IDENTITY_SUITE = 5
    CONNECTION = 6
    QUATERNIONIC = 7


@dataclass
class ReportOptions:
    """一次报告运行的参数"""
    command: str = 'report'
    tol: float = 1e-8
    patch_tol: float = 1e-6
    points: int = 32
    seed: int = 0
    disc_radius: float = 0.9
    flat_box: float = 1.0
    cluster_tol: float = 1e-8
    offdiag_tol: float = 1e-12
    max_sweeps: int = 100
    include_points: bool = True
    float_digits: int = 17

    @classmethod
    def from_config(cls, config: Config, command: str = 'report') -> 'ReportOptions':
        tol = config.tolerance_config
        sampling = config.sampling_config
        return cls(command, tol.classify, tol.patch, sampling.points, sampling.seed,
                   sampling.disc_radius, sampling.flat_box, tol.eigen_cluster, tol.jacobi_offdiag,
                   tol.jacobi_max_sweeps, config.report_config.include_points,
                   config.report_config.float_digits)

    @property
    def scope(self) -> set:
        return SCOPES[self.command]


@dataclass
class Failure:
    category: ExitCode
    where: str
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return {'category': self.category.name.lower(), 'where': self.where, 'message': self.message}


@dataclass
class Report:
    """报告数据与退出码"""
    data: Dict[str, Any]
    failures: List[Failure] = field(default_factory=list)

    @property
    def exit_code(self) -> ExitCode:
        codes = [f.category for f in self.failures]
        return min(codes) if codes else ExitCode.OK

    def to_dict(self) -> Dict[str, Any]:
        out = dict(self.data)
        out['failures'] = [f.to_dict() for f in self.failures]
        out['exit_code'] = int(self.exit_code)
        return out

    def to_json(self, digits: int = 17) -> str:
        return dumps(self.to_dict(), digits)


def _flag_summary(table: CheckTable) -> Dict[str, bool]:
    return {name: table[name].passed for name in CLASS_FLAGS if name in table}


class ReportRunner:
    """单次报告运行：持有选项并收集失败项"""

    def __init__(self, spec: ManifoldSpec, options: ReportOptions):
        if options.command not in COMMANDS:
            raise ValueError(f"未知的子命令 {options.command}，可选 {', '.join(COMMANDS)}")
        self.spec = spec
        self.options = options
        self.failures: List[Failure] = []

    # ------------------------------------------------------------------ 失败记录

    def fail(self, category: ExitCode, where: str, message: str):
        logger.failure(category.name, where, message)
        self.failures.append(Failure(category, where, message))

    def guard(self, category: ExitCode, where: str, fn: Callable[[], Any]) -> Any:
        """
        运行一个部分；AqsError 记为失败并返回 {'error': ...}

        前置条件不满足时只记录为不适用。
        """
        try:
            return fn()
        except PreconditionError as e:
            logger.debug(f"{where}: 不适用 ({e})")
            return {'applicable': False, 'reason': str(e)}
        except (InvariantViolation, RouteDisagreementError) as e:
            self.fail(category, where, str(e))
            return {'error': str(e)}
        except AqsError as e:
            self.fail(ExitCode.MODULE_ERROR, where, f"{type(e).__name__}: {e}")
            return {'error': str(e)}

    def check_table(self, category: ExitCode, where: str, table: CheckTable):
        if not table.passed:
            self.fail(category, where, ', '.join(c.name for c in table.failures()))

    # ------------------------------------------------------------------ 入口

    def run(self) -> Report:
        opts = self.options
        data: Dict[str, Any] = {
            'tool': {'name': APP_NAME, 'version': APP_VERSION},
            'command': opts.command,
            'seed': opts.seed,
            'spec': self.spec.to_dict(),
        }
        try:
            manifold = materialize(self.spec, opts.tol, opts.patch_tol, opts.points, opts.seed,
                                   opts.disc_radius, opts.flat_box)
        except SpecError as e:
            self.fail(ExitCode.SPEC_ERROR, 'materialize', str(e))
            return Report(data, self.failures)
        except AqsError as e:
            self.fail(ExitCode.HOST_INVARIANT, 'materialize', f"{type(e).__name__}: {e}")
            return Report(data, self.failures)
        data['manifold'] = {'name': manifold.name, 'kind': self.spec.kind, 'dim': self.spec.dim}
        if manifold.is_patch:
            data['seed'] = self.spec.seed if self.spec.seed is not None else opts.seed
            data['patch'] = self.run_patch(manifold)
        else:
            data['host'] = self.host_section(manifold)
            if not data['host']['jacobi']['passed']:
                return Report(data, self.failures)
            data['structures'] = []
            for s in manifold.structures:
                with logger.section(s.name):
                    data['structures'].append(self.run_structure(manifold, s))
            if 'triple' in opts.scope and manifold.triple is not None:
                data['triple'] = self.triple_section(manifold)
        report = Report(data, self.failures)
        logger.info(f"{manifold.name}: 报告完成 ({opts.command})，退出码 {int(report.exit_code)}")
        return report

    # ------------------------------------------------------------------ 李代数

    def host_section(self, manifold: Manifold) -> Dict[str, Any]:
        alg = manifold.algebra
        out: Dict[str, Any] = {'name': alg.name, 'scalars': alg.kind.value, 'labels': list(alg.labels)}
        jacobi = jacobi_check(alg)
        out['jacobi'] = jacobi.to_dict()
        if not jacobi:
            self.fail(ExitCode.HOST_INVARIANT, alg.name, f"Jacobi 恒等式不成立 (偏差 {jacobi.violation})")
        weights = manifold.heisenberg_weights
        if weights is not None and 'curvature' in self.options.scope and manifold.structures:
            out['ricci_xi_xi'] = self.heisenberg_ricci_note(manifold.structures[0], weights)
        if 'connection' in self.options.scope and isinstance(alg, LieAlgebraData):
            out['local_symmetry'] = self.guard(ExitCode.CONNECTION, f"{alg.name}/local_symmetry",
                                               lambda: local_symmetry_check(alg).to_dict())
        return out

    def heisenberg_ricci_note(self, s: AcmStructure, weights: list) -> Dict[str, Any]:
        """Ric(ξ,ξ) = |ψ|² = 4Σλ²，同时给出 −8Σλ² 以便对照"""
        xi = s.xi.values_only().components
        ric = s.curvature.ric.components
        value = sum(xi[i] * ric[i, j] * xi[j] for i in range(s.dim) for j in range(s.dim))
        expected = 4 * sum(w * w for w in weights)
        alternative = -8 * sum(w * w for w in weights)
        matches = s.ctx.is_zero(value - expected, float(abs(expected)))
        if not matches:
            self.fail(ExitCode.IDENTITY_SUITE, f"{s.name}/ricci_xi_xi",
                      f"Ric(ξ,ξ) = {value}，应为 4Σλ² = {expected}")
        return {
            'computed': value,
            'expected_4_sum_sq': expected,
            'matches': bool(matches),
            'negative_8_sum_sq': alternative,
            'note': 'Ric(ξ,ξ) = |ψ|² ≥ 0，取 Koszul 公式直接计算的值；−8Σλ² 为负，不可能成立',
        }

    def run_structure(self, manifold: Manifold, s: AcmStructure) -> Dict[str, Any]:
        scope = self.options.scope
        out: Dict[str, Any] = {'name': s.name}
        validity = validate(s)
        out['validity'] = validity.to_dict()
        if not validity.passed:
            self.fail(ExitCode.STRUCTURE_INVALID, s.name,
                      ', '.join(c.name for c in validity.failures()))
            return out
        report = classify(s, with_rank=True)
        aqs = report.flag('anti_quasi_sasakian')
        if 'classify' in scope:
            out['classification'] = report.to_dict()
            out['flags'] = _flag_summary(report.checks)
        ops = None
        if scope & {'spectrum', 'triple', 'curvature'}:
            ops = self.guard(ExitCode.MODULE_ERROR, f"{s.name}/spectrum", lambda: self.operators(s))
        if 'spectrum' in scope:
            out['operators'] = ops.to_dict() if hasattr(ops, 'to_dict') else ops
        if 'curvature' in scope:
            out['curvature'] = self.curvature_section(s, aqs, ops)
        if 'identities' in scope:
            out['identity_suite'] = self.identity_section(s, aqs)
        if 'triple' in scope and aqs and hasattr(ops, 'spectrum'):
            promoted = self.promote(s, ops)
            if promoted is not None:
                out['k1_promote'] = promoted
        connection = None
        if scope & {'connection', 'decompose'} and aqs:
            connection = self.guard(ExitCode.CONNECTION, f"{s.name}/connection",
                                    lambda: connection_suite(s))
        if 'connection' in scope:
            out['connection'] = self.connection_section(s, aqs, connection)
        if 'decompose' in scope:
            out['decompose'] = self.decompose_section(s, aqs, connection, report)
        return out

    def operators(self, s: AcmStructure):
        opts = self.options
        return derived_operators(s, opts.cluster_tol, opts.offdiag_tol, opts.max_sweeps)

    def curvature_section(self, s: AcmStructure, aqs: bool, ops) -> Dict[str, Any]:
        out: Dict[str, Any] = dict(s.curvature.summary())
        out['eta_einstein'] = self.guard(ExitCode.MODULE_ERROR, f"{s.name}/eta_einstein",
                                         lambda: eta_einstein_fit(s).to_dict())
        out['constant_curvature'] = self.guard(ExitCode.IDENTITY_SUITE, f"{s.name}/constant_curvature",
                                               lambda: constant_curvature_check(s, aqs).to_dict())
        if getattr(ops, 'spectrum', None) is not None:
            out['xi_sectional'] = self.guard(ExitCode.MODULE_ERROR, f"{s.name}/xi_sectional",
                                             lambda: xi_sectional_curvatures(s, self.options.tol).to_dict())
        return out

    def identity_section(self, s: AcmStructure, aqs: bool) -> Dict[str, Any]:
        """反拟 Sasakian 结构跑整套恒等式；其余结构只跑普遍成立的部分"""
        table = identity_suite(s) if aqs else general_identities(s)
        self.check_table(ExitCode.IDENTITY_SUITE, f"{s.name}/identity_suite", table)
        return {'scope': 'anti_quasi_sasakian' if aqs else 'general',
                'passed': table.passed, 'checks': table.to_dict()}

    def promote(self, s: AcmStructure, ops) -> Optional[Dict[str, Any]]:
        """ψ² 的谱为 {0, −1} 时升级为 (A, φ, ψ) 三元组"""
        spectrum = ops.spectrum
        if spectrum is None or ops.e_dim:
            return None
        tol = max(spectrum.cluster_tol, 1e-10)
        if not all(abs(v) <= tol or abs(v + 1.0) <= tol for v in spectrum.distinct):
            return None
        return self.guard(ExitCode.QUATERNIONIC, f"{s.name}/k1_promote",
                          lambda: k1_promote(s).to_dict())

    def connection_section(self, s: AcmStructure, aqs: bool, connection) -> Dict[str, Any]:
        if not aqs:
            return {'applicable': False, 'reason': '典范联络只对反拟 Sasakian 结构定义'}
        if not isinstance(connection, tuple):
            return connection
        c, table, parallel = connection
        self.check_table(ExitCode.CONNECTION, f"{s.name}/connection", table)
        out = c.summary()
        out['checks'] = table.to_dict()
        out['parallel_torsion'] = parallel.to_dict()
        out['nonnegative_curvature_check'] = self.guard(
            ExitCode.CONNECTION, f"{s.name}/curvature_check",
            lambda: nonnegative_curvature_check(c, parallel).to_dict())
        return out

    def decompose_section(self, s: AcmStructure, aqs: bool, connection, report) -> Dict[str, Any]:
        out: Dict[str, Any] = {'rank': (report.rank or rank_of_eta(s)).to_dict()}
        if not aqs:
            out['split'] = {'applicable': False, 'reason': '分裂只对反拟 Sasakian 结构定义'}
        elif isinstance(connection, tuple):
            c, _, parallel = connection
            out['split'] = self.guard(ExitCode.CONNECTION, f"{s.name}/decompose",
                                      lambda: decomposition_check(c, parallel).to_dict())
        else:
            out['split'] = connection
        return out

    def triple_section(self, manifold: Manifold) -> Dict[str, Any]:
        t = manifold.triple
        out: Dict[str, Any] = {'name': t.name, 'labels': list(t.labels)}
        quaternionic = quaternionic_check(t)
        out['quaternionic'] = quaternionic.to_dict()
        self.check_table(ExitCode.QUATERNIONIC, f"{t.name}/quaternionic", quaternionic)

        def double():
            table = double_aqs_check(t)
            return {'double_aqs_sasakian': table.passed, 'checks': table.to_dict()}

        out['double_aqs'] = self.guard(ExitCode.QUATERNIONIC, f"{t.name}/double_aqs", double)
        out['structure_equations'] = self.guard(ExitCode.QUATERNIONIC, f"{t.name}/structure_equations",
                                                lambda: structure_equations_check(t).to_dict())
        out['lemma_cmd'] = self.guard(ExitCode.QUATERNIONIC, f"{t.name}/lemma_cmd",
                                      lambda: lemma_cmd_check(t).to_dict())
        if t.dim == 5:
            out['hypo_su2'] = self.guard(ExitCode.QUATERNIONIC, f"{t.name}/hypo_su2",
                                         lambda: hypo_su2_check(t).to_dict())
        return out

    # ------------------------------------------------------------------ 坐标片

    def run_patch(self, manifold: Manifold) -> Dict[str, Any]:
        patch = manifold.patch
        points = manifold.points
        scope = self.options.scope
        out: Dict[str, Any] = {'describe': patch.describe(), 'count': len(points)}
        per_point: List[Dict[str, Any]] = []
        flags: Dict[str, List[bool]] = {}
        disc = self.disc_expectations(manifold)
        expected = CheckTable() if disc else None
        for index, x in enumerate(points):
            s = patch_structure(patch, x, f"{patch.name}@{index}")
            entry = self.run_point(s, index, x, scope, flags, expected, disc)
            per_point.append(entry)
        out['flags'] = {name: all(values) for name, values in sorted(flags.items())}
        if 'decompose' in scope or 'classify' in scope:
            out['rank'] = self.guard(ExitCode.STRUCTURE_INVALID, f"{patch.name}/rank",
                                     lambda: rank_over_samples(patch, points).to_dict())
        if 'curvature' in scope:
            out['eta_einstein'] = self.guard(
                ExitCode.MODULE_ERROR, f"{patch.name}/eta_einstein",
                lambda: eta_einstein_over_samples(patch, points).to_dict(self.options.include_points))
        if expected is not None:
            out['expected_values'] = {'passed': expected.passed, 'relative_tol': DISC_RELATIVE_TOL,
                                      'checks': expected.to_dict()}
            self.check_table(ExitCode.IDENTITY_SUITE, f"{patch.name}/expected_values", expected)
        if self.options.include_points:
            out['points'] = per_point
        logger.info(f"{patch.name}: {len(points)} 个样本点检查完成")
        return out

    def disc_expectations(self, manifold: Manifold) -> Optional[Dict[str, Any]]:
        spec = self.spec
        if spec.kind != 'patch_builtin' or spec.builtin != 'disc_bundle':
            return None
        if spec.params['n'] != 1 or spec.params['p'] != 1 or not spec.params['twisted']:
            return None
        return {'c': spec.params['c']}

    def run_point(self, s: AcmStructure, index: int, x: np.ndarray, scope: set,
                  flags: Dict[str, List[bool]], expected: Optional[CheckTable],
                  disc: Optional[Dict[str, Any]]) -> Dict[str, Any]:
        where = s.name
        entry: Dict[str, Any] = {'index': index, 'point': np.asarray(x, float).tolist()}
        validity = validate(s)
        if not validity.passed:
            self.fail(ExitCode.STRUCTURE_INVALID, where, ', '.join(c.name for c in validity.failures()))
            entry['validity'] = validity.to_dict()
            return entry
        report = classify(s, with_rank=False)
        aqs = report.flag('anti_quasi_sasakian')
        for name, value in _flag_summary(report.checks).items():
            flags.setdefault(name, []).append(value)
        if 'classify' in scope:
            entry['flags'] = _flag_summary(report.checks)
        ops = None
        if scope & {'spectrum', 'curvature'} or expected is not None:
            ops = self.guard(ExitCode.MODULE_ERROR, f"{where}/spectrum", lambda: self.operators(s))
            if 'spectrum' in scope and hasattr(ops, 'spectrum'):
                entry['spectrum'] = ops.spectrum.to_dict() if ops.spectrum is not None else None
        if 'identities' in scope:
            entry['identity_suite'] = self.identity_section(s, aqs)
        if 'connection' in scope and aqs:
            connection = self.guard(ExitCode.CONNECTION, f"{where}/connection", lambda: connection_suite(s))
            entry['connection'] = self.connection_point(where, connection)
        if expected is not None:
            self.expected_point(s, index, x, disc['c'], ops, expected)
        logger.debug(f"{where}: 样本点检查完成")
        return entry

    def connection_point(self, where: str, connection) -> Dict[str, Any]:
        if not isinstance(connection, tuple):
            return connection
        c, table, parallel = connection
        self.check_table(ExitCode.CONNECTION, f"{where}/connection", table)
        return {'checks': table.to_dict(), 'parallel_torsion': parallel.to_dict()}

    def expected_point(self, s: AcmStructure, index: int, x: np.ndarray, c: float, ops,
                       expected: CheckTable):
        """圆盘丛：ψ² 的四重特征值 −c²(1−|z|²)³/64，μ = (3/2)c − 2λ²，ν = 6λ² − (3/2)c"""
        target = disc_psi_eigenvalue(c, x)
        spectrum = getattr(ops, 'spectrum', None)
        if spectrum is None:
            expected.add(check_true(f"psi_sq_eigenvalue@{index}", False, '没有实谱'))
        else:
            quadruple = [v for v, m in spectrum.clusters if m == 4]
            value = quadruple[0] if quadruple else float('nan')
            error = abs(value - target) / max(abs(target), 1e-300)
            expected.add(check_true(f"psi_sq_eigenvalue@{index}", bool(error <= DISC_RELATIVE_TOL),
                                    f"计算值 {value!r}，期望 {target!r}"))
        mu_target, nu_target = disc_eta_einstein(c, x)
        fit = eta_einstein_fit(s)
        for label, value, want in (('mu', fit.mu, mu_target), ('nu', fit.nu, nu_target)):
            error = abs(float(value) - want) / max(1.0, abs(want))
            expected.add(check_true(f"{label}@{index}", bool(error <= DISC_RELATIVE_TOL),
                                    f"计算值 {float(value)!r}，期望 {want!r}"))


def run_report(spec: ManifoldSpec, options: Optional[ReportOptions] = None) -> Report:
    """
    对描述运行报告

    Args:
        spec: 已校验的描述
        options: 子命令与容差；None 时取 Config 中的值

    Returns:
        Report（exit_code 为最小的失败类别）
    """
    options = options or ReportOptions.from_config(Config())
    return ReportRunner(spec, options).run()
