#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Ricci 曲率相关检验
η-Einstein 拟合 Ric = μg + νη⊗η、常截面曲率判定、ξ-截面曲率
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from hosts.patch import PatchGeometry
from structures.acm import AcmStructure, derived_operators, patch_structure, validate
from structures.classification import classify
from tensors.checks import CheckTable, IdentityCheck, check_true
from tensors.frame_tensor import FrameTensor, LOWER, UPPER, einsum, einsum_arrays
from tensors.linalg import solve
from tensors.scalar import max_abs, to_float_array
from utils.errors import DegenerateError, InvariantViolation
from utils.logger import get_logger

logger = get_logger()

# 样本点间的相对离散度不超过该值即视为常数
CONSTANT_SPREAD = 1e-6


def _frobenius(a: FrameTensor, b: FrameTensor):
    return einsum('ij,ij->', a, b, signature=()).value


@dataclass
class EtaEinsteinFit:
    """Ric ≈ μg + νη⊗η 的最小二乘拟合"""
    mu: Any
    nu: Any
    residual: Any
    is_eta_einstein: bool
    scalar: Any
    note: str = ''

    def to_dict(self) -> Dict[str, Any]:
        out = {
            'mu': self.mu,
            'nu': self.nu,
            'residual': self.residual,
            'eta_einstein': self.is_eta_einstein,
            'scalar_curvature': self.scalar,
        }
        if self.note:
            out['note'] = self.note
        return out


def eta_einstein_fit(s: AcmStructure) -> EtaEinsteinFit:
    """
    对标架分量求 μ, ν 的正规方程

    [⟨g,g⟩   ⟨g,ηη⟩ ] [μ]   [⟨Ric,g⟩ ]
    [⟨ηη,g⟩  ⟨ηη,ηη⟩] [ν] = [⟨Ric,ηη⟩]

    精确模式下直接求有理解；残差为 Ric − μg − νη⊗η 的最大分量模。
    一维时 g 与 η⊗η 成比例，只拟合 μ。
    """
    g = s.g.values_only()
    eta = s.eta.values_only()
    ric = s.curvature.ric.values_only()
    eta_eta = einsum('i,j->ij', eta, eta, signature=(LOWER, LOWER))
    zero = s.ctx.zero()
    note = ''
    normal = np.array([[_frobenius(g, g), _frobenius(g, eta_eta)],
                       [_frobenius(eta_eta, g), _frobenius(eta_eta, eta_eta)]],
                      dtype=object if s.ctx.exact else float)
    rhs = np.array([_frobenius(ric, g), _frobenius(ric, eta_eta)],
                   dtype=object if s.ctx.exact else float)
    try:
        mu, nu = solve(normal, rhs)
    except DegenerateError:
        mu, nu = rhs[0] / normal[0, 0], zero
        note = 'g 与 η⊗η 线性相关，ν 取 0'
    fitted = g.scale(mu) + eta_eta.scale(nu)
    residual = max_abs((ric - fitted).components)
    scale = 0.0 if s.ctx.exact else max(s.scale, float(ric.max_abs()))
    ok = s.ctx.is_zero(residual, scale)
    logger.debug(f"{s.name}: η-Einstein 拟合 μ={mu}, ν={nu}, 残差={residual}")
    return EtaEinsteinFit(mu, nu, residual, bool(ok), s.curvature.scalar, note)


@dataclass
class SampledEtaEinstein:
    """坐标片上逐点的 η-Einstein 拟合"""
    points: List[List[float]]
    fits: List[EtaEinsteinFit]

    @property
    def pointwise(self) -> bool:
        return all(f.is_eta_einstein for f in self.fits)

    def spread(self, attr: str) -> float:
        values = [float(getattr(f, attr)) for f in self.fits]
        return max(values) - min(values) if values else 0.0

    @property
    def constant(self) -> bool:
        """μ, ν 的离散度相对其量级不超过 CONSTANT_SPREAD"""
        for attr in ('mu', 'nu'):
            size = max((abs(float(getattr(f, attr))) for f in self.fits), default=0.0)
            if self.spread(attr) > CONSTANT_SPREAD * max(1.0, size):
                return False
        return True

    def to_dict(self, include_points: bool = True) -> Dict[str, Any]:
        out = {
            'pointwise_eta_einstein': self.pointwise,
            'constant_coefficients': self.constant,
            'mu_spread': self.spread('mu'),
            'nu_spread': self.spread('nu'),
            'sampled': True,
            'count': len(self.fits),
        }
        if include_points:
            out['points'] = [dict(point=p, **f.to_dict()) for p, f in zip(self.points, self.fits)]
        return out


def eta_einstein_over_samples(patch: PatchGeometry, points: Sequence[np.ndarray]) -> SampledEtaEinstein:
    """逐点拟合；μ(x), ν(x) 是否为常数只在样本点上判断"""
    fits = [eta_einstein_fit(patch_structure(patch, x)) for x in points]
    report = SampledEtaEinstein([np.asarray(x, float).tolist() for x in points], fits)
    logger.info(f"{patch.name}: {len(fits)} 个样本点 η-Einstein 拟合, "
                f"逐点成立={report.pointwise}, 系数为常数={report.constant}")
    return report


# ---------------------------------------------------------------------- 常截面曲率

@dataclass
class ConstantCurvatureVerdict:
    constant: bool
    kappa: Any
    check: IdentityCheck
    sectional_range: Tuple[float, float]
    consequences: CheckTable = field(default_factory=CheckTable)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'constant': self.constant,
            'kappa': self.kappa,
            'check': self.check.to_dict(),
            'sectional_min': self.sectional_range[0],
            'sectional_max': self.sectional_range[1],
            'consequences': self.consequences.to_dict(),
        }


def _frame_sectionals(s: AcmStructure) -> List[float]:
    """各标架平面 (e_i, e_j) 的截面曲率（浮点）"""
    r = to_float_array(s.curvature.R.values_only().components)
    g = to_float_array(s.g.values_only().components)
    lowered = einsum_arrays('ml,lijk->mijk', g, r)
    values = []
    for i in range(s.dim):
        for j in range(i + 1, s.dim):
            gram = g[i, i] * g[j, j] - g[i, j] ** 2
            if gram > 0:
                values.append(float(lowered[i, i, j, j] / gram))
    return values


def constant_curvature_check(s: AcmStructure, aqs: Optional[bool] = None) -> ConstantCurvatureVerdict:
    """
    常截面曲率判定：R(X,Y)Z = κ(g(Y,Z)X − g(X,Z)Y)，κ = s/(m(m−1))

    结构为反拟 Sasakian 且曲率为常数时，要求 κ = 0 且 ψ = 0。

    Args:
        s: 结构
        aqs: 是否反拟 Sasakian；None 时就地分类

    Raises:
        InvariantViolation: 常曲率反拟 Sasakian 结构不是平坦 cokähler
    """
    dim = s.dim
    sectionals = _frame_sectionals(s)
    span = (min(sectionals), max(sectionals)) if sectionals else (0.0, 0.0)
    if dim < 2:
        check = check_true('constant_curvature', True, 'dim < 2')
        return ConstantCurvatureVerdict(True, s.ctx.zero(), check, span)
    denominator = dim * (dim - 1)
    kappa = s.curvature.scalar / denominator
    g = s.g.values_only()
    identity = FrameTensor.identity(dim, s.kind)
    sig4 = (UPPER, LOWER, LOWER, LOWER)
    model = (einsum('jk,li->lijk', g, identity, signature=sig4)
             - einsum('ik,lj->lijk', g, identity, signature=sig4)).scale(kappa)
    check = s.equal_check('constant_curvature', s.curvature.R, model)
    verdict = ConstantCurvatureVerdict(check.passed, kappa, check, span)
    if check.passed:
        if aqs is None:
            if validate(s).passed:
                aqs = classify(s, with_rank=False).flag('anti_quasi_sasakian')
            else:
                aqs = False
        if aqs:
            flat = verdict.consequences.add(
                s.zero_check('kappa_zero', FrameTensor(np.asarray(kappa), (), dim=dim)))
            psi_zero = verdict.consequences.add(s.zero_check('psi_zero', s.psi))
            if not (flat and psi_zero):
                raise InvariantViolation(
                    f"{s.name}: 常曲率 κ={kappa} 的反拟 Sasakian 结构不是平坦 cokähler")
    logger.debug(f"{s.name}: 常曲率={check.passed}, κ={kappa}")
    return verdict


# ---------------------------------------------------------------------- ξ-截面曲率

@dataclass
class XiSectionalReport:
    """ψ² 的各水平特征向量 X 上的 K(ξ, X)，以及与 −特征值 的比较"""
    pairs: List[Tuple[float, float]]
    nonnegative: bool
    matches_spectrum: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'pairs': [{'psi_sq_eigenvalue': e, 'xi_sectional': k} for e, k in self.pairs],
            'nonnegative': self.nonnegative,
            'matches_minus_eigenvalue': self.matches_spectrum,
        }


def xi_sectional_curvatures(s: AcmStructure, tol: float = 1e-8) -> XiSectionalReport:
    """
    取 ψ² 的 g-正交特征向量中与 ξ 正交的那些，计算 K(ξ, X)

    反拟 Sasakian 时 K(ξ, X) = −(ψ² 的特征值) ≥ 0。

    Raises:
        InvariantViolation: ψ² 不是 g-自伴的
    """
    ops = derived_operators(s)
    if ops.spectrum is None:
        raise InvariantViolation(f"{s.name}: ψ² 没有实谱，无法计算 ξ-截面曲率")
    g = to_float_array(s.g.values_only().components)
    eta = to_float_array(s.eta.values_only().components)
    xi = to_float_array(s.xi.values_only().components)
    r = to_float_array(s.curvature.R.values_only().components)
    r_xi = einsum_arrays('i,lijk->ljk', xi, r)
    pairs = []
    vectors = ops.spectrum.eigenvectors
    for value, col in zip(ops.spectrum.eigenvalues, range(vectors.shape[1])):
        v = vectors[:, col]
        norm = float(v @ g @ v)
        if norm <= 0 or abs(float(eta @ v)) > tol * max(1.0, np.sqrt(norm)):
            continue
        # K(ξ, X) = g(R(ξ, X)X, ξ) / |X|²
        w = einsum_arrays('ljk,j->lk', r_xi, v) @ v
        pairs.append((float(value), float(w @ g @ xi) / norm))
    scale = max([1.0] + [abs(e) for e, _ in pairs])
    nonneg = all(k >= -tol * scale for _, k in pairs)
    matches = all(abs(k + e) <= tol * scale for e, k in pairs)
    return XiSectionalReport(pairs, nonneg, matches)
