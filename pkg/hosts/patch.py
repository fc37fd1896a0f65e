#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
坐标片宿主
坐标卡上以闭式给出的度量与结构场，借助二阶射流在任一点求值；
逐点的 Christoffel 符号、曲率与外微分都在坐标标架下计算（括号为零）。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import qmc

from geometry.connection import levi_civita
from geometry.curvature import CurvatureData, curvature
from geometry.forms import exterior_derivative
from hosts.base_host import BaseHost
from hosts.jets import JetScalar, stack_jets, variables
from tensors.frame_tensor import FrameTensor, LOWER, UPPER
from tensors.scalar import ScalarContext, ScalarKind
from utils.errors import DomainError
from utils.logger import get_logger

logger = get_logger()

# 场函数：接受坐标射流列表，返回嵌套的射流列表
FieldFn = Callable[[List[JetScalar]], Any]


@dataclass
class FieldSpec:
    """坐标片上的张量场：闭式函数 + 槽位签名"""
    fn: FieldFn
    signature: Tuple[str, ...]


class PatchGeometry:
    """
    坐标片几何

    metric_fn 给出度量矩阵（射流元素）；domain_fn 判定点是否在定义域内；
    sampler 把 [0,1)^dim 中的低差异序列映射到定义域（返回 None 表示舍弃该点）。
    """

    def __init__(self, name: str, dim: int, metric_fn: FieldFn,
                 domain_fn: Callable[[np.ndarray], bool],
                 sampler: Callable[[np.ndarray], Optional[np.ndarray]],
                 fields: Optional[Dict[str, FieldSpec]] = None,
                 params: Optional[Dict[str, Any]] = None,
                 ctx: Optional[ScalarContext] = None):
        self.name = name
        self.dim = dim
        self.metric_fn = metric_fn
        self.domain_fn = domain_fn
        self.sampler = sampler
        self.fields: Dict[str, FieldSpec] = dict(fields or {})
        self.params: Dict[str, Any] = dict(params or {})
        self.ctx = ctx or ScalarContext(ScalarKind.FLOAT, 1e-6)

    def contains(self, point: Sequence[float]) -> bool:
        x = np.asarray(point, dtype=float)
        return x.shape == (self.dim,) and bool(np.all(np.isfinite(x))) and bool(self.domain_fn(x))

    def require(self, point: Sequence[float]) -> np.ndarray:
        x = np.asarray(point, dtype=float)
        if not self.contains(x):
            raise DomainError(f"{self.name}: 点 {x.tolist()} 不在定义域内")
        return x

    def at(self, point: Sequence[float]) -> 'PatchPoint':
        return PatchPoint(self, self.require(point))

    def add_field(self, name: str, fn: FieldFn, signature: Sequence[str]):
        self.fields[name] = FieldSpec(fn, tuple(signature))

    def field_at(self, name: str, point: Sequence[float]) -> FrameTensor:
        """命名场在点上的值（携带二阶射流）"""
        if name not in self.fields:
            raise KeyError(f"{self.name}: 没有名为 {name} 的场")
        spec = self.fields[name]
        return evaluate_field(spec.fn, spec.signature, self.require(point), self.dim)

    def sample_points(self, count: int, seed: int = 0) -> List[np.ndarray]:
        """
        定义域内的确定性低差异样本点

        Args:
            count: 点数
            seed: Halton 序列打乱的种子

        Returns:
            按序列顺序排列的点
        """
        engine = qmc.Halton(d=self.dim, scramble=True, seed=seed)
        points: List[np.ndarray] = []
        drawn = 0
        while len(points) < count:
            batch = engine.random(max(16, 2 * (count - len(points))))
            drawn += len(batch)
            for u in batch:
                x = self.sampler(u)
                if x is not None and self.contains(x):
                    points.append(np.asarray(x, dtype=float))
                    if len(points) == count:
                        break
            if drawn > 10000 * max(1, count):
                raise DomainError(f"{self.name}: 采样器无法在定义域内产生足够的点")
        logger.debug(f"{self.name}: 采样 {count} 点（共抽取 {drawn} 个候选）")
        return points

    def with_flat_factor(self, m: int, box: float = 1.0,
                         fields: Optional[Dict[str, FieldSpec]] = None) -> 'PatchGeometry':
        """
        与 m 维欧氏因子的乘积：度量分块对角，新坐标追加在末尾

        fields 为乘积上的结构场；不给出时乘积上没有结构场。
        """
        n = self.dim
        base_metric = self.metric_fn

        def metric_fn(xs):
            g = [list(row) + [0.0] * m for row in base_metric(xs[:n])]
            for a in range(m):
                g.append([0.0] * n + [1.0 if b == a else 0.0 for b in range(m)])
            return g

        def domain_fn(x):
            return self.domain_fn(x[:n]) and bool(np.all(np.abs(x[n:]) <= box))

        def sampler(u):
            head = self.sampler(u[:n])
            if head is None:
                return None
            return np.concatenate([head, box * (2.0 * u[n:] - 1.0)])

        params = dict(self.params)
        params['flat_factor'] = m
        return PatchGeometry(f"{self.name}x R{m}", n + m, metric_fn, domain_fn, sampler,
                             fields, params, self.ctx)

    def describe(self) -> Dict[str, Any]:
        return {
            'kind': 'patch_builtin',
            'name': self.name,
            'dim': self.dim,
            'scalars': 'float',
            'params': dict(self.params),
        }


def evaluate_field(fn: FieldFn, signature: Sequence[str], point: np.ndarray, m: int) -> FrameTensor:
    values, grad, hess = stack_jets(fn(variables(point)), m)
    return FrameTensor(values, tuple(signature), grad, hess, jet_order=2, dim=m)


class PatchPoint(BaseHost):
    """坐标片上的一点：坐标标架，度量携带二阶射流"""

    def __init__(self, patch: PatchGeometry, point: np.ndarray):
        super().__init__(f"{patch.name}@{np.round(point, 6).tolist()}", patch.ctx)
        self.patch = patch
        self.point = point
        self._metric: Optional[FrameTensor] = None

    @property
    def dim(self) -> int:
        return self.patch.dim

    @property
    def is_invariant(self) -> bool:
        return False

    def metric(self) -> FrameTensor:
        if self._metric is None:
            self._metric = evaluate_field(self.patch.metric_fn, (LOWER, LOWER), self.point, self.dim)
        return self._metric

    def brackets(self) -> FrameTensor:
        return self.zeros(LOWER, LOWER, UPPER)

    def field(self, name: str) -> FrameTensor:
        return self.patch.field_at(name, self.point)

    def describe(self) -> Dict[str, Any]:
        return {'patch': self.patch.name, 'point': [float(v) for v in self.point]}


def christoffel_at(patch: PatchGeometry, point: Sequence[float]) -> FrameTensor:
    """
    点上的 Christoffel 符号 Γ[k, i, j] = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij)

    Raises:
        DomainError: 点不在定义域内
        DegenerateError: 度量奇异
    """
    return levi_civita(patch.at(point)).gamma


def curvature_at(patch: PatchGeometry, point: Sequence[float]) -> CurvatureData:
    """点上的 R、Ric、Q 与标量曲率"""
    host = patch.at(point)
    return curvature(host, levi_civita(host))


def d_form_at(patch: PatchGeometry, form: Any, point: Sequence[float]) -> FrameTensor:
    """
    点上的外微分

    Args:
        patch: 坐标片
        form: 场名，或 (场函数, 阶数) 二元组
        point: 点

    Returns:
        (k+1)-形式在该点的分量
    """
    host = patch.at(point)
    if isinstance(form, str):
        omega = host.field(form)
    else:
        fn, degree = form
        omega = evaluate_field(fn, (LOWER,) * degree, host.point, host.dim)
    return exterior_derivative(host, omega)
