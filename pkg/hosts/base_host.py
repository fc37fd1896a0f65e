#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
宿主几何基类
定义几何所在标架的通用接口：李代数（左不变标架）与坐标片上的一点（坐标标架）
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, Optional

import numpy as np

from tensors.frame_tensor import FrameTensor, UPPER, einsum
from tensors.linalg import inverse, is_positive_definite
from tensors.scalar import ScalarContext, ScalarKind
from utils.errors import DegenerateError, NotSymmetricError


def inverse_field(metric: FrameTensor) -> FrameTensor:
    """
    度量的逆，射流一并求出

    Args:
        metric: (0,2) 度量，可带一阶/二阶射流

    Returns:
        (2,0) 逆度量；dG⁻¹ = −G⁻¹ dG G⁻¹，二阶导按乘积法则展开
    """
    inv = inverse(metric.components)
    if metric.jet_order is None:
        return FrameTensor(inv, (UPPER, UPPER), dim=metric.dim)
    grad = hess = None
    if metric.jet_order >= 1:
        # grad[i,j,z] = −inv[i,a] dG[a,b,z] inv[b,j]
        grad = -np.einsum('ia,abz,bj->ijz', inv, metric.grad, inv)
    if metric.jet_order >= 2:
        hess = (-np.einsum('ia,abyz,bj->ijyz', inv, metric.hess, inv)
                + np.einsum('ia,aby,bc,cdz,dj->ijyz', inv, metric.grad, inv, metric.grad, inv)
                + np.einsum('ia,abz,bc,cdy,dj->ijyz', inv, metric.grad, inv, metric.grad, inv))
    return FrameTensor(inv, (UPPER, UPPER), grad, hess, metric.jet_order, metric.dim)


class BaseHost(ABC):
    """宿主几何基类"""

    def __init__(self, name: str, ctx: ScalarContext):
        """
        初始化宿主

        Args:
            name: 宿主名称（写入报告）
            ctx: 标量上下文（精确或浮点 + 容差）
        """
        self.name = name
        self.ctx = ctx
        self._metric_inverse: Optional[FrameTensor] = None

    @property
    @abstractmethod
    def dim(self) -> int:
        """标架维数"""
        pass

    @property
    @abstractmethod
    def is_invariant(self) -> bool:
        """
        标架张量是否为常数

        Returns:
            李代数为 True（标架导数恒为零）；坐标片为 False
        """
        pass

    @abstractmethod
    def metric(self) -> FrameTensor:
        """
        度量 g_ij = g(e_i, e_j)

        Returns:
            (0,2) 对称正定张量；坐标片上携带二阶射流
        """
        pass

    @abstractmethod
    def brackets(self) -> FrameTensor:
        """
        标架的李括号

        Returns:
            c[i, j, k] 为 [e_i, e_j] 的第 k 个分量，签名 (l, l, u)；坐标标架为零
        """
        pass

    @abstractmethod
    def describe(self) -> Dict[str, Any]:
        """报告中回显的宿主描述"""
        pass

    @property
    def kind(self) -> ScalarKind:
        return self.ctx.kind

    def metric_inverse(self) -> FrameTensor:
        if self._metric_inverse is None:
            try:
                self._metric_inverse = inverse_field(self.metric())
            except DegenerateError as e:
                raise DegenerateError(f"{self.name}: 度量退化 ({e})") from e
        return self._metric_inverse

    def zeros(self, *signature: str) -> FrameTensor:
        return FrameTensor.zeros(self.dim, signature, self.kind)

    def identity(self) -> FrameTensor:
        return FrameTensor.identity(self.dim, self.kind)

    def basis(self, index: int, variance: str = UPPER) -> FrameTensor:
        return FrameTensor.basis(self.dim, index, self.kind, variance)

    def inner(self, u: FrameTensor, v: FrameTensor):
        """g(u, v)"""
        g = self.metric().values_only()
        return einsum("i,ij,j->", u.values_only(), g, v.values_only(), signature=()).value

    def check_metric(self):
        """度量对称且正定，否则抛出异常"""
        g = self.metric().components
        asym = g - g.T
        worst = max((abs(float(v)) for v in asym.flat), default=0.0)
        if not self.ctx.is_zero(worst, max((abs(float(v)) for v in g.flat), default=0.0)):
            raise NotSymmetricError(f"{self.name}: 度量不对称", worst)
        if not is_positive_definite(g):
            raise DegenerateError(f"{self.name}: 度量不是正定的")
