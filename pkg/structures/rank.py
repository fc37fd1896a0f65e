#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
η 的秩
rk(η) = 2r + 1，其中 2r 为 dη 限制在 D = ker η 上的矩阵秩；
反正规结构上 dη|_D 的秩为 4p，E = ker η ∩ ker dη 的维数为 2q，dim M = 2q + 4p + 1。
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from hosts.patch import PatchGeometry
from structures.acm import AcmStructure, patch_structure
from tensors.frame_tensor import einsum_arrays
from tensors.linalg import matrix_rank, nullspace
from utils.errors import InvariantViolation
from utils.logger import get_logger

logger = get_logger()


@dataclass
class RankReport:
    """秩数据；sampled 为 True 表示结论只在样本点上成立"""
    dim: int
    d_eta_rank: int
    e_basis: np.ndarray
    sampled: bool = False
    points: int = 1

    @property
    def rank_eta(self) -> int:
        return self.d_eta_rank + 1

    @property
    def p(self) -> int:
        return self.d_eta_rank // 4

    @property
    def e_dim(self) -> int:
        return int(self.e_basis.shape[1])

    @property
    def q(self) -> int:
        return self.e_dim // 2

    @property
    def quaternionic_rank(self) -> bool:
        """dη|_D 的秩可被 4 整除"""
        return self.d_eta_rank % 4 == 0

    @property
    def dimension_identity(self) -> bool:
        """dim = 2q + 4p + 1"""
        return self.quaternionic_rank and self.e_dim % 2 == 0 and \
            self.dim == 2 * self.q + 4 * self.p + 1

    def to_dict(self) -> Dict[str, Any]:
        out = {
            'p': self.p,
            'q': self.q,
            'rank_eta': self.rank_eta,
            'd_eta_rank_on_D': self.d_eta_rank,
            'e_dim': self.e_dim,
            'dimension_identity': self.dimension_identity,
            'e_basis': self.e_basis.T.tolist(),
        }
        if self.sampled:
            out['sampled'] = True
            out['points'] = self.points
            out['note'] = '秩的常数性只在样本点上验证'
        return out


def rank_of_eta(s: AcmStructure) -> RankReport:
    """
    η 的秩数据

    D 的基取 η 的零空间，dη 限制为 Bᵀ dη B 后求秩；E 为 [η; dη] 的零空间。

    Returns:
        RankReport（含 E 的基，按列）
    """
    eta = s.eta.values_only().components.reshape(1, -1)
    d_eta = s.d_eta.values_only().components
    horizontal = nullspace(eta, s.ctx)
    restricted = einsum_arrays('ai,ab,bj->ij', horizontal, d_eta, horizontal)
    r = matrix_rank(restricted, s.ctx)
    report = RankReport(s.dim, r, s.horizontal_kernel)
    logger.debug(f"{s.name}: rk(η) = {report.rank_eta}, p = {report.p}, q = {report.q}")
    return report


def rank_over_samples(patch: PatchGeometry, points: Sequence[np.ndarray],
                      name: Optional[str] = None) -> RankReport:
    """
    坐标片上逐点求秩并要求处处相同

    Returns:
        第一个样本点的 RankReport，标记为抽样结论

    Raises:
        InvariantViolation: 不同样本点上的秩不同
    """
    if not len(points):
        raise ValueError("至少需要一个样本点")
    reports: List[RankReport] = []
    for x in points:
        reports.append(rank_of_eta(patch_structure(patch, x, name)))
    ranks = sorted({r.d_eta_rank for r in reports})
    if len(ranks) > 1:
        raise InvariantViolation(f"{patch.name}: dη|_D 的秩在样本点上不是常数: {ranks}")
    first = reports[0]
    logger.info(f"{patch.name}: {len(reports)} 个样本点上 rk(η) = {first.rank_eta}")
    return RankReport(first.dim, first.d_eta_rank, first.e_basis, sampled=True, points=len(reports))
