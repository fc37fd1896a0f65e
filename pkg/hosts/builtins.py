#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
内置坐标片
Kähler 坐标片上由 (2,0)-型闭 2-形式 ω = dβ 构造的平凡圆丛：
η = dt + π*β，g = π*k + η⊗η，φ 为 J 的水平提升，ξ = ∂_t。

坐标顺序 (x_1..x_{2n}, y_1..y_{2n}, t)，J∂x_i = ∂y_i，
β = Σ_{i≤p}(x_i dx_{n+i} − y_i dy_{n+i})。
"""

from __future__ import annotations

import math
from typing import Callable, List, Optional

import numpy as np

from hosts.patch import FieldSpec, PatchGeometry
from tensors.frame_tensor import LOWER, UPPER
from tensors.scalar import ScalarContext, ScalarKind
from utils.errors import PreconditionError

# 坐标片浮点判零容差
PATCH_TOL = 1e-6

KahlerFn = Callable[[list], List[list]]


def _beta(xs, n: int, p: int) -> list:
    """β 的分量（只含底空间的 4n 个坐标）"""
    beta = [0.0] * (4 * n)
    for i in range(p):
        beta[n + i] = xs[i]
        beta[3 * n + i] = -xs[2 * n + i]
    return beta


def _complex_structure(n: int) -> np.ndarray:
    """J[k, j]：J∂x_i = ∂y_i，J∂y_i = −∂x_i"""
    m = 2 * n
    j = np.zeros((2 * m, 2 * m))
    for i in range(m):
        j[m + i, i] = 1.0
        j[i, m + i] = -1.0
    return j


def circle_bundle(name: str, n: int, p: int, kahler_fn: KahlerFn,
                  domain_fn: Callable[[np.ndarray], bool],
                  sampler: Callable[[np.ndarray], Optional[np.ndarray]],
                  params: dict, twisted: bool = True) -> PatchGeometry:
    """
    Kähler 坐标片 (ℝ^{4n}, J, k) 上的圆丛坐标片

    Args:
        name: 名称
        n: 复维数的一半（底空间实维数 4n）
        p: β 中的项数，0 ≤ p ≤ n
        kahler_fn: 底空间度量 k（射流矩阵，4n × 4n）
        domain_fn: 定义域判定（作用于全部 4n+1 个坐标）
        sampler: [0,1)^{4n+1} → 定义域
        params: 记录在坐标片上的参数
        twisted: False 时 β = 0（乘积结构）

    Returns:
        带 phi、xi、eta 场的坐标片
    """
    if not 0 <= p <= n:
        raise PreconditionError(f"要求 0 ≤ p ≤ n，实际 n={n}, p={p}")
    base = 4 * n
    dim = base + 1
    j = _complex_structure(n)

    def eta_fn(xs):
        beta = _beta(xs, n, p) if twisted else [0.0] * base
        return beta + [1.0]

    def metric_fn(xs):
        k = kahler_fn(xs[:base])
        eta = eta_fn(xs)
        g = [[eta[a] * eta[b] for b in range(dim)] for a in range(dim)]
        for a in range(base):
            for b in range(base):
                g[a][b] = g[a][b] + k[a][b]
        return g

    def phi_fn(xs):
        # φ∂_j = J∂_j − β(J∂_j)∂_t
        beta = eta_fn(xs)[:base]
        phi = [[0.0] * dim for _ in range(dim)]
        for col in range(base):
            target = [float(v) for v in j[:, col]]
            for row in range(base):
                phi[row][col] = target[row]
            phi[base][col] = -sum(beta[r] * target[r] for r in range(base) if target[r])
        return phi

    def xi_fn(xs):
        return [0.0] * base + [1.0]

    fields = {
        'phi': FieldSpec(phi_fn, (UPPER, LOWER)),
        'xi': FieldSpec(xi_fn, (UPPER,)),
        'eta': FieldSpec(eta_fn, (LOWER,)),
    }
    params = dict(params, n=n, p=p, twisted=twisted)
    return PatchGeometry(name, dim, metric_fn, domain_fn, sampler, fields, params,
                         ScalarContext(ScalarKind.FLOAT, PATCH_TOL))


# ---------------------------------------------------------------------- 复单位球

def disc_metric(c: float, n: int) -> KahlerFn:
    """
    常全纯截面曲率 c < 0 的复双曲度量
    h_ij = a[(1 − |z|²)δ_ij + z̄_i z_j]，a = −4 / (c(1 − |z|²)²)；
    k(∂x_i, ∂x_j) = k(∂y_i, ∂y_j) = Re h_ij，k(∂x_i, ∂y_j) = Im h_ij
    """
    m = 2 * n

    def fn(xs):
        x, y = xs[:m], xs[m:2 * m]
        norm = sum(v * v for v in xs[:2 * m])
        rest = 1.0 - norm
        a = -4.0 / (c * rest * rest)
        k = [[0.0] * (2 * m) for _ in range(2 * m)]
        for i in range(m):
            for jj in range(m):
                # z̄_i z_j = (x_i x_j + y_i y_j) + i(x_i y_j − y_i x_j)
                re = x[i] * x[jj] + y[i] * y[jj]
                im = x[i] * y[jj] - y[i] * x[jj]
                if i == jj:
                    re = re + rest
                k[i][jj] = a * re
                k[m + i][m + jj] = a * re
                k[i][m + jj] = a * im
                k[m + jj][i] = a * im
        return k

    return fn


def builtin_disc_bundle(c: float, n: int = 1, p: Optional[int] = None,
                        radius: float = 0.9, twisted: bool = True) -> PatchGeometry:
    """
    复单位球 D^{2n} ⊂ ℂ^{2n} 上的圆丛，默认 n = 1（5 维）

    Args:
        c: 全纯截面曲率，必须为负
        n: 复维数的一半
        p: β 中的项数，默认 n
        radius: 采样半径 |z| ≤ radius < 1
        twisted: False 时为乘积 D × S¹

    Raises:
        PreconditionError: c ≥ 0 或 radius 不在 (0, 1) 内
    """
    c = float(c)
    if not c < 0:
        raise PreconditionError(f"圆盘丛要求 c < 0，实际 {c}")
    if not 0 < radius < 1:
        raise PreconditionError(f"采样半径必须在 (0, 1) 内，实际 {radius}")
    p = n if p is None else p
    base = 4 * n

    def domain_fn(x):
        return float(np.dot(x[:base], x[:base])) < 1.0

    def sampler(u):
        z = radius * (2.0 * u[:base] - 1.0)
        if float(np.dot(z, z)) > radius * radius:
            return None
        return np.concatenate([z, [2.0 * math.pi * u[base] - math.pi]])

    return circle_bundle('disc_bundle' if twisted else 'disc_product', n, p, disc_metric(c, n),
                         domain_fn, sampler, {'c': c, 'radius': radius}, twisted)


def disc_psi_eigenvalue(c: float, point) -> float:
    """5 维圆盘丛上 ψ² 的非零特征值 −c²(1 − |z|²)³/64"""
    z = np.asarray(point, float)[:4]
    return -c * c * (1.0 - float(z @ z)) ** 3 / 64.0


def disc_eta_einstein(c: float, point):
    """(μ, ν) = ((3/2)c − 2λ², 6λ² − (3/2)c)，λ² = c²(1 − |z|²)³/64"""
    lam_sq = -disc_psi_eigenvalue(c, point)
    return 1.5 * c - 2.0 * lam_sq, 6.0 * lam_sq - 1.5 * c


# ---------------------------------------------------------------------- 平坦例子

def builtin_flat_disco(n: int = 1, p: int = 1, box: float = 1.0) -> PatchGeometry:
    """
    平坦 Kähler 坐标片 ℝ^{4n} 上的圆丛，k 为欧氏度量

    Raises:
        PreconditionError: n < 1 或 p 不在 [1, n] 内
    """
    if n < 1:
        raise PreconditionError(f"要求 n ≥ 1，实际 {n}")
    if not 1 <= p <= n:
        raise PreconditionError(f"平坦例子要求 1 ≤ p ≤ n，实际 n={n}, p={p}")
    base = 4 * n

    def flat(xs):
        return [[1.0 if a == b else 0.0 for b in range(base)] for a in range(base)]

    def domain_fn(x):
        return bool(np.all(np.abs(x[:base]) <= box))

    def sampler(u):
        return np.concatenate([box * (2.0 * u[:base] - 1.0), [2.0 * math.pi * u[base] - math.pi]])

    return circle_bundle(f"flat_disco_{n}_{p}", n, p, flat, domain_fn, sampler,
                         {'box': box}, True)
