#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
线性代数模块
精确模式：无分数 Bareiss 消元求秩/行列式，Fraction 上的 Gauss-Jordan 求逆与零空间，
以及字典行存储的稀疏精确求解器；
浮点模式：全主元消元求秩，循环 Jacobi 旋转求对称矩阵谱。
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from tensors.frame_tensor import FrameTensor, UPPER, LOWER, einsum_arrays
from tensors.scalar import ScalarContext, ScalarKind, exact_zeros, to_float_array
from utils.errors import (
    DegenerateError, DimensionMismatchError, NotSymmetricError, InvariantViolation,
)
from utils.logger import get_logger

logger = get_logger()

MatrixLike = Union[FrameTensor, np.ndarray]


def as_matrix(m: MatrixLike) -> np.ndarray:
    """取出二维分量数组"""
    arr = m.components if isinstance(m, FrameTensor) else np.asarray(m)
    if arr.ndim != 2:
        raise DimensionMismatchError(f"需要二槽位张量，实际阶数 {arr.ndim}")
    return arr


def _is_exact(arr: np.ndarray) -> bool:
    return arr.dtype == object


def _integer_rows(arr: np.ndarray) -> List[List[int]]:
    """每行乘以分母最小公倍数，化为整数矩阵（不改变秩）"""
    rows = []
    for row in arr:
        den = 1
        for v in row:
            den = den * Fraction(v).denominator // math.gcd(den, Fraction(v).denominator)
        rows.append([int(Fraction(v) * den) for v in row])
    return rows


def bareiss_rank(arr: np.ndarray) -> int:
    """无分数 Gauss 消元（Bareiss）求精确秩"""
    m = _integer_rows(arr)
    n_rows = len(m)
    n_cols = len(m[0]) if n_rows else 0
    rank = 0
    prev = 1
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, n_rows):
            for c in range(col + 1, n_cols):
                m[r][c] = (m[r][c] * p - m[r][col] * m[rank][c]) // prev
            m[r][col] = 0
        prev = p
        rank += 1
        if rank == n_rows:
            break
    return rank


def float_rank(arr: np.ndarray, tol: float = 1e-9) -> int:
    """全主元消元；主元小于 tol × 最大主元时停止计数"""
    a = np.array(arr, dtype=float)
    if a.size == 0:
        return 0
    rank = 0
    largest = None
    rows, cols = a.shape
    for _ in range(min(rows, cols)):
        sub = np.abs(a[rank:, rank:])
        idx = np.unravel_index(np.argmax(sub), sub.shape)
        pivot = sub[idx]
        if largest is None:
            largest = pivot
        if largest == 0 or pivot <= tol * largest:
            break
        r, c = idx[0] + rank, idx[1] + rank
        a[[rank, r], :] = a[[r, rank], :]
        a[:, [rank, c]] = a[:, [c, rank]]
        factors = a[rank + 1:, rank] / a[rank, rank]
        a[rank + 1:, rank:] -= np.outer(factors, a[rank, rank:])
        rank += 1
    return rank


def matrix_rank(m: MatrixLike, ctx: Optional[ScalarContext] = None) -> int:
    """
    二槽位张量的秩

    Args:
        m: 矩阵或二槽位张量
        ctx: 浮点模式下提供容差

    Returns:
        精确模式为 Bareiss 消元的秩；浮点模式为超过 tol × 最大主元的主元数
    """
    arr = as_matrix(m)
    if arr.size == 0:
        return 0
    if _is_exact(arr):
        return bareiss_rank(arr)
    tol = ctx.tol if ctx is not None else 1e-9
    return float_rank(arr, tol)


def determinant(m: MatrixLike):
    arr = as_matrix(m)
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise DimensionMismatchError("行列式需要方阵")
    if not _is_exact(arr):
        return float(np.linalg.det(arr)) if n else 1.0
    a = [[Fraction(v) for v in row] for row in arr]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def leading_minors(m: MatrixLike) -> List:
    arr = as_matrix(m)
    return [determinant(arr[:k, :k]) for k in range(1, arr.shape[0] + 1)]


def is_positive_definite(m: MatrixLike) -> bool:
    """精确模式用顺序主子式；浮点模式用 Cholesky"""
    arr = as_matrix(m)
    if _is_exact(arr):
        return all(v > 0 for v in leading_minors(arr))
    try:
        np.linalg.cholesky(arr)
        return True
    except np.linalg.LinAlgError:
        return False


def row_reduce(arr: np.ndarray) -> Tuple[List[List[Fraction]], List[int]]:
    """Fraction 上的简化行阶梯形，返回 (矩阵行, 主元列)"""
    a = [[Fraction(v) for v in row] for row in arr]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def nullspace(m: MatrixLike, ctx: Optional[ScalarContext] = None) -> np.ndarray:
    """
    零空间基，按列返回 (n, k) 数组

    精确模式由简化行阶梯形读出；浮点模式用 SVD，奇异值阈值 tol × max(1, 最大奇异值)。
    """
    arr = as_matrix(m)
    n = arr.shape[1]
    if _is_exact(arr):
        reduced, pivots = row_reduce(arr) if arr.shape[0] else ([], [])
        free = [c for c in range(n) if c not in pivots]
        basis = exact_zeros((n, len(free)))
        for k, fcol in enumerate(free):
            basis[fcol, k] = Fraction(1)
            for row, pcol in zip(reduced, pivots):
                basis[pcol, k] = -row[fcol]
        return basis
    tol = ctx.tol if ctx is not None else 1e-9
    if arr.shape[0] == 0:
        return np.eye(n)
    _, s, vt = np.linalg.svd(np.asarray(arr, dtype=float))
    threshold = tol * max(1.0, float(s[0]) if s.size else 0.0)
    rank = int(np.sum(s > threshold))
    return vt[rank:].T.copy()


def inverse(m: MatrixLike) -> np.ndarray:
    arr = as_matrix(m)
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise DimensionMismatchError("求逆需要方阵")
    if not _is_exact(arr):
        try:
            inv = np.linalg.inv(arr)
        except np.linalg.LinAlgError as e:
            raise DegenerateError(f"矩阵奇异: {e}") from e
        if not np.all(np.isfinite(inv)):
            raise DegenerateError("矩阵奇异: 逆含非有限值")
        return inv
    augmented = np.concatenate([arr, FrameTensor.identity(n, ScalarKind.EXACT).components], axis=1)
    reduced, pivots = row_reduce(augmented)
    if pivots[:n] != list(range(n)):
        raise DegenerateError("矩阵奇异")
    out = exact_zeros((n, n))
    for i in range(n):
        for j in range(n):
            out[i, j] = reduced[i][n + j]
    return out


def solve(m: MatrixLike, rhs: np.ndarray) -> np.ndarray:
    """方阵线性方程组 m x = rhs"""
    arr = as_matrix(m)
    inv = inverse(arr)
    rhs = np.asarray(rhs, dtype=object if _is_exact(arr) else float)
    return einsum_arrays('ij,j->i', inv, rhs)


# ---------------------------------------------------------------------- 稀疏精确求解

@dataclass
class SparseSolution:
    """稀疏线性系统的解：特解（自由变量取零）、秩、自由变量、是否相容"""
    values: Dict[int, Fraction]
    rank: int
    free: List[int]
    consistent: bool

    def value(self, var: int) -> Fraction:
        return self.values.get(var, Fraction(0))


def solve_sparse_exact(rows: Sequence[Dict[int, Fraction]], rhs: Sequence[Fraction],
                       n_vars: int) -> SparseSolution:
    """
    以字典行存储的精确 Gauss-Jordan 消元

    Args:
        rows: 每个方程的系数 {变量下标: 系数}
        rhs: 右端项
        n_vars: 变量总数

    Returns:
        SparseSolution；不相容时 consistent 为 False
    """
    pivot_rows: Dict[int, Tuple[Dict[int, Fraction], Fraction]] = {}
    consistent = True
    for coeffs, b in zip(rows, rhs):
        row = {k: Fraction(v) for k, v in coeffs.items() if v != 0}
        b = Fraction(b)
        for var, (prow, pb) in pivot_rows.items():
            f = row.get(var)
            if f:
                for k, v in prow.items():
                    nv = row.get(k, Fraction(0)) - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
                b -= f * pb
        if not row:
            if b != 0:
                consistent = False
            continue
        var = min(row)
        inv = 1 / row[var]
        row = {k: v * inv for k, v in row.items()}
        b *= inv
        # 回代：从已有主元行中消去新主元
        for other, (prow, pb) in list(pivot_rows.items()):
            f = prow.get(var)
            if f:
                new = dict(prow)
                for k, v in row.items():
                    nv = new.get(k, Fraction(0)) - f * v
                    if nv:
                        new[k] = nv
                    else:
                        new.pop(k, None)
                pivot_rows[other] = (new, pb - f * b)
        pivot_rows[var] = (row, b)
    values = {var: pb for var, (_, pb) in pivot_rows.items() if pb != 0}
    free = [v for v in range(n_vars) if v not in pivot_rows]
    return SparseSolution(values, len(pivot_rows), free, consistent)


# ---------------------------------------------------------------------- 对称谱

@dataclass(frozen=True)
class SymSpectrum:
    """
    对称（或对度量自伴）算子的实谱

    clusters 为升序的 (特征值, 重数)；eigenvalues 为未聚类的升序特征值；
    eigenvectors 的第 k 列对应 eigenvalues[k]。
    """
    clusters: Tuple[Tuple[float, int], ...]
    cluster_tol: float
    eigenvalues: Tuple[float, ...] = ()
    eigenvectors: Optional[np.ndarray] = field(default=None, compare=False)
    sweeps: int = 0

    @property
    def dim(self) -> int:
        return sum(m for _, m in self.clusters)

    @property
    def distinct(self) -> List[float]:
        return [v for v, _ in self.clusters]

    def multiplicity(self, value: float, tol: Optional[float] = None) -> int:
        tol = self.cluster_tol if tol is None else tol
        return sum(m for v, m in self.clusters if abs(v - value) <= tol)

    def matches(self, expected: Dict[float, int], tol: float = 1e-10) -> bool:
        """与期望的 {特征值: 重数} 逐项比较"""
        if len(expected) != len(self.clusters):
            return False
        return all(self.multiplicity(v, tol) == m for v, m in expected.items())

    def to_dict(self) -> Dict:
        return {
            'eigenvalues': [{'value': v, 'multiplicity': m} for v, m in self.clusters],
            'cluster_tol': self.cluster_tol,
        }


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int):
    apq = a[p, q]
    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    sign = 1.0 if theta >= 0 else -1.0
    t = sign / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    col_p = a[:, p].copy()
    col_q = a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    row_p = a[p, :].copy()
    row_q = a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    a[p, q] = a[q, p] = 0.0
    vp = v[:, p].copy()
    vq = v[:, q].copy()
    v[:, p] = c * vp - s * vq
    v[:, q] = s * vp + c * vq


def cluster_values(values: Sequence[float], tol: float) -> Tuple[Tuple[float, int], ...]:
    """升序值按绝对容差聚类，代表值取类内均值"""
    clusters: List[List[float]] = []
    for val in sorted(values):
        if clusters and abs(val - clusters[-1][0]) <= tol:
            clusters[-1].append(val)
        else:
            clusters.append([val])
    return tuple((float(np.mean(c)), len(c)) for c in clusters)


def sym_eigen(m: MatrixLike, metric: Optional[MatrixLike] = None,
              offdiag_tol: float = 1e-12, cluster_tol: float = 1e-8,
              max_sweeps: int = 100, sym_tol: float = 1e-9) -> SymSpectrum:
    """
    循环 Jacobi 旋转求实对称谱

    Args:
        m: 二槽位张量；若为 (1,1) 且给出 metric，则按 g-自伴算子处理
        metric: 非正交标架下的度量（经 Cholesky 变换为对称矩阵）
        offdiag_tol: 非对角元收敛阈值（相对矩阵尺度）
        cluster_tol: 特征值聚类的绝对容差
        max_sweeps: 最大扫描轮数
        sym_tol: 对称性检查容差

    Returns:
        SymSpectrum

    Raises:
        NotSymmetricError: 输入不对称（附最大非对称量）
    """
    a = to_float_array(as_matrix(m)).copy()
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionMismatchError("谱分解需要方阵")
    back = None
    is_operator = isinstance(m, FrameTensor) and m.signature == (UPPER, LOWER)
    if metric is not None and is_operator:
        g = to_float_array(as_matrix(metric))
        try:
            chol = np.linalg.cholesky(g)
        except np.linalg.LinAlgError as e:
            raise DegenerateError(f"度量不是正定的: {e}") from e
        # g = L Lᵀ；S = Lᵀ M L⁻ᵀ 对称，特征向量 v = L⁻ᵀ w
        inv_t = np.linalg.inv(chol).T
        a = chol.T @ a @ inv_t
        back = inv_t
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    asym = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if asym > sym_tol * max(1.0, scale):
        raise NotSymmetricError(f"矩阵不对称，最大非对称量 {asym:.3e}", asym)
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    threshold = offdiag_tol * max(1.0, scale)
    sweeps = 0
    converged = n <= 1
    while not converged and sweeps < max_sweeps:
        off = np.abs(a - np.diag(np.diag(a)))
        if float(np.max(off)) <= threshold:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) > threshold * 1e-3:
                    _jacobi_rotate(a, v, p, q)
        sweeps += 1
    if not converged:
        off = np.abs(a - np.diag(np.diag(a)))
        if float(np.max(off)) > threshold:
            logger.warning(f"Jacobi 迭代 {max_sweeps} 轮未收敛，残余非对角元 {float(np.max(off)):.3e}")
    values = np.diag(a).copy()
    order = np.argsort(values)
    values = values[order]
    vectors = v[:, order]
    if back is not None:
        vectors = back @ vectors
    logger.debug(f"Jacobi 收敛: dim={n}, sweeps={sweeps}")
    return SymSpectrum(cluster_values(values, cluster_tol), cluster_tol,
                       tuple(float(x) for x in values), vectors, sweeps)


def exact_eigenspaces(m: FrameTensor, spectrum: SymSpectrum,
                      max_denominator: int = 10 ** 6) -> List[Tuple[Fraction, np.ndarray]]:
    """
    精确特征空间：把浮点谱舍入为有理数，再用精确零空间验证

    Returns:
        [(精确特征值, 特征向量基 (n, k))]，按特征值升序

    Raises:
        InvariantViolation: 舍入后的值不是精确特征值或维数与重数不符
    """
    arr = as_matrix(m)
    if not _is_exact(arr):
        raise InvariantViolation("精确特征空间只适用于精确张量")
    n = arr.shape[0]
    out = []
    for value, mult in spectrum.clusters:
        exact_value = Fraction(value).limit_denominator(max_denominator)
        shifted = arr.copy()
        for i in range(n):
            shifted[i, i] = shifted[i, i] - exact_value
        basis = nullspace(shifted)
        if basis.shape[1] != mult:
            raise InvariantViolation(
                f"特征值 {exact_value} 的精确特征空间维数 {basis.shape[1]} 与重数 {mult} 不符")
        out.append((exact_value, basis))
    return out
