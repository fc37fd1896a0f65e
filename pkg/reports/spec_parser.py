#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
流形描述文件解析
JSON 文本 → ManifoldSpec（逐字段校验，出错时给出 JSON 路径），
再由 ManifoldSpec 构造宿主与结构。
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from hosts.builtins import builtin_disc_bundle, builtin_flat_disco
from hosts.lie_algebra import LieAlgebraData
from hosts.patch import PatchGeometry
from structures.acm import AcmStructure, standard_structure
from structures.deformations import KahlerFactor, product_patch, product_with_kahler
from structures.quaternionic import SpnTriple, build_weighted_heisenberg
from tensors.scalar import ScalarContext, ScalarKind, parse_float
from utils.errors import PreconditionError, SpecError
from utils.logger import get_logger

logger = get_logger()

KINDS = ('lie_algebra', 'patch_builtin', 'product')
BUILTINS = ('disc_bundle', 'flat_disco', 'heisenberg')
SCALARS = ('rational', 'float')


@dataclass
class StructureSpec:
    name: str
    phi: list
    xi: list
    eta: list


@dataclass
class ManifoldSpec:
    """已校验的流形描述"""
    kind: str
    scalars: str = 'rational'
    name: str = ''
    dim: int = 0
    brackets: List[tuple] = field(default_factory=list)
    metric: Optional[list] = None
    labels: Optional[List[str]] = None
    structures: List[StructureSpec] = field(default_factory=list)
    builtin: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict)
    points: Optional[int] = None
    seed: Optional[int] = None
    factors: List['ManifoldSpec'] = field(default_factory=list)
    kahler: Optional[Dict[str, Any]] = None
    raw: Dict[str, Any] = field(default_factory=dict)

    @property
    def kind_of_scalars(self) -> ScalarKind:
        return ScalarKind.from_name(self.scalars)

    def to_dict(self) -> Dict[str, Any]:
        """回显原始描述"""
        return dict(self.raw)


# ---------------------------------------------------------------------- 字段校验

def _require(obj: Dict[str, Any], key: str, path: str) -> Any:
    if key not in obj:
        raise SpecError(f"缺少字段 {key}", path)
    return obj[key]


def _int(value: Any, path: str, minimum: Optional[int] = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecError(f"应为整数，实际 {value!r}", path)
    if minimum is not None and value < minimum:
        raise SpecError(f"应 ≥ {minimum}，实际 {value}", path)
    return value


def _scalar(value: Any, ctx: ScalarContext, path: str) -> Any:
    try:
        return ctx.coerce(value)
    except (ValueError, TypeError) as e:
        raise SpecError(f"非法数值: {e}", path) from e
    except Exception as e:
        raise SpecError(str(e), path) from e


def _vector(value: Any, dim: int, ctx: ScalarContext, path: str) -> list:
    if not isinstance(value, list) or len(value) != dim:
        raise SpecError(f"应为长度 {dim} 的数组", path)
    return [_scalar(v, ctx, f"{path}[{i}]") for i, v in enumerate(value)]


def _matrix(value: Any, dim: int, ctx: ScalarContext, path: str) -> list:
    if not isinstance(value, list) or len(value) != dim:
        raise SpecError(f"应为 {dim}×{dim} 矩阵", path)
    return [_vector(row, dim, ctx, f"{path}[{i}]") for i, row in enumerate(value)]


def _context(scalars: str) -> ScalarContext:
    return ScalarContext(ScalarKind.from_name(scalars))


# ---------------------------------------------------------------------- 各类描述

def _parse_lie(obj: Dict[str, Any], spec: ManifoldSpec, path: str):
    ctx = _context(spec.scalars)
    dim = _int(_require(obj, 'dim', path), f"{path}.dim", 1)
    spec.dim = dim
    entries = obj.get('brackets', [])
    if not isinstance(entries, list):
        raise SpecError("brackets 应为数组", f"{path}.brackets")
    for n, entry in enumerate(entries):
        p = f"{path}.brackets[{n}]"
        if not isinstance(entry, list) or len(entry) != 4:
            raise SpecError("括号条目应为 [i, j, k, value]", p)
        i, j, k = (_int(entry[a], f"{p}[{a}]", 0) for a in range(3))
        for a, idx in enumerate((i, j, k)):
            if idx >= dim:
                raise SpecError(f"下标 {idx} 超出维数 {dim}", f"{p}[{a}]")
        value = _scalar(entry[3], ctx, f"{p}[3]")
        if i == j and value != 0:
            raise SpecError("i = j 的括号条目必须为零（反对称）", p)
        spec.brackets.append((i, j, k, value))
    if obj.get('metric') is not None:
        metric = _matrix(obj['metric'], dim, ctx, f"{path}.metric")
        for a in range(dim):
            for b in range(a + 1, dim):
                if metric[a][b] != metric[b][a]:
                    raise SpecError("度量矩阵不对称", f"{path}.metric[{a}][{b}]")
        spec.metric = metric
    if obj.get('labels') is not None:
        labels = obj['labels']
        if not isinstance(labels, list) or len(labels) != dim or not all(isinstance(l, str) for l in labels):
            raise SpecError(f"labels 应为 {dim} 个字符串", f"{path}.labels")
        spec.labels = list(labels)
    blocks = obj.get('structures', [])
    if not isinstance(blocks, list):
        raise SpecError("structures 应为数组", f"{path}.structures")
    for n, block in enumerate(blocks):
        p = f"{path}.structures[{n}]"
        if not isinstance(block, dict):
            raise SpecError("结构块应为对象", p)
        spec.structures.append(StructureSpec(
            str(block.get('name', f"structure{n}")),
            _matrix(_require(block, 'phi', p), dim, ctx, f"{p}.phi"),
            _vector(_require(block, 'xi', p), dim, ctx, f"{p}.xi"),
            _vector(_require(block, 'eta', p), dim, ctx, f"{p}.eta"),
        ))


def _parse_builtin(obj: Dict[str, Any], spec: ManifoldSpec, path: str):
    name = _require(obj, 'builtin', path)
    if name not in BUILTINS:
        raise SpecError(f"未知的内置例子 {name!r}，可选 {', '.join(BUILTINS)}", f"{path}.builtin")
    spec.builtin = name
    params = obj.get('params', {})
    if not isinstance(params, dict):
        raise SpecError("params 应为对象", f"{path}.params")
    pp = f"{path}.params"
    if name == 'heisenberg':
        weights = _require(params, 'weights', pp)
        if not isinstance(weights, list) or not weights:
            raise SpecError("weights 应为非空数组", f"{pp}.weights")
        ctx = _context(spec.scalars)
        spec.params['weights'] = [_scalar(w, ctx, f"{pp}.weights[{i}]") for i, w in enumerate(weights)]
        spec.dim = 4 * len(weights) + 1
        return
    spec.scalars = 'float'
    if name == 'disc_bundle':
        try:
            c = parse_float(_require(params, 'c', pp))
        except ValueError as e:
            raise SpecError(str(e), f"{pp}.c") from e
        if not c < 0:
            raise SpecError(f"圆盘丛要求全纯截面曲率 c < 0，实际 {c}", f"{pp}.c")
        n = _int(params.get('n', 1), f"{pp}.n", 1)
        p = _int(params.get('p', n), f"{pp}.p", 0)
        if p > n:
            raise SpecError(f"要求 p ≤ n，实际 n={n}, p={p}", f"{pp}.p")
        spec.params.update(c=c, n=n, p=p, twisted=bool(params.get('twisted', True)))
    else:
        n = _int(params.get('n', 1), f"{pp}.n", 1)
        p = _int(params.get('p', 1), f"{pp}.p", 1)
        if p > n:
            raise SpecError(f"要求 p ≤ n，实际 n={n}, p={p}", f"{pp}.p")
        spec.params.update(n=n, p=p)
    spec.dim = 4 * spec.params['n'] + 1
    if 'points' in obj:
        spec.points = _int(obj['points'], f"{path}.points", 1)
    if 'seed' in obj:
        spec.seed = _int(obj['seed'], f"{path}.seed", 0)


def _parse_product(obj: Dict[str, Any], spec: ManifoldSpec, path: str):
    factors = _require(obj, 'factors', path)
    if not isinstance(factors, list) or len(factors) != 2:
        raise SpecError("factors 应为两个子描述", f"{path}.factors")
    spec.factors.append(_parse_node(factors[0], f"{path}.factors[0]"))
    second = factors[1]
    p = f"{path}.factors[1]"
    if not isinstance(second, dict) or second.get('kind') != 'kahler':
        raise SpecError("第二个因子必须是 kind = kahler 的平坦 Kähler 因子", p)
    dim = _int(_require(second, 'dim', p), f"{p}.dim", 0)
    if dim % 2:
        raise SpecError("Kähler 因子维数必须为偶数", f"{p}.dim")
    first = spec.factors[0]
    ctx = _context(first.scalars)
    kahler: Dict[str, Any] = {'dim': dim}
    for key in ('metric', 'complex_structure'):
        if second.get(key) is not None:
            kahler[key] = _matrix(second[key], dim, ctx, f"{p}.{key}")
    spec.kahler = kahler
    spec.scalars = first.scalars
    spec.dim = first.dim + dim


def _parse_node(obj: Any, path: str) -> ManifoldSpec:
    if not isinstance(obj, dict):
        raise SpecError("描述应为 JSON 对象", path)
    kind = _require(obj, 'kind', path)
    if kind not in KINDS:
        raise SpecError(f"未知的 kind {kind!r}，可选 {', '.join(KINDS)}", f"{path}.kind")
    scalars = obj.get('scalars', 'rational')
    if scalars not in SCALARS:
        raise SpecError(f"scalars 只能是 {', '.join(SCALARS)}", f"{path}.scalars")
    spec = ManifoldSpec(kind, scalars, str(obj.get('name', '')), raw=obj)
    if kind == 'lie_algebra':
        _parse_lie(obj, spec, path)
    elif kind == 'patch_builtin':
        _parse_builtin(obj, spec, path)
    else:
        _parse_product(obj, spec, path)
    return spec


def parse_spec(text: str) -> ManifoldSpec:
    """
    解析流形描述

    Args:
        text: JSON 文本

    Returns:
        ManifoldSpec

    Raises:
        SpecError: JSON 语法错误或字段不合法（path 为 JSON 路径）
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"JSON 语法错误: {e.msg} (行 {e.lineno}, 列 {e.colno})") from e
    spec = _parse_node(obj, '$')
    logger.debug(f"描述解析完成: kind={spec.kind}, dim={spec.dim}")
    return spec


def builtin_spec(name: str, weights: Optional[List[str]] = None, c: Optional[str] = None,
                 n: Optional[int] = None, p: Optional[int] = None) -> ManifoldSpec:
    """由命令行参数 --builtin/--weights/--c/--n/--p 组装描述"""
    params: Dict[str, Any] = {}
    if weights is not None:
        params['weights'] = list(weights)
    if c is not None:
        params['c'] = c
    if n is not None:
        params['n'] = n
    if p is not None:
        params['p'] = p
    obj = {'kind': 'patch_builtin', 'builtin': name, 'params': params}
    return _parse_node(obj, '$')


# ---------------------------------------------------------------------- 构造

@dataclass
class Manifold:
    """由描述构造出的对象：李代数上的结构，或坐标片及样本点"""
    name: str
    spec: ManifoldSpec
    algebra: Optional[LieAlgebraData] = None
    structures: List[AcmStructure] = field(default_factory=list)
    triple: Optional[SpnTriple] = None
    patch: Optional[PatchGeometry] = None
    points: List[np.ndarray] = field(default_factory=list)

    @property
    def is_patch(self) -> bool:
        return self.patch is not None

    @property
    def heisenberg_weights(self) -> Optional[list]:
        node = self.spec.factors[0] if self.spec.kind == 'product' else self.spec
        if node.builtin == 'heisenberg':
            return node.params['weights']
        return None


def _lie_manifold(spec: ManifoldSpec, tol: float) -> Manifold:
    kind = spec.kind_of_scalars
    ctx = ScalarContext(kind, tol if kind is ScalarKind.FLOAT else 1e-9)
    name = spec.name or f"lie_algebra_{spec.dim}"
    alg = LieAlgebraData.from_entries(spec.dim, spec.brackets, spec.metric, ctx, name, spec.labels)
    if spec.structures:
        structures = [AcmStructure(alg, b.phi, b.xi, b.eta, b.name) for b in spec.structures]
    else:
        structures = [standard_structure(alg, f"{name}/standard")]
    return Manifold(name, spec, alg, structures)


def materialize(spec: ManifoldSpec, tol: float = 1e-8, patch_tol: float = 1e-6,
                points: int = 32, seed: int = 0, disc_radius: float = 0.9,
                flat_box: float = 1.0) -> Manifold:
    """
    由描述构造宿主与结构

    Args:
        spec: 已校验的描述
        tol: 浮点李代数的判零容差
        patch_tol: 坐标片的判零容差
        points / seed: 坐标片采样（描述中给出时优先）
        disc_radius / flat_box: 采样区域

    Raises:
        SpecError: 结构块与宿主不相容
    """
    if spec.kind == 'lie_algebra':
        return _lie_manifold(spec, tol)
    if spec.kind == 'product':
        base = materialize(spec.factors[0], tol, patch_tol, points, seed, disc_radius, flat_box)
        factor = KahlerFactor(spec.kahler['dim'], spec.kahler.get('metric'),
                              spec.kahler.get('complex_structure'), flat_box)
        name = spec.name or f"{base.name}xK{factor.dim}"
        if base.is_patch:
            patch = product_patch(base.patch, factor)
            pts = [np.concatenate([x, np.zeros(factor.dim)]) for x in base.points]
            return Manifold(name, spec, patch=patch, points=pts)
        if base.algebra is not None:
            factor.arrays(base.algebra.ctx)
        structures = []
        for s in base.structures:
            try:
                structures.append(product_with_kahler(s, factor))
            except PreconditionError as e:
                logger.info(f"{s.name}: 不参与乘积 ({e})")
        if base.structures and not structures:
            raise SpecError("第一个因子上没有可作乘积的反拟 Sasakian 结构", "$.factors[0]")
        return Manifold(name, spec, structures[0].host if structures else None, structures)

    if spec.builtin == 'heisenberg':
        alg, triple = build_weighted_heisenberg(spec.params['weights'], _context(spec.scalars))
        return Manifold(spec.name or alg.name, spec, alg, list(triple.structures), triple)
    if spec.builtin == 'disc_bundle':
        patch = builtin_disc_bundle(spec.params['c'], spec.params['n'], spec.params['p'],
                                    disc_radius, spec.params['twisted'])
    else:
        patch = builtin_flat_disco(spec.params['n'], spec.params['p'], flat_box)
    patch.ctx = ScalarContext(ScalarKind.FLOAT, patch_tol)
    count = spec.points if spec.points is not None else points
    sample_seed = spec.seed if spec.seed is not None else seed
    sample = patch.sample_points(count, sample_seed)
    logger.info(f"{patch.name}: 已构造坐标片，{count} 个样本点 (seed={sample_seed})")
    return Manifold(spec.name or patch.name, spec, patch=patch, points=sample)
