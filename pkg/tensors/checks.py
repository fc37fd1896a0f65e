#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
恒等式检查记录
谓词不以异常表达否定结果：每一项检查都返回 IdentityCheck，
携带是否通过、最大违背量以及违背最大的分量下标（见证）。
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, Optional, Tuple, Union

import numpy as np

from tensors.frame_tensor import FrameTensor
from tensors.scalar import ScalarContext, max_abs

ArrayLike = Union[FrameTensor, np.ndarray]


@dataclass(frozen=True)
class IdentityCheck:
    """单项检查结果"""
    name: str
    passed: bool
    violation: Any = 0
    witness: Optional[Tuple[int, ...]] = None
    note: str = ''

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> Dict[str, Any]:
        out = {
            'passed': self.passed,
            'max_violation': self.violation,
        }
        if self.witness is not None:
            out['witness'] = list(self.witness)
        if self.note:
            out['note'] = self.note
        return out

    def renamed(self, name: str) -> 'IdentityCheck':
        return IdentityCheck(name, self.passed, self.violation, self.witness, self.note)

    def with_note(self, note: str) -> 'IdentityCheck':
        return IdentityCheck(self.name, self.passed, self.violation, self.witness, note)


def _values(t: ArrayLike) -> np.ndarray:
    return t.components if isinstance(t, FrameTensor) else np.asarray(t)


def _argmax_abs(arr: np.ndarray) -> Optional[Tuple[int, ...]]:
    if arr.size == 0 or arr.ndim == 0:
        return None
    mags = np.vectorize(lambda v: abs(float(v)), otypes=[float])(arr)
    return tuple(int(i) for i in np.unravel_index(int(np.argmax(mags)), arr.shape))


def check_zero(name: str, t: ArrayLike, ctx: ScalarContext,
               scale: Optional[float] = None, note: str = '') -> IdentityCheck:
    """
    检查张量是否为零

    Args:
        name: 检查名
        t: 被检张量（或数组）
        ctx: 标量上下文（精确模式要求严格为零）
        scale: 浮点阈值的尺度，默认取 1
        note: 附注

    Returns:
        IdentityCheck，见证为最大违背分量的下标
    """
    arr = _values(t)
    violation = max_abs(arr)
    passed = ctx.is_zero(violation, scale or 0.0)
    witness = None if passed else _argmax_abs(arr)
    if isinstance(violation, Fraction) or ctx.exact:
        violation = Fraction(violation)
    else:
        violation = float(violation)
    return IdentityCheck(name, bool(passed), violation, witness, note)


def check_equal(name: str, a: ArrayLike, b: ArrayLike, ctx: ScalarContext,
                note: str = '') -> IdentityCheck:
    """检查两个张量相等；浮点阈值尺度取两侧的最大分量模"""
    va, vb = _values(a), _values(b)
    if va.shape != vb.shape:
        return IdentityCheck(name, False, float('inf'), None, f"形状不一致 {va.shape} vs {vb.shape}")
    scale = 0.0 if ctx.exact else max(float(max_abs(va)), float(max_abs(vb)))
    return check_zero(name, va - vb, ctx, scale, note)


def check_true(name: str, condition: bool, note: str = '') -> IdentityCheck:
    """把纯布尔条件包装为检查记录"""
    return IdentityCheck(name, bool(condition), 0 if condition else 1, None, note)


def check_all(name: str, checks: Iterable[IdentityCheck], note: str = '') -> IdentityCheck:
    """合取：全部通过才通过；违背量与见证取最坏的一项"""
    checks = list(checks)
    if not checks:
        return IdentityCheck(name, True, 0, None, note)
    worst = max(checks, key=lambda c: (not c.passed, float(c.violation)))
    failed = [c.name for c in checks if not c.passed]
    if failed and not note:
        note = '未通过: ' + ', '.join(failed)
    return IdentityCheck(name, not failed, worst.violation, worst.witness, note)


@dataclass
class CheckTable:
    """有序的检查表，报告里按插入顺序输出"""
    checks: Dict[str, IdentityCheck] = field(default_factory=dict)

    def add(self, check: IdentityCheck) -> IdentityCheck:
        self.checks[check.name] = check
        return check

    def __getitem__(self, name: str) -> IdentityCheck:
        return self.checks[name]

    def __contains__(self, name: str) -> bool:
        return name in self.checks

    def __iter__(self):
        return iter(self.checks.values())

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failures(self):
        return [c for c in self.checks.values() if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {name: c.to_dict() for name, c in self.checks.items()}
