#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
规范 JSON 输出
键排序、浮点数固定有效位数、有理数写成 "p/q" 字符串，同一输入逐字节相同
"""

import json
import math
from dataclasses import is_dataclass
from enum import Enum
from fractions import Fraction
from typing import Any

import numpy as np


def to_jsonable(obj: Any) -> Any:
    """
    转换为只含 dict / list / str / int / float / bool / None 的结构

    Fraction 写成 str(Fraction)；numpy 标量与数组展开；带 to_dict 的对象调用 to_dict。
    """
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Enum):
        return to_jsonable(obj.value)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, 'to_dict'):
        return to_jsonable(obj.to_dict())
    if is_dataclass(obj):
        return {f: to_jsonable(getattr(obj, f)) for f in obj.__dataclass_fields__}
    raise TypeError(f"无法序列化的类型: {type(obj).__name__}")


def format_float(value: float, digits: int = 17) -> str:
    """固定有效位数；非有限值写成字符串"""
    if math.isnan(value):
        return '"nan"'
    if math.isinf(value):
        return '"inf"' if value > 0 else '"-inf"'
    if value == 0:
        value = 0.0
    text = format(value, f'.{digits}g')
    if not any(ch in text for ch in '.en'):
        text += '.0'
    return text


def _encode(obj: Any, digits: int, indent: int, level: int) -> str:
    pad = ' ' * (indent * (level + 1))
    end = ' ' * (indent * level)
    if obj is None:
        return 'null'
    if isinstance(obj, bool):
        return 'true' if obj else 'false'
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj, digits)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, list):
        if not obj:
            return '[]'
        items = [_encode(v, digits, indent, level + 1) for v in obj]
        return '[\n' + ',\n'.join(pad + item for item in items) + '\n' + end + ']'
    if isinstance(obj, dict):
        if not obj:
            return '{}'
        items = [f"{json.dumps(k, ensure_ascii=False)}: {_encode(obj[k], digits, indent, level + 1)}"
                 for k in sorted(obj)]
        return '{\n' + ',\n'.join(pad + item for item in items) + '\n' + end + '}'
    raise TypeError(f"无法编码的类型: {type(obj).__name__}")


def dumps(obj: Any, digits: int = 17, indent: int = 2) -> str:
    """规范 JSON 文本（以换行结尾）"""
    return _encode(to_jsonable(obj), digits, indent, 0) + '\n'
