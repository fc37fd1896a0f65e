#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
异常定义模块
所有模块共用的异常层级；谓词的否定结果不抛异常，而是以检查记录返回
"""

from typing import Optional


class AqsError(Exception):
    """本项目所有异常的基类"""


class DimensionMismatchError(AqsError):
    """维数或形状不一致"""


class SlotVarianceError(AqsError):
    """张量槽位的上下标类型不符合运算要求"""


class ScalarKindError(AqsError):
    """精确有理数与浮点数混用"""


class DegenerateError(AqsError):
    """退化输入：奇异度量、线性相关的向量对、奇异矩阵"""


class NotSymmetricError(AqsError):
    """输入矩阵不对称，附带最大非对称量"""

    def __init__(self, message: str, asymmetry: float = 0.0):
        super().__init__(message)
        self.asymmetry = asymmetry


class NotAlternatingError(AqsError):
    """形式不是交错的"""


class JetOrderError(AqsError):
    """请求的导数阶数超过了射流所记录的阶数"""


class DomainError(AqsError):
    """点不在坐标卡的定义域内"""


class PreconditionError(AqsError):
    """运算的前置条件不满足"""


class RouteDisagreementError(AqsError):
    """同一对象的两条独立计算路线结果不一致（宿主几何有缺陷）"""


class InvariantViolation(AqsError):
    """事后逻辑一致性检查失败"""


class SpecError(AqsError):
    """流形描述文件不合法，path 为出错字段的 JSON 路径"""

    def __init__(self, message: str, path: Optional[str] = None):
        self.path = path or '$'
        super().__init__(f"{self.path}: {message}")
