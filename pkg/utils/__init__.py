#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
工具模块
日志单例与异常层次
"""

from .logger import Logger, get_logger, get_data_dir
from .errors import (
    AqsError, DimensionMismatchError, SlotVarianceError, ScalarKindError, DegenerateError,
    NotSymmetricError, NotAlternatingError, JetOrderError, DomainError, PreconditionError,
    RouteDisagreementError, InvariantViolation, SpecError,
)

__all__ = [
    'Logger',
    'get_logger',
    'get_data_dir',
    'AqsError',
    'DimensionMismatchError',
    'SlotVarianceError',
    'ScalarKindError',
    'DegenerateError',
    'NotSymmetricError',
    'NotAlternatingError',
    'JetOrderError',
    'DomainError',
    'PreconditionError',
    'RouteDisagreementError',
    'InvariantViolation',
    'SpecError',
]
