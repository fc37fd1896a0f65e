#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
宿主几何包
李代数（精确）与坐标片（浮点 + 射流）
"""

from .base_host import BaseHost, inverse_field
from .jets import JetScalar, variables, stack_jets, central_differences
from .lie_algebra import LieAlgebraData, FrameChange, jacobi_check, twisted_abelian

__all__ = [
    'BaseHost', 'inverse_field',
    'JetScalar', 'variables', 'stack_jets', 'central_differences',
    'LieAlgebraData', 'FrameChange', 'jacobi_check', 'twisted_abelian',
]
