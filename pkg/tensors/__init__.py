#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
张量代数包
标量后端、标架张量、线性代数与检查记录
"""

from .scalar import ScalarKind, ScalarContext, parse_fraction, parse_float
from .frame_tensor import (
    FrameTensor, UPPER, LOWER, einsum, tensor_arith, antisymmetrize, wedge,
)
from .linalg import matrix_rank, nullspace, inverse, sym_eigen, SymSpectrum
from .checks import IdentityCheck, CheckTable, check_zero, check_equal, check_all

__all__ = [
    'ScalarKind', 'ScalarContext', 'parse_fraction', 'parse_float',
    'FrameTensor', 'UPPER', 'LOWER', 'einsum', 'tensor_arith', 'antisymmetrize', 'wedge',
    'matrix_rank', 'nullspace', 'inverse', 'sym_eigen', 'SymSpectrum',
    'IdentityCheck', 'CheckTable', 'check_zero', 'check_equal', 'check_all',
]
