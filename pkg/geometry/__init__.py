#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
标架几何包
联络、曲率与微分形式
"""

from .connection import ConnectionData, levi_civita, covariant_derivative, lie_derivative, along
from .curvature import CurvatureData, curvature, sectional, riemann_apply
from .forms import exterior_derivative, d_invariant_form, exterior_derivative_via_connection, interior

__all__ = [
    'ConnectionData', 'levi_civita', 'covariant_derivative', 'lie_derivative', 'along',
    'CurvatureData', 'curvature', 'sectional', 'riemann_apply',
    'exterior_derivative', 'd_invariant_form', 'exterior_derivative_via_connection', 'interior',
]
