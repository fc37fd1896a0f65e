#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
报告包
描述解析、报告编排与规范 JSON 输出
"""

from .serializer import dumps, to_jsonable, format_float
from .spec_parser import ManifoldSpec, StructureSpec, Manifold, parse_spec, builtin_spec, materialize
from .report_runner import ExitCode, Report, ReportOptions, ReportRunner, run_report, COMMANDS

__all__ = [
    'dumps', 'to_jsonable', 'format_float',
    'ManifoldSpec', 'StructureSpec', 'Manifold', 'parse_spec', 'builtin_spec', 'materialize',
    'ExitCode', 'Report', 'ReportOptions', 'ReportRunner', 'run_report', 'COMMANDS',
]
