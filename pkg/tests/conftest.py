#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
测试公共配置
数据目录指向临时目录；注册 hypothesis 配置；共享的代数与坐标片夹具
"""

import os
import sys
import tempfile

# 日志与配置在导入时创建数据目录，必须先于项目模块设置
os.environ.setdefault('AQSVERIFY_HOME', tempfile.mkdtemp(prefix='aqsverify-test-'))
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import pytest
from hypothesis import HealthCheck, settings

from hosts.builtins import builtin_disc_bundle, builtin_flat_disco
from hosts.lie_algebra import LieAlgebraData
from structures.acm import standard_structure
from structures.quaternionic import build_weighted_heisenberg

settings.register_profile('fast', max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('ci', max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'fast'))


@pytest.fixture(scope='session')
def heisenberg_1():
    """权重 (1)，五维"""
    return build_weighted_heisenberg(['1'])


@pytest.fixture(scope='session')
def heisenberg_11():
    return build_weighted_heisenberg(['1', '1'])


@pytest.fixture(scope='session')
def heisenberg_12():
    return build_weighted_heisenberg(['1', '2'])


@pytest.fixture(scope='session')
def heisenberg_10():
    return build_weighted_heisenberg(['1', '0'])


@pytest.fixture(scope='session')
def abelian_structure():
    return standard_structure(LieAlgebraData.abelian(5), 'abelian/standard')


@pytest.fixture(scope='session')
def disc_patch():
    """c = −4 的圆盘丛"""
    return builtin_disc_bundle(-4.0)


@pytest.fixture(scope='session')
def disc_points(disc_patch):
    return disc_patch.sample_points(6, seed=0)


@pytest.fixture(scope='session')
def flat_patch():
    return builtin_flat_disco(1, 1)


@pytest.fixture
def fresh_config(tmp_path, monkeypatch):
    """每个测试一个独立的 Config 单例与数据目录"""
    from config import Config
    monkeypatch.setenv('AQSVERIFY_HOME', str(tmp_path))
    monkeypatch.setattr(Config, '_instance', None)
    config = Config()
    yield config
    Config._instance = None
