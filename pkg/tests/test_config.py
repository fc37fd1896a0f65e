#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""配置加载、校验回退与原子写回"""

import json
from dataclasses import fields

import pytest

from config import APP_VERSION, SamplingConfig, ToleranceConfig
from reports.report_runner import ReportOptions


def test_defaults_without_file(fresh_config, tmp_path):
    assert fresh_config.config_file == tmp_path / 'settings.json'
    assert fresh_config.tolerance_config == ToleranceConfig()
    assert fresh_config.sampling_config.points == 32
    assert fresh_config.report_config.float_digits == 17


def test_save_keeps_unknown_keys(fresh_config):
    path = fresh_config.config_file
    path.write_text(json.dumps({'SAMPLING_CONFIG': {'points': 8, 'legacy': 1}, 'extra': True}),
                    encoding='utf-8')
    assert fresh_config.load_config()
    assert fresh_config.sampling_config.points == 8
    assert fresh_config.save_config()
    data = json.loads(path.read_text(encoding='utf-8'))
    assert data['config_version'] == APP_VERSION
    assert data['extra'] is True
    assert data['SAMPLING_CONFIG']['legacy'] == 1
    assert data['SAMPLING_CONFIG']['points'] == 8
    assert set(data) >= {'TOLERANCE_CONFIG', 'REPORT_CONFIG', 'LOG_CONFIG'}
    assert not path.with_suffix('.tmp').exists()


def test_invalid_section_falls_back(fresh_config, tmp_path):
    path = tmp_path / 'custom.json'
    path.write_text(json.dumps({
        'SAMPLING_CONFIG': {'points': 0},
        'REPORT_CONFIG': {'float_digits': 12},
    }), encoding='utf-8')
    assert not fresh_config.load_config(path)
    assert fresh_config.sampling_config == SamplingConfig()
    assert fresh_config.report_config.float_digits == 12
    assert fresh_config.config_file == path


def test_corrupt_file_uses_defaults(fresh_config):
    fresh_config.config_file.write_text('{not json', encoding='utf-8')
    assert not fresh_config.load_config()
    assert fresh_config.tolerance_config == ToleranceConfig()


def test_command_line_override(fresh_config):
    fresh_config.override(tol=1e-10, points=5, seed=7)
    assert fresh_config.tolerance_config.classify == 1e-10
    assert (fresh_config.sampling_config.points, fresh_config.sampling_config.seed) == (5, 7)
    with pytest.raises(ValueError):
        fresh_config.override(tol=2.0)


@pytest.mark.parametrize('section, values', [
    (ToleranceConfig, {'eigen_cluster': 0.0}),
    (ToleranceConfig, {'jacobi_max_sweeps': 0}),
    (SamplingConfig, {'disc_radius': 1.0}),
    (SamplingConfig, {'seed': -1}),
])
def test_section_validation(section, values):
    assert section().validate()
    assert not section(**values).validate()


def test_every_tolerance_reaches_report_options(fresh_config, tmp_path):
    path = tmp_path / 'tight.json'
    path.write_text(json.dumps({'TOLERANCE_CONFIG': {
        'classify': 1e-10, 'patch': 1e-7, 'eigen_cluster': 1e-9,
        'jacobi_offdiag': 1e-13, 'jacobi_max_sweeps': 50,
    }}), encoding='utf-8')
    assert fresh_config.load_config(path)
    options = ReportOptions.from_config(fresh_config, 'spectrum')
    assert (options.tol, options.patch_tol, options.cluster_tol) == (1e-10, 1e-7, 1e-9)
    assert (options.offdiag_tol, options.max_sweeps) == (1e-13, 50)
    assert {f.name for f in fields(ToleranceConfig)} == {
        'classify', 'patch', 'eigen_cluster', 'jacobi_offdiag', 'jacobi_max_sweeps'}
