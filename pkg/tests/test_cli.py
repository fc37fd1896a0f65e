#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""命令行入口：子命令、输出与退出码"""

import json

import pytest

from main import build_parser, main


def test_builtin_report_to_file(fresh_config, tmp_path):
    out = tmp_path / 'report.json'
    code = main(['classify', '--builtin', 'heisenberg', '--weights', '1', '--out', str(out)])
    assert code == 0
    data = json.loads(out.read_text(encoding='utf-8'))
    assert data['command'] == 'classify'
    assert data['exit_code'] == 0
    assert data['tool']['name'] == 'aqsverify'
    assert len(data['structures']) == 3


def test_report_to_stdout(fresh_config, capsys):
    assert main(['spectrum', '--builtin', 'heisenberg', '--weights', '1', '2', '--quiet']) == 0
    data = json.loads(capsys.readouterr().out)
    clusters = data['structures'][0]['operators']['spectrum']['eigenvalues']
    assert [c['multiplicity'] for c in clusters] == [4, 4, 1]


def test_spec_file(fresh_config, tmp_path):
    spec = tmp_path / 'abelian.json'
    spec.write_text(json.dumps({'kind': 'lie_algebra', 'name': 'abelian', 'dim': 3}), encoding='utf-8')
    out = tmp_path / 'out.json'
    assert main(['curvature', '--spec', str(spec), '--out', str(out)]) == 0
    data = json.loads(out.read_text(encoding='utf-8'))
    assert data['spec'] == {'kind': 'lie_algebra', 'name': 'abelian', 'dim': 3}


@pytest.mark.parametrize('content', ['{"kind": "torus"}', '{"kind": ', '[]'])
def test_bad_spec_exit_code(fresh_config, tmp_path, content):
    spec = tmp_path / 'bad.json'
    spec.write_text(content, encoding='utf-8')
    assert main(['classify', '--spec', str(spec)]) == 2


def test_missing_spec_file(fresh_config, tmp_path):
    assert main(['classify', '--spec', str(tmp_path / 'missing.json')]) == 2


def test_invalid_tolerance(fresh_config):
    assert main(['classify', '--builtin', 'heisenberg', '--weights', '1', '--tol', '5']) == 2


def test_positive_disc_curvature_is_spec_error(fresh_config):
    assert main(['report', '--builtin', 'disc_bundle', '--c', '1/2']) == 2


def test_invalid_structure_exit_code(fresh_config, tmp_path):
    spec = tmp_path / 'bad_structure.json'
    spec.write_text(json.dumps({
        'kind': 'lie_algebra', 'dim': 3,
        'structures': [{'phi': [[0, 0, 0], [0, 0, 1], [0, 1, 0]], 'xi': [1, 0, 0], 'eta': [1, 0, 0]}],
    }), encoding='utf-8')
    assert main(['classify', '--spec', str(spec), '--out', str(tmp_path / 'r.json')]) == 4


def test_parser_requires_source():
    with pytest.raises(SystemExit):
        build_parser().parse_args(['classify'])
    args = build_parser().parse_args(['decompose', '--builtin', 'flat_disco', '--points', '3'])
    assert args.command == 'decompose' and args.points == 3
