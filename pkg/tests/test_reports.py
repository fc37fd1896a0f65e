#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""描述解析、规范 JSON 输出与报告退出码"""

import json
from fractions import Fraction

import pytest

from reports.report_runner import ExitCode, ReportOptions, run_report
from reports.serializer import dumps, format_float
from reports.spec_parser import builtin_spec, materialize, parse_spec
from utils.errors import SpecError

ABELIAN = {'kind': 'lie_algebra', 'name': 'abelian', 'dim': 5}

JACOBI_BROKEN = {
    'kind': 'lie_algebra', 'name': 'broken', 'dim': 3,
    'brackets': [[0, 1, 2, 1], [0, 2, 0, 1]],
}

BAD_STRUCTURE = {
    'kind': 'lie_algebra', 'name': 'flat3', 'dim': 3,
    'structures': [{
        'name': 'zero_phi',
        'phi': [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
        'xi': [1, 0, 0],
        'eta': [1, 0, 0],
    }],
}


def spec_of(obj):
    return parse_spec(json.dumps(obj))


@pytest.mark.parametrize('obj, path', [
    ({'kind': 'torus'}, '$.kind'),
    ({'kind': 'lie_algebra', 'dim': 3, 'brackets': [[0, 1, 3, 1]]}, '$.brackets[0][2]'),
    ({'kind': 'lie_algebra', 'dim': 3, 'brackets': [[1, 1, 0, 2]]}, '$.brackets[0]'),
    ({'kind': 'lie_algebra', 'dim': 2, 'metric': [[1, 2], [0, 1]]}, '$.metric[0][1]'),
    ({'kind': 'lie_algebra', 'dim': 3, 'brackets': [[0, 1, 2, 0.5]]}, '$.brackets[0][3]'),
    ({'kind': 'patch_builtin', 'builtin': 'disc_bundle', 'params': {'c': '1/2'}}, '$.params.c'),
    ({'kind': 'patch_builtin', 'builtin': 'heisenberg', 'params': {'weights': []}}, '$.params.weights'),
    ({'kind': 'patch_builtin', 'builtin': 'flat_disco', 'params': {'n': 1, 'p': 0}}, '$.params.p'),
    ({'kind': 'product', 'factors': [ABELIAN, {'kind': 'kahler', 'dim': 3}]}, '$.factors[1].dim'),
])
def test_spec_errors_carry_paths(obj, path):
    with pytest.raises(SpecError) as info:
        spec_of(obj)
    assert info.value.path == path


def test_json_syntax_error():
    with pytest.raises(SpecError, match='JSON'):
        parse_spec('{"kind": ')


def test_builtin_spec_from_arguments():
    spec = builtin_spec('heisenberg', ['1', '1/2'])
    assert spec.dim == 9
    assert spec.params['weights'] == [Fraction(1), Fraction(1, 2)]
    disc = builtin_spec('disc_bundle', c='-4')
    assert disc.scalars == 'float'
    assert disc.params == {'c': -4.0, 'n': 1, 'p': 1, 'twisted': True}
    with pytest.raises(SpecError):
        builtin_spec('flat_disco', n=1, p=0)


def test_float_scalars_accept_decimals():
    obj = dict(JACOBI_BROKEN, scalars='float', brackets=[[0, 1, 2, 0.5]])
    spec = spec_of(obj)
    assert spec.brackets == [(0, 1, 2, 0.5)]


def test_product_dimension():
    spec = spec_of({'kind': 'product', 'factors': [ABELIAN, {'kind': 'kahler', 'dim': 2}]})
    assert spec.dim == 7
    manifold = materialize(spec)
    assert manifold.structures[0].dim == 7


def test_product_keeps_anti_quasi_sasakian_structures():
    heisenberg = {'kind': 'patch_builtin', 'builtin': 'heisenberg', 'params': {'weights': ['1', '2']}}
    manifold = materialize(spec_of({'kind': 'product', 'factors': [heisenberg, {'kind': 'kahler', 'dim': 2}]}))
    assert [s.name for s in manifold.structures] == ['heisenberg(1, 2)/phi1xK2', 'heisenberg(1, 2)/phi2xK2']
    assert all(s.dim == 11 for s in manifold.structures)


def test_canonical_json_is_sorted_and_exact():
    text = dumps({'b': Fraction(1, 3), 'a': [0.1, 2.0, -0.0], 'c': float('inf')})
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert '"1/3"' in text
    assert '0.10000000000000001' in text
    assert '"inf"' in text
    assert text.endswith('\n')
    assert format_float(3.0) == '3.0'
    assert format_float(-0.0) == '0.0'


def test_heisenberg_report_passes():
    report = run_report(builtin_spec('heisenberg', ['1']), ReportOptions())
    assert report.exit_code is ExitCode.OK, report.failures
    data = report.to_dict()
    assert data['exit_code'] == 0
    names = [s['name'] for s in data['structures']]
    assert names == ['heisenberg(1)/phi1', 'heisenberg(1)/phi2', 'heisenberg(1)/phi3']
    first = data['structures'][0]
    assert first['flags']['anti_quasi_sasakian'] is True
    assert first['identity_suite']['passed'] is True
    assert first['k1_promote']['double_aqs_sasakian'] is True
    assert data['triple']['hypo_su2']['contact_calabi_yau'] is True
    assert data['host']['ricci_xi_xi']['matches'] is True


def test_report_is_deterministic():
    spec = builtin_spec('heisenberg', ['1', '2'])
    first = run_report(spec, ReportOptions()).to_json()
    second = run_report(spec, ReportOptions()).to_json()
    assert first == second


def test_scope_follows_command():
    report = run_report(builtin_spec('heisenberg', ['1']), ReportOptions(command='spectrum'))
    entry = report.to_dict()['structures'][0]
    assert 'operators' in entry
    assert 'classification' not in entry and 'connection' not in entry
    assert 'triple' not in report.data


def test_cokahler_report_passes():
    report = run_report(spec_of(ABELIAN), ReportOptions())
    assert report.exit_code is ExitCode.OK, report.failures
    entry = report.to_dict()['structures'][0]
    assert entry['flags']['cokahler'] is True
    assert entry['curvature']['constant_curvature']['constant'] is True
    assert entry['connection']['nonnegative_curvature_check']['applicable'] is False


def test_jacobi_failure_is_host_invariant():
    report = run_report(spec_of(JACOBI_BROKEN), ReportOptions())
    assert report.exit_code is ExitCode.HOST_INVARIANT
    assert 'structures' not in report.data
    assert report.to_dict()['failures'][0]['category'] == 'host_invariant'


def test_invalid_structure_exit_code():
    report = run_report(spec_of(BAD_STRUCTURE), ReportOptions())
    assert report.exit_code is ExitCode.STRUCTURE_INVALID
    entry = report.to_dict()['structures'][0]
    assert entry['validity']['phi_squared']['passed'] is False


def test_exit_code_is_smallest_category():
    from reports.report_runner import Failure, Report
    report = Report({}, [Failure(ExitCode.QUATERNIONIC, 'a', ''),
                         Failure(ExitCode.STRUCTURE_INVALID, 'b', ''),
                         Failure(ExitCode.CONNECTION, 'c', '')])
    assert report.exit_code is ExitCode.STRUCTURE_INVALID


def test_disc_report_matches_closed_forms():
    options = ReportOptions(command='curvature', points=4)
    report = run_report(builtin_spec('disc_bundle', c='-4'), options)
    assert report.exit_code is ExitCode.OK, report.failures
    patch = report.to_dict()['patch']
    assert patch['count'] == 4
    assert patch['expected_values']['passed'] is True
    assert patch['eta_einstein']['pointwise_eta_einstein'] is True
