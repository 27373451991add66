import argparse
import json

import numpy as np
import pytest

from main import build_parser, main, parse_period
from utils.exporter import csv_roundtrip_identical, read_table_csv


def _run(tmp_path, *args):
    return main([*args, '--out', str(tmp_path)])


@pytest.mark.parametrize('text, value', [
    ('pi', np.pi), ('3pi/4', 0.75 * np.pi), ('2*pi', 2 * np.pi), ('pi/2', 0.5 * np.pi),
    ('1.5', 1.5),
])
def test_parse_period(text, value):
    assert parse_period(text) == pytest.approx(value, rel=1e-15)


def test_parse_period_rejects_text():
    with pytest.raises(argparse.ArgumentTypeError):
        parse_period('tau')


def test_parser_defaults():
    args = build_parser().parse_args(['region'])
    assert args.L == pytest.approx([0.5 * np.pi, np.pi])
    assert args.n == 40 and args.N == 256 and args.format == 'csv'


def test_profile_command(tmp_path):
    assert _run(tmp_path, 'profile', '--a', '0.4', '--b', '0', '--N', '128') == 0
    table = read_table_csv(tmp_path / 'profile.csv')
    assert list(table.columns) == ['x', 'phi', 'dphi', 'ddphi']
    assert len(table) == 128
    assert csv_roundtrip_identical(tmp_path / 'profile.csv')

    summary = json.loads((tmp_path / 'profile_summary.json').read_text())
    assert summary['schema_version'] == '1.0'
    assert summary['region'] == 'Interior'
    assert summary['monotonicity']['passed'] is True
    assert summary['invariant_residual'] < 1e-10
    assert list(tmp_path.glob('run_*.json'))


def test_profile_command_json_format(tmp_path):
    assert _run(tmp_path, 'profile', '--a', '0.4', '--b', '0', '--N', '64',
                '--format', 'json') == 0
    table = json.loads((tmp_path / 'profile.json').read_text())
    assert table['columns'] == ['x', 'phi', 'dphi', 'ddphi']
    assert len(table['rows']) == 64


def test_outside_region_is_invalid_input(tmp_path):
    assert _run(tmp_path, 'spectrum', '--a', '0.4', '--b', '10') == 2
    assert _run(tmp_path, 'profile', '--a', '0.4', '--b', '10') == 2
    assert not (tmp_path / 'profile.csv').exists()


def test_invalid_settings(tmp_path):
    assert _run(tmp_path, 'stability', '--L') == 2
    assert _run(tmp_path, 'stability') == 2
    assert _run(tmp_path, 'profile', '--a', '0.4', '--b', '0', '--N', '63') == 2
    assert _run(tmp_path, 'profile', '--a', '0.4', '--b', '0', '--c', '-1') == 2
    assert _run(tmp_path, 'spectrum', '--a', '0.4', '0.5', '--b', '0') == 2


def test_unknown_format_is_rejected_by_the_parser(tmp_path):
    with pytest.raises(SystemExit) as exc:
        _run(tmp_path, 'profile', '--a', '0.4', '--b', '0', '--format', 'xml')
    assert exc.value.code == 2


def test_spectrum_command(tmp_path):
    assert _run(tmp_path, 'spectrum', '--a', '0.4', '--b', '0') == 0
    summary = json.loads((tmp_path / 'spectrum_summary.json').read_text())
    assert summary['schema_version'] == '1.0'
    k_op = summary['reports']['k_op']
    assert (k_op['n_negative'], k_op['n_zero']) == (1, 1)
    assert summary['stable'] is True
    assert summary['theta_in_a'] > 0
    for kind in ('L_op', 'K_op', 'M_schrodinger', 'JL_op', 'JphiK_op'):
        eig = read_table_csv(tmp_path / f'spectrum_{kind}.csv')
        assert list(eig.columns) == ['re', 'im']
        assert len(eig) == 256


def test_period_scan_command(tmp_path):
    assert _run(tmp_path, 'period-scan', '--mode', 'vs_b', '--a', '0.3', '--n', '8') == 0
    table = read_table_csv(tmp_path / 'period_scan_vs_b.csv')
    assert len(table) == 8
    assert np.all(np.diff(table['period']) > 0)
    summary = json.loads((tmp_path / 'period_scan_vs_b_summary.json').read_text())
    assert summary['evaluation']['lowest_score'] == 100.0


def test_stability_command(tmp_path):
    assert _run(tmp_path, 'stability', '--L', 'pi/2', '--n', '6') == 0
    table = read_table_csv(tmp_path / 'stability.csv')
    assert list(table.columns)[:3] == ['period', 'a', 'b']
    assert len(table) == 6
    summary = json.loads((tmp_path / 'stability_summary.json').read_text())
    assert summary['curves'][0]['verdict'] == 'Stable'
    assert summary['curves'][0]['skipped'] == 0
    evaluation = json.loads((tmp_path / 'evaluation.json').read_text())
    assert evaluation['total_evaluations'] == 1
    run_file = next(tmp_path.glob('run_*.json'))
    assert str(tmp_path / 'evaluation.json') in json.loads(run_file.read_text())['run_data']['artifacts']


@pytest.mark.slow
def test_region_command(tmp_path):
    assert _run(tmp_path, 'region', '--n', '16', '--L', 'pi') == 0
    summary = json.loads((tmp_path / 'region_summary.json').read_text())
    assert summary['fold_points'] > 0
    assert summary['fold_crossings'][f'{np.pi:.12g}'] is not None
    for name in ('region_boundaries', 'region_peaked', 'region_fold_locus',
                 'region_fixed_period'):
        assert csv_roundtrip_identical(tmp_path / f'{name}.csv')
