import json

import numpy as np
import pandas as pd
import pytest

from utils.exporter import (SCHEMA_VERSION, csv_roundtrip_identical, eigen_frame,
                            profile_frame, read_table_csv, snake_case, snake_keys,
                            stability_frame, to_csv_text, write_json, write_table)
from waves.functionals import StabilityCurve
from waves.spectra import SpectralReport


@pytest.mark.parametrize('key, expected', [
    ('K_op', 'k_op'), ('JphiK_op', 'jphi_k_op'), ('L', 'l'), ('M_schrodinger', 'm_schrodinger'),
    ('n-zero', 'n_zero'), ('already_snake', 'already_snake'),
])
def test_snake_case(key, expected):
    assert snake_case(key) == expected


def test_snake_keys_recurses():
    assert snake_keys({'K_op': [{'nNeg': 1}], 'L': 2}) == {'k_op': [{'n_neg': 1}], 'l': 2}


def test_csv_text_is_exact():
    frame = pd.DataFrame({'x': [0.1, 1.0 / 3.0, -0.0], 'n': [1, 2, 3]})
    text = to_csv_text(frame)
    assert text.startswith('x,n\n')
    assert '\r' not in text
    assert '-0' not in text
    assert float(text.splitlines()[2].split(',')[0]) == 1.0 / 3.0


def test_csv_roundtrip(tmp_path, interior_profile):
    path = write_table(profile_frame(interior_profile), tmp_path / 'profile', 'csv')
    assert path.suffix == '.csv'
    assert csv_roundtrip_identical(path)
    back = read_table_csv(path)
    np.testing.assert_array_equal(back['phi'].to_numpy(), interior_profile.phi)


def test_json_table(tmp_path):
    frame = pd.DataFrame({'re': [1.0, -2.0], 'im': [0.0, 0.5]})
    path = write_table(frame, tmp_path / 'eig.csv', 'json')
    assert path.name == 'eig.json'
    data = json.loads(path.read_text())
    assert data['schema_version'] == SCHEMA_VERSION
    assert data['columns'] == ['re', 'im']
    assert data['rows'][1] == {'re': -2.0, 'im': 0.5}


def test_write_json_converts_numpy(tmp_path):
    path = write_json({'K_op': {'values': np.arange(3), 'n': np.int64(2)}},
                      tmp_path / 'nested' / 'summary.json')
    data = json.loads(path.read_text())
    assert data == {'schema_version': SCHEMA_VERSION, 'k_op': {'values': [0, 1, 2], 'n': 2}}


def test_eigen_frame_sorted():
    report = SpectralReport(kind='JL_op', eigenvalues=np.array([2 + 1j, -1 + 0j, 2 - 1j]))
    frame = eigen_frame(report)
    assert frame['re'].tolist() == [-1.0, 2.0, 2.0]
    assert frame['im'].tolist() == [0.0, -1.0, 1.0]


def test_stability_frame_columns():
    sample = {'a': 0.1, 'b': -0.3, 'mass': 1.0, 'energy': 2.0, 'ratio': 2.0,
              'dratio_da': -1.0, 'dratio_err': 1e-9, 'det_p': -0.5}
    frame = stability_frame(StabilityCurve(L=np.pi, c=2.0, samples=[sample], verdict='Stable'))
    assert list(frame.columns) == ['period', 'a', 'b', 'mass', 'energy', 'ratio',
                                   'dratio_da', 'dratio_err', 'det_p']
    assert frame['period'].iloc[0] == np.pi
