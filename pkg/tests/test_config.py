import pytest

from utils.config import ScanConfig, default_output_dir, default_speed
from waves.errors import InvalidInput


def test_defaults(monkeypatch):
    monkeypatch.delenv('CHWAVES_DEFAULT_C', raising=False)
    monkeypatch.delenv('CHWAVES_OUTPUT_DIR', raising=False)
    config = ScanConfig().validate()
    assert config.c == 2.0
    assert config.output_dir == 'output'
    assert config.to_dict()['N'] == 256


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv('CHWAVES_DEFAULT_C', '3.5')
    monkeypatch.setenv('CHWAVES_OUTPUT_DIR', 'artifacts')
    assert default_speed() == 3.5
    assert default_output_dir() == 'artifacts'
    assert ScanConfig().c == 3.5


def test_bad_environment_speed(monkeypatch):
    monkeypatch.setenv('CHWAVES_DEFAULT_C', 'fast')
    with pytest.raises(InvalidInput):
        default_speed()


@pytest.mark.parametrize('changes', [
    {'c': 0.0}, {'c': -1.0}, {'n_samples': 0}, {'N': 255}, {'N': 32}, {'n_points': 62},
    {'fmt': 'xml'}, {'spacing': 'cubic'}, {'tol': 0.0}, {'zero_tol': -1e-7},
])
def test_validate_rejects(changes):
    config = ScanConfig(c=2.0, output_dir='out')
    for key, value in changes.items():
        setattr(config, key, value)
    with pytest.raises(InvalidInput):
        config.validate()
