"""
Artifact Writers

CSV artifacts are written with pandas: comma separated, one header row,
floats with 17 significant digits and '\\n' line endings, so reading a file
back with ``read_table_csv`` and writing it again reproduces it byte for byte.
JSON artifacts carry a ``schema_version`` and lower_snake_case keys.
"""

import json
import re
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from utils.memory import json_default
from waves.functionals import StabilityCurve
from waves.profile import WaveProfile
from waves.spectra import SpectralReport

SCHEMA_VERSION = '1.0'
FLOAT_FORMAT = '%.17g'

_CAMEL_BOUNDARY = re.compile(r'(?<=[a-z0-9])(?=[A-Z])')


def snake_case(key: str) -> str:
    """
    Lower-snake form of a key: 'K_op' -> 'k_op', 'JphiK_op' -> 'jphi_k_op'.
    """
    key = _CAMEL_BOUNDARY.sub('_', str(key)).replace('-', '_').replace(' ', '_')
    return re.sub(r'_+', '_', key).lower()


def snake_keys(value: Any) -> Any:
    """Apply snake_case to every dict key, recursively."""
    if isinstance(value, dict):
        return {snake_case(k): snake_keys(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [snake_keys(v) for v in value]
    return value


def to_csv_text(frame: pd.DataFrame) -> str:
    floats = frame.select_dtypes(include='float').columns
    if len(floats):
        # -0.0 would read back as integer 0
        frame = frame.copy()
        frame[floats] = frame[floats] + 0.0
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')


def read_table_csv(path) -> pd.DataFrame:
    """Read a CSV artifact without losing float precision."""
    return pd.read_csv(path, float_precision='round_trip')


def csv_roundtrip_identical(path) -> bool:
    """True when re-reading and re-emitting the CSV gives the same bytes."""
    original = Path(path).read_text(encoding='utf-8')
    return to_csv_text(read_table_csv(path)) == original


def write_json(payload: dict, path) -> Path:
    """
    Write a JSON summary with schema_version and snake-cased keys.

    Args:
        payload (dict): JSON-serializable content; numpy values are converted.
        path: Destination file.

    Returns:
        Path: The file written.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {'schema_version': SCHEMA_VERSION, **snake_keys(payload)}
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(document, f, indent=2, default=json_default, allow_nan=True)
    return path


def write_table(frame: pd.DataFrame, path, fmt: str = 'csv') -> Path:
    """
    Write a table as CSV, or as JSON with a column list and row records.

    The suffix of path is replaced to match fmt.

    Example:
        >>> write_table(profile_frame(profile), 'output/profile', 'csv')
        PosixPath('output/profile.csv')
    """
    path = Path(path).with_suffix(f'.{fmt}')
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == 'csv':
        with open(path, 'w', encoding='utf-8', newline='') as f:
            f.write(to_csv_text(frame))
        return path
    return write_json({'columns': list(frame.columns),
                       'rows': frame.to_dict(orient='records')}, path)


def profile_frame(profile: WaveProfile) -> pd.DataFrame:
    return pd.DataFrame({'x': profile.x_grid, 'phi': profile.phi,
                         'dphi': profile.dphi, 'ddphi': profile.ddphi})


def eigen_frame(report: SpectralReport) -> pd.DataFrame:
    """Eigenvalues as columns re, im sorted by real then imaginary part."""
    values = np.asarray(report.eigenvalues, dtype=complex)
    order = np.lexsort((values.imag, values.real))
    return pd.DataFrame({'re': values.real[order], 'im': values.imag[order]})


def stability_frame(curve: StabilityCurve) -> pd.DataFrame:
    frame = pd.DataFrame(curve.samples,
                         columns=['a', 'b', 'mass', 'energy', 'ratio',
                                  'dratio_da', 'dratio_err', 'det_p'])
    frame.insert(0, 'period', curve.L)
    return frame
