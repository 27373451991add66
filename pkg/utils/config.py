"""
Run Configuration

Loads ``.env`` with python-dotenv and holds the settings shared by every CLI
command in a ``ScanConfig``.

Environment variables:
    CHWAVES_OUTPUT_DIR   default artifact directory (``output``)
    CHWAVES_DEFAULT_C    default wave speed (``2``)
    CHWAVES_LOG_LEVEL    library log level, read by utils.logging_config
"""

import os
from dataclasses import asdict, dataclass, field

from dotenv import load_dotenv

from waves.errors import InvalidInput
from waves.spectra import DEFAULT_ZERO_TOL
from waves.wave_family import DEFAULT_REGION_TOL

load_dotenv()

FORMATS = ('csv', 'json')
SPACINGS = ('uniform', 'log')


def default_output_dir() -> str:
    return os.getenv('CHWAVES_OUTPUT_DIR', 'output')


def default_speed() -> float:
    raw = os.getenv('CHWAVES_DEFAULT_C', '2')
    try:
        return float(raw)
    except ValueError:
        raise InvalidInput(f"CHWAVES_DEFAULT_C must be a number, got {raw!r}")


@dataclass
class ScanConfig:
    """
    Settings for one CLI invocation.

    Attributes:
        c (float): Wave speed, c > 0.
        n_samples (int): Points along a slice or a fixed-period family.
        n_points (int): Samples per profile period.
        N (int): Collocation size for the operator spectra (even, >= 64).
        output_dir (str): Directory receiving the artifacts.
        fmt (str): 'csv' or 'json' for tabular artifacts.
        tol (float): Region-classification tolerance.
        zero_tol (float): Relative threshold for zero eigenvalues.
        spacing (str): 'uniform' or 'log' sampling of fixed-period families.

    Example:
        >>> config = ScanConfig(c=2.0, n_samples=40)
        >>> config.validate()
    """
    c: float = field(default_factory=default_speed)
    n_samples: int = 40
    n_points: int = 256
    N: int = 256
    output_dir: str = field(default_factory=default_output_dir)
    fmt: str = 'csv'
    tol: float = DEFAULT_REGION_TOL
    zero_tol: float = DEFAULT_ZERO_TOL
    spacing: str = 'uniform'

    def validate(self) -> 'ScanConfig':
        """
        Check the settings and return self.

        Raises:
            InvalidInput: On c <= 0, non-positive grid sizes, an odd or too
                small N, an unknown format or spacing, or non-positive
                tolerances.
        """
        if not self.c > 0:
            raise InvalidInput(f"wave speed must be positive, got c={self.c!r}")
        for name in ('n_samples', 'n_points', 'N'):
            if getattr(self, name) <= 0:
                raise InvalidInput(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.N % 2 or self.N < 64:
            raise InvalidInput(f"N must be even and at least 64, got {self.N!r}")
        if self.n_points % 2 or self.n_points < 64:
            raise InvalidInput(f"n_points must be even and at least 64, got {self.n_points!r}")
        if self.fmt not in FORMATS:
            raise InvalidInput(f"unknown format {self.fmt!r}; expected one of {FORMATS}")
        if self.spacing not in SPACINGS:
            raise InvalidInput(f"unknown spacing {self.spacing!r}; expected one of {SPACINGS}")
        if not (self.tol > 0 and self.zero_tol > 0):
            raise InvalidInput("tolerances must be positive")
        return self

    def to_dict(self) -> dict:
        return asdict(self)
