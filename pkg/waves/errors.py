"""
Error and Warning Types

Every failure raised by the wave library derives from ``WaveError`` so the
command-line layer can map library failures to exit codes in one place.
Input-side problems (bad parameters, points outside the existence region)
are kept apart from numerical failures (quadrature, root finding,
finite differences, resolution).
"""


class WaveError(Exception):
    """Base class for every error raised by the wave library."""


class DomainError(WaveError, ValueError):
    """An argument lies outside the mathematical domain of a function."""


class InvalidInput(WaveError, ValueError):
    """User-supplied configuration is malformed (grid sizes, formats, lists)."""


class OutsideRegion(DomainError):
    """The integration constant a lies outside (0, a_c)."""


class NotInRegion(DomainError):
    """The point (a, b, c) is not strictly inside the existence region."""


class DegenerateRoots(DomainError):
    """The cubic a = phi (c - phi)^2 has (numerically) coalescing roots."""


class QuadratureFailure(WaveError):
    """A quadrature did not reach its tolerance or violated a residual check."""


class DerivativeFailure(WaveError):
    """A finite-difference stencil could not be placed inside the region."""


class SingularFamily(WaveError):
    """The fixed-period family cannot be parameterized by b (d_a period = 0)."""


class NoSolution(WaveError):
    """A root-finding problem has no solution in the admissible bracket."""


class ResolutionError(WaveError):
    """The collocation grid does not resolve the profile."""


class IntegrationFailure(WaveError):
    """An ODE integration (shooting) failed."""


class NearSolitaryWarning(UserWarning):
    """The requested point is inside the guard band next to the solitary boundary."""
