import pytest
from scipy.integrate import solve_ivp

from waves.profile import b_window, sample_profile
from waves.wave_family import WaveParams, boundary_b_minus, critical_value_a, turning_points

SPEED = 2.0


@pytest.fixture(scope='session')
def interior_params():
    """Decreasing-period wave, b = 0."""
    return WaveParams(0.4, 0.0, SPEED)


@pytest.fixture(scope='session')
def increasing_params():
    """Wave on the slice b = -1.2, where the period increases with a."""
    return WaveParams(0.06, -1.2, SPEED)


@pytest.fixture(scope='session')
def constant_params():
    return WaveParams(0.4, boundary_b_minus(0.4, SPEED), SPEED)


@pytest.fixture(scope='session')
def interior_profile(interior_params):
    return sample_profile(interior_params, 256)


@pytest.fixture(scope='session')
def constant_profile(constant_params):
    return sample_profile(constant_params, 128)


def shoot_profile(p, x):
    """Reference profile from phi'' = phi - a/(c - phi)^2 started at the crest."""
    phi_plus = turning_points(p).phi_plus

    def rhs(_, y):
        return [y[1], y[0] - p.a / (p.c - y[0]) ** 2]

    sol = solve_ivp(rhs, (0.0, float(x[-1])), [phi_plus, 0.0], method='DOP853',
                    rtol=1e-13, atol=1e-14, t_eval=x)
    return sol.y[0], sol.y[1]


@pytest.fixture
def reference_profile():
    return shoot_profile


def draw_interior(rng, c=SPEED, margin=0.05):
    """Interior (a, b, c) with a and b at least margin (relative) from the region edges."""
    a = rng.uniform(margin, 1.0 - margin) * critical_value_a(c)
    lo, hi = b_window(a, c)
    return WaveParams(a, lo + rng.uniform(margin, 1.0 - margin) * (hi - lo), c)


@pytest.fixture
def interior_sampler():
    return draw_interior
