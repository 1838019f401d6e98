import numpy as np
import pytest

from sydirk.errors import NonConvergence
from sydirk.solver import SolverSettings, Strategy, solve_fixed_point


def test_contraction_converges():
    x, it = solve_fixed_point(lambda x: 0.5 * x + 1.0, np.zeros(3))
    assert np.allclose(x, 2.0, atol=1e-13)
    assert 1 < it < 60


def test_fixed_input_takes_one_sweep():
    x, it = solve_fixed_point(lambda x: x, np.array([1.0, 2.0]))
    assert it == 1


def test_divergence_reports_residual():
    with pytest.raises(NonConvergence) as err:
        solve_fixed_point(lambda x: 2.0 * x + 1.0, np.zeros(2), SolverSettings(max_iter=20), stage=3)
    exc = err.value
    assert exc.stage == 3 and exc.iterations == 20 and exc.residual > 1.0
    assert "stage 3" in str(exc.at_step(7)) and exc.step == 7


def test_nan_aborts_early():
    with pytest.raises(NonConvergence):
        solve_fixed_point(lambda x: x + np.nan, np.ones(1))


def test_newton_rescues_stalled_iteration():
    # slope -0.98 at the root: fixed point crawls, Newton finishes fast
    phi = lambda x: 1.0 - 0.98 * x
    s = SolverSettings(tol=1e-14, max_iter=50, strategy="newton_fallback")
    x, it = solve_fixed_point(phi, np.zeros(1), s)
    assert abs(x[0] - 1 / 1.98) < 1e-13
    with pytest.raises(NonConvergence):
        solve_fixed_point(phi, np.zeros(1), SolverSettings(tol=1e-14, max_iter=50))


def test_newton_on_expanding_map():
    # slope 3: plain iteration runs away from the root at 1
    s = SolverSettings(max_iter=100, strategy=Strategy.NEWTON_FALLBACK)
    x, _ = solve_fixed_point(lambda x: 3.0 * x - 2.0 + 0.1 * (x - 1.0) ** 2, np.array([1.2]), s)
    assert abs(x[0] - 1.0) < 1e-12


def test_settings_validation():
    with pytest.raises(ValueError):
        SolverSettings(tol=0)
    with pytest.raises(ValueError):
        SolverSettings(max_iter=0)
    with pytest.raises(ValueError):
        SolverSettings(strategy="bisection")
