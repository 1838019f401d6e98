import numpy as np
import pytest
from hypothesis import given, strategies as st

from sydirk.errors import DimensionMismatch, NonConvergence, NotEquivariant
from sydirk.rk import QuadraticMap, evolve_observable, expansion_residual, rk_step, rk_trajectory
from sydirk.solver import SolverSettings
from sydirk.tableau import ButcherTableau, builtin_tableau, make_sydirk

MID = builtin_tableau("midpoint")
TIGHT = SolverSettings(tol=1e-14, max_iter=500)


def test_zero_field_is_fixed():
    y0 = np.array([0.3, -1.2])
    step = rk_step(MID, lambda y: np.zeros_like(y), y0, 0.1)
    assert np.array_equal(step.y1, y0)
    assert step.iters == (1,)


def test_constant_field():
    step = rk_step(MID, lambda y: np.ones_like(y), np.zeros(1), 0.5)
    assert step.stages[0][0] == 0.25
    assert step.y1[0] == 0.5


def test_linear_scalar_closed_form():
    h = 0.1
    step = rk_step(MID, lambda y: y, np.ones(1), h)
    assert step.y1[0] == pytest.approx((1 + h / 2) / (1 - h / 2), abs=1e-15)
    assert step.y1[0] == pytest.approx(1.1052631578947368, abs=1e-15)


def _linear(rng, n=4):
    A = rng.standard_normal((n, n))
    return A, (lambda y: A @ y), rng.standard_normal(n)


def test_midpoint_is_cayley_on_linear_systems(rng):
    A, f, y0 = _linear(rng)
    h = 0.05
    eye = np.eye(len(y0))
    exact = np.linalg.solve(eye - 0.5 * h * A, (eye + 0.5 * h * A) @ y0)
    assert np.allclose(rk_step(MID, f, y0, h, TIGHT).y1, exact, atol=1e-13)


def test_sydirk_is_composition_of_midpoints(rng):
    _, f, y0 = _linear(rng)
    b = [0.3, 0.7, -0.2]
    y = y0
    for bi in b:
        y = rk_step(MID, f, y, 0.05 * bi, TIGHT).y1 if bi > 0 else _neg_midpoint(f, y, 0.05 * bi)
    assert np.allclose(rk_step(make_sydirk(b), f, y0, 0.05, TIGHT).y1, y, atol=1e-13)


def _neg_midpoint(f, y, h):
    # midpoint with negative step: apply to the reversed field
    return rk_step(MID, lambda v: -f(v), y, -h, TIGHT).y1


def test_coupled_gauss_matches_stability_function():
    lam = -0.7
    h = 0.2
    z = lam * h
    R = (1 + z / 2 + z**2 / 12) / (1 - z / 2 + z**2 / 12)
    step = rk_step(builtin_tableau("gauss2"), lambda y: lam * y, np.ones(1), h, TIGHT)
    assert step.y1[0] == pytest.approx(R, abs=1e-14)
    assert step.iters[0] == step.iters[1] > 1


def test_explicit_rk4_polynomial():
    z = 0.3
    step = rk_step(builtin_tableau("rk4"), lambda y: y, np.ones(1), z)
    assert step.y1[0] == pytest.approx(1 + z + z**2 / 2 + z**3 / 6 + z**4 / 24, abs=1e-15)
    assert step.iters == (0, 0, 0, 0)


def test_permuted_stages_give_same_step(rng):
    _, f, y0 = _linear(rng)
    f2 = lambda y: f(y) + 0.1 * y**2
    t = make_sydirk([0.4, 0.6, -0.1])
    a = rk_step(t, f2, y0, 0.05, TIGHT)
    b = rk_step(t.permuted([2, 0, 1]), f2, y0, 0.05, TIGHT)
    assert np.allclose(a.y1, b.y1, atol=1e-14)


def test_bad_field_shape():
    with pytest.raises(DimensionMismatch):
        rk_step(MID, lambda y: np.zeros(3), np.zeros(2), 0.1)
    with pytest.raises(ValueError):
        rk_step(MID, lambda y: y, np.zeros(2), 0.0)


def test_quadratic_map_expansion_is_exact(rng):
    F = QuadraticMap.random(5, 3, rng)
    y, v = rng.standard_normal(5), rng.standard_normal(5)
    assert np.allclose(F(y + v), F(y) + F.deriv(y, v) + 0.5 * F.second(v, v), atol=1e-13)
    with pytest.raises(DimensionMismatch):
        QuadraticMap(np.zeros(2), np.zeros((2, 3)), np.zeros((2, 3, 4)))


def test_invariant_observable_is_kept():
    F = QuadraticMap([0.0], np.zeros((1, 2)), 2 * np.eye(2)[None])
    rot = lambda y: np.array([-y[1], y[0]])
    y0 = np.array([0.6, 0.8])
    z1, _ = evolve_observable(builtin_tableau("sydirk3_tj"), rot, F, y0, 0.3, TIGHT)
    assert z1[0] == pytest.approx(1.0, abs=1e-15)


def test_square_of_translation():
    F = QuadraticMap([0.0], np.zeros((1, 1)), 2 * np.ones((1, 1, 1)))
    y0, h = 0.7, 0.25
    z1, stages = evolve_observable(MID, lambda y: np.ones(1), F, np.array([y0]), h)
    assert z1[0] == pytest.approx((y0 + h) ** 2, abs=1e-15)
    assert stages[0][0] == pytest.approx((y0 + h / 2) ** 2, abs=1e-15)


def test_not_equivariant_raises():
    F = QuadraticMap.random(2, 1, np.random.default_rng(0))
    with pytest.raises(NotEquivariant) as err:
        evolve_observable(builtin_tableau("rk4"), lambda y: y, F, np.ones(2), 0.1)
    assert err.value.residual >= 1 / 36


def test_euler_expansion():
    F = QuadraticMap([0.0], np.zeros((1, 1)), 2 * np.ones((1, 1, 1)))
    _, step_res = expansion_residual(builtin_tableau("euler"), lambda y: y, F, np.ones(1), 0.1)
    assert step_res <= 1e-15


def _random_case(seed):
    rng = np.random.default_rng(seed)
    s = int(rng.integers(1, 5))
    dy = int(rng.integers(1, 7))
    dz = int(rng.integers(1, 7))
    t = ButcherTableau(rng.uniform(-1, 1, (s, s)), rng.uniform(-1, 1, s))
    F = QuadraticMap.random(dy, dz, rng)
    A = rng.standard_normal((dy, dy)) / np.sqrt(dy)
    c = rng.standard_normal(dy)
    return t, (lambda y: A @ y + c), F, rng.standard_normal(dy)


@given(st.integers(0, 2**31))
def test_expansions_hold(seed):
    t, f, F, y0 = _random_case(seed)
    stage_res, step_res = expansion_residual(t, f, F, y0, 0.01, TIGHT)
    assert max(stage_res) <= 1e-12 and step_res <= 1e-12


def test_linear_observable_has_no_quadratic_terms(rng):
    t = ButcherTableau(rng.uniform(-1, 1, (3, 3)), rng.uniform(-1, 1, 3))
    F = QuadraticMap.random(4, 2, rng, affine=True)
    stage_res, step_res = expansion_residual(t, lambda y: np.sin(y), F, rng.standard_normal(4), 0.05, TIGHT)
    assert max(stage_res) <= 1e-14 and step_res <= 1e-14


def test_trajectory_records():
    rec = rk_trajectory(MID, lambda y: -y, np.ones(2), 0.1, 0, diagnostics=[("y0", lambda y: y[0])])
    assert len(rec) == 1 and rec.column("y0")[0] == 1.0
    rec = rk_trajectory(MID, lambda y: -y, np.ones(2), 0.1, 20, keep_states=True,
                        diagnostics=[("y0", lambda y: y[0])])
    assert len(rec) == 21 and len(rec.states) == 21
    assert rec.times[-1] == pytest.approx(2.0)
    expected = ((1 - 0.05) / (1 + 0.05)) ** 20
    assert rec.column("y0")[-1] == pytest.approx(expected, abs=1e-14)
    # warm starts pay off after the first step
    assert max(rec.stage_iters[5]) <= rec.stage_iters[1][0]


def test_trajectory_reports_failing_step():
    f = lambda y: y**2
    with pytest.raises(NonConvergence) as err:
        rk_trajectory(MID, f, np.ones(1), 0.3, 50, SolverSettings(max_iter=50))
    exc = err.value
    assert exc.step is not None and exc.step >= 1
    assert len(exc.record) == exc.step
