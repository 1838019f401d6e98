"""Runge--Kutta stepping on a flat real vector space and the quadratic
observable machinery built on top of it."""
from __future__ import annotations

from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DegenerateSpectrum, DimensionMismatch, NonConvergence, NotEquivariant
from .record import TrajectoryRecord
from .solver import DEFAULT_SETTINGS, SolverSettings, solve_fixed_point
from .tableau import ButcherTableau, check_symplectic, projectable_tensor, symplectic_matrix

VectorField = Callable[[np.ndarray], np.ndarray]

EQUIVARIANCE_TOL = 1e-12


class Quadratic:
    """A quadratic map ``F: Y -> Z`` given by its value, first derivative
    action and (constant) symmetric second derivative.

    Subclasses implement :meth:`value`, :meth:`deriv` and :meth:`second`.
    """

    dim_y: int
    dim_z: int

    def value(self, y):
        raise NotImplementedError

    def deriv(self, y, v):
        """``F'(y) v``."""
        raise NotImplementedError

    def second(self, u, v):
        """``F''(u, v)``."""
        raise NotImplementedError

    def __call__(self, y):
        return self.value(y)


class QuadraticMap(Quadratic):
    """Dense quadratic map ``F(y) = c0 + lin y + 1/2 bil(y, y)``.

    ``bil`` has shape ``(dim_z, dim_y, dim_y)`` and is symmetrized on
    construction.
    """

    def __init__(self, c0, lin, bil):
        c0 = np.asarray(c0, dtype=float).reshape(-1)
        lin = np.asarray(lin, dtype=float)
        bil = np.asarray(bil, dtype=float)
        self.dim_z = c0.size
        self.dim_y = lin.shape[1] if lin.ndim == 2 else 0
        if lin.shape != (self.dim_z, self.dim_y) or bil.shape != (self.dim_z, self.dim_y, self.dim_y):
            raise DimensionMismatch(
                f"inconsistent shapes c0 {c0.shape}, lin {lin.shape}, bil {bil.shape}"
            )
        self.c0 = c0
        self.lin = lin
        self.bil = 0.5 * (bil + bil.transpose(0, 2, 1))

    @classmethod
    def random(cls, dim_y, dim_z, rng, scale=1.0, affine=False):
        """Random map with entries of order ``scale`` per output component."""
        c0 = scale * rng.standard_normal(dim_z)
        lin = scale * rng.standard_normal((dim_z, dim_y)) / np.sqrt(dim_y)
        if affine:
            bil = np.zeros((dim_z, dim_y, dim_y))
        else:
            bil = scale * rng.standard_normal((dim_z, dim_y, dim_y)) / dim_y
        return cls(c0, lin, bil)

    def value(self, y):
        return self.c0 + self.lin @ y + 0.5 * np.einsum("zij,i,j->z", self.bil, y, y)

    def deriv(self, y, v):
        return self.lin @ v + np.einsum("zij,i,j->z", self.bil, y, v)

    def second(self, u, v):
        return np.einsum("zij,i,j->z", self.bil, u, v)


class RKStep(NamedTuple):
    y1: np.ndarray
    stages: list
    iters: tuple


def _check_field(f, y0):
    k = np.asarray(f(y0))
    if k.shape != y0.shape:
        raise DimensionMismatch(f"vector field returned shape {k.shape} for state of shape {y0.shape}")


def rk_step(
    t: ButcherTableau,
    f: VectorField,
    y0,
    h: float,
    settings: SolverSettings = DEFAULT_SETTINGS,
    guess: Sequence[np.ndarray] | None = None,
) -> RKStep:
    """One step of the Runge--Kutta method ``t`` for ``y' = f(y)``.

    Stages are solved one at a time when ``t`` is lower triangular up to
    a permutation of stages, otherwise as one coupled system. ``guess``
    supplies starting values for the stages (default ``y0``). ``iters``
    holds the per-stage iteration counts in tableau order; in the coupled
    case each stage reports the shared count.
    """
    y0 = np.asarray(y0, dtype=float)
    if not h > 0:
        raise ValueError("step size must be positive")
    _check_field(f, y0)
    s = t.s
    a, b = t.a, t.b
    stages = [None] * s
    k = [None] * s
    iters = [0] * s

    order = t.solve_order
    if order is not None:
        for i in order:
            base = y0.copy()
            for j in order:
                if j == i:
                    break
                if a[i, j] != 0.0:
                    base += h * a[i, j] * k[j]
            if a[i, i] == 0.0:
                stages[i] = base
            else:
                hii = h * a[i, i]
                start = y0 if guess is None else guess[i]
                stages[i], iters[i] = solve_fixed_point(
                    lambda Y: base + hii * f(Y), start, settings, stage=i + 1
                )
            k[i] = f(stages[i])
    else:
        n = y0.size
        start = np.tile(y0, s) if guess is None else np.concatenate(guess)

        def phi(X):
            K = np.stack([f(X[j * n:(j + 1) * n]) for j in range(s)])
            return (y0[None, :] + h * (a @ K)).reshape(-1)

        X, count = solve_fixed_point(phi, start, settings)
        for i in range(s):
            stages[i] = X[i * n:(i + 1) * n]
            k[i] = f(stages[i])
        iters = [count] * s

    y1 = y0 + h * sum(b[i] * k[i] for i in range(s))
    return RKStep(y1, stages, tuple(iters))


def evolve_observable(t, f, F: Quadratic, y0, h, settings=DEFAULT_SETTINGS):
    """Numerical evolution ``F(y0) + h sum_i b_i F'(Y_i) f(Y_i)`` of a
    quadratic observable, valid when ``t`` satisfies the symplecticity
    condition.

    Returns ``(z1, [F(Y_i)])``.
    """
    res = check_symplectic(t)
    if res > EQUIVARIANCE_TOL:
        raise NotEquivariant(res)
    y0 = np.asarray(y0, dtype=float)
    step = rk_step(t, f, y0, h, settings)
    z1 = F.value(y0) + h * sum(bi * F.deriv(Y, f(Y)) for bi, Y in zip(t.b, step.stages))
    return z1, [F.value(Y) for Y in step.stages]


def expansion_residual(t, f, F: Quadratic, y0, h, settings=DEFAULT_SETTINGS):
    """Max-norm gaps between both sides of the exact second-order
    expansions of ``F(Y_i)`` and ``F(y1)`` along one RK step.

    Returns ``(stage_residuals, step_residual)``.
    """
    y0 = np.asarray(y0, dtype=float)
    step = rk_step(t, f, y0, h, settings)
    s = t.s
    a, b = t.a, t.b
    ks = [f(Y) for Y in step.stages]
    lin = [F.deriv(Y, kk) for Y, kk in zip(step.stages, ks)]
    sec = [[F.second(ks[j], ks[m]) for m in range(s)] for j in range(s)]
    c_stage = projectable_tensor(t)
    c_step = symplectic_matrix(t)
    Fy0 = F.value(y0)

    stage_res = []
    for i in range(s):
        rhs = Fy0 + h * sum(a[i, j] * lin[j] for j in range(s))
        rhs = rhs + 0.5 * h**2 * sum(c_stage[i, j, m] * sec[j][m] for j in range(s) for m in range(s))
        stage_res.append(float(np.max(np.abs(F.value(step.stages[i]) - rhs))))

    rhs = Fy0 + h * sum(b[i] * lin[i] for i in range(s))
    rhs = rhs + 0.5 * h**2 * sum(c_step[i, j] * sec[i][j] for i in range(s) for j in range(s))
    step_res = float(np.max(np.abs(F.value(step.y1) - rhs)))
    return stage_res, step_res


def shifted_guess(stages, y_prev, y_now):
    """Warm start: previous converged stages translated by the last step."""
    if stages is None:
        return None
    shift = y_now - y_prev
    return [Y + shift for Y in stages]


def rk_trajectory(
    t: ButcherTableau,
    f: VectorField,
    y0,
    h: float,
    n_steps: int,
    settings: SolverSettings = DEFAULT_SETTINGS,
    diagnostics=(),
    observe: Callable | None = None,
    keep_states: bool = False,
) -> TrajectoryRecord:
    """Integrate ``n_steps`` steps, recording diagnostics of ``observe(y)``
    (default ``y`` itself)."""
    observe = observe or (lambda y: y)
    y = np.asarray(y0, dtype=float)
    rec = TrajectoryRecord.start([name for name, _ in diagnostics], keep_states)
    rec.append(0.0, observe(y), diagnostics, (), state=y)
    prev_stages = None
    y_prev = y
    for n in range(1, n_steps + 1):
        try:
            step = rk_step(t, f, y, h, settings, guess=shifted_guess(prev_stages, y_prev, y))
        except (NonConvergence, DegenerateSpectrum) as exc:
            exc.at_step(n).record = rec
            raise
        y_prev, y = y, step.y1
        prev_stages = step.stages
        rec.append(n * h, observe(y), diagnostics, step.iters, state=y)
    return rec
