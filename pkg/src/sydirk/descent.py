"""SyDIRK methods expressed on the projected space ``Z``.

Given ``g`` and ``gamma`` on ``Z`` with ``F'(y) f(y) = g(F(y))`` and
``F''(f(y), f(y)) = gamma(F(y))``, the SyDIRK stages satisfy

    Z_i = z0 + h sum_{j<i} b_j g(Z_j) + (h/2) b_i g(Z_i) - (h^2/8) b_i^2 gamma(Z_i)
    z1  = z0 + h sum_i b_i g(Z_i)

and ``Z_i = F(Y_i)``, ``z1 = F(y1)`` for the full-space method.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra.matrices import from_real, to_real
from .errors import DegenerateSpectrum, NonConvergence, SingularFactor, ZeroWeight
from .record import TrajectoryRecord
from .rk import Quadratic, shifted_guess
from .solver import DEFAULT_SETTINGS, SolverSettings, solve_fixed_point

# condition number beyond which a Cayley factor counts as singular
SINGULAR_COND = 1e12


@dataclass(frozen=True)
class ReducedSystem:
    """Vector fields ``g`` and ``gamma`` on a flat real space of size
    ``dim_z``.

    Matrix systems may also provide ``factors(Z) -> (A, B)`` on ``n x n``
    complex matrices with ``g = A Z + Z B`` and ``gamma = 2 A Z B``; this
    enables :func:`dcay_step`.
    """

    dim_z: int
    g: Callable
    gamma: Callable
    factors: Callable | None = None
    n: int | None = None


@dataclass
class DescentStepRecord:
    z1: np.ndarray
    stages: list
    iters: tuple
    r_stages: list | None = None


def _weights(b):
    b = np.array(b, dtype=float).reshape(-1)
    if b.size == 0:
        raise ValueError("need at least one stage")
    if np.any(b == 0.0):
        raise ZeroWeight("descended SyDIRK weights must be nonzero")
    return b


def descend_step(b, sys, z0, h, settings: SolverSettings = DEFAULT_SETTINGS, guess=None) -> DescentStepRecord:
    """One step of the descended SyDIRK method with weights ``b``."""
    b = _weights(b)
    if not h > 0:
        raise ValueError("step size must be positive")
    z0 = np.asarray(z0, dtype=float)
    base = z0.copy()
    stages, iters = [], []
    incr = np.zeros_like(z0)
    for i, bi in enumerate(b):
        c1 = 0.5 * h * bi
        c2 = 0.125 * (h * bi) ** 2
        start = z0 if guess is None else guess[i]
        Z, count = solve_fixed_point(
            lambda Z: base + c1 * sys.g(Z) - c2 * sys.gamma(Z), start, settings, stage=i + 1
        )
        gi = sys.g(Z)
        base = base + h * bi * gi
        incr = incr + bi * gi
        stages.append(Z)
        iters.append(count)
    z1 = z0 + h * incr
    return DescentStepRecord(z1=z1, stages=stages, iters=tuple(iters))


def _solve_factor(mat, rhs, side):
    if np.linalg.cond(mat) > SINGULAR_COND:
        raise SingularFactor(f"Cayley factor is numerically singular (cond > {SINGULAR_COND:g})")
    if side == "left":
        return np.linalg.solve(mat, rhs)
    return np.linalg.solve(mat.T, rhs.T).T


def dcay_step(b, sys, z0, h, settings: SolverSettings = DEFAULT_SETTINGS, guess=None) -> DescentStepRecord:
    """Descended step in factored Cayley form.

    Each stage solves ``Zr_{i-1} = (I - c A) Z_i (I - c B)`` with
    ``c = h b_i / 2`` and ``(A, B) = sys.factors(Z_i)``, then sets
    ``Zr_i = (I + c A) Z_i (I + c B)``. For Lie--Poisson systems
    (``B = -A``) every ``Zr_i`` is similar to ``Zr_{i-1}``.
    """
    if getattr(sys, "factors", None) is None:
        raise TypeError("system does not expose Cayley factors")
    b = _weights(b)
    if not h > 0:
        raise ValueError("step size must be positive")
    n = sys.n
    eye = np.eye(n)
    zr = from_real(np.asarray(z0, dtype=float), n).copy()
    r_stages = [to_real(zr)]
    stages, iters = [], []
    for i, bi in enumerate(b):
        c = 0.5 * h * bi
        prev = zr

        def phi(zv, prev=prev, c=c):
            Z = from_real(zv, n)
            A, B = sys.factors(Z)
            X = _solve_factor(eye - c * A, prev, "left")
            return to_real(_solve_factor(eye - c * B, X, "right"))

        start = r_stages[-1] if guess is None else guess[i]
        zv, count = solve_fixed_point(phi, start, settings, stage=i + 1)
        Z = from_real(zv, n)
        A, B = sys.factors(Z)
        zr = (eye + c * A) @ Z @ (eye + c * B)
        stages.append(zv)
        r_stages.append(to_real(zr))
        iters.append(count)
    return DescentStepRecord(z1=r_stages[-1], stages=stages, iters=tuple(iters), r_stages=r_stages)


def descend_trajectory(
    b,
    sys,
    z0,
    h,
    n_steps,
    settings: SolverSettings = DEFAULT_SETTINGS,
    diagnostics=None,
    keep_states: bool = False,
    stepper=descend_step,
) -> TrajectoryRecord:
    """Repeat ``stepper`` ``n_steps`` times, recording the system's
    diagnostics (or the given ``(name, fn)`` pairs)."""
    if diagnostics is None:
        diagnostics = getattr(sys, "diagnostics", ())
    z = np.asarray(z0, dtype=float)
    rec = TrajectoryRecord.start([name for name, _ in diagnostics], keep_states)
    rec.append(0.0, z, diagnostics, ())
    prev, z_prev = None, z
    for n in range(1, n_steps + 1):
        try:
            step = stepper(b, sys, z, h, settings, guess=shifted_guess(prev, z_prev, z))
        except (NonConvergence, DegenerateSpectrum) as exc:
            exc.at_step(n).record = rec
            raise
        z_prev, z = z, step.z1
        prev = step.stages
        rec.append(n * h, z, diagnostics, step.iters)
    return rec


def observable_law_terms(b, sys, G: Quadratic, z0, h, step: DescentStepRecord):
    """Right-hand side ``G(z0) + h sum b_i G'(Z_i) g(Z_i)
    + (h^3/8) sum b_i^3 G''(g(Z_i), gamma(Z_i))``."""
    b = _weights(b)
    rhs = G.value(z0)
    for bi, Z in zip(b, step.stages):
        gz = sys.g(Z)
        rhs = rhs + h * bi * G.deriv(Z, gz) + 0.125 * h**3 * bi**3 * G.second(gz, sys.gamma(Z))
    return rhs


def observable_law_residual(b, sys, G: Quadratic, z0, h, settings: SolverSettings = DEFAULT_SETTINGS) -> float:
    """Max-norm gap in the exact evolution law of a quadratic ``G`` under
    one descended step."""
    z0 = np.asarray(z0, dtype=float)
    step = descend_step(b, sys, z0, h, settings)
    return float(np.max(np.abs(G.value(step.z1) - observable_law_terms(b, sys, G, z0, h, step))))
