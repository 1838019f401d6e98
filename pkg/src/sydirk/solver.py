"""Iterative solution of implicit stage equations ``x = phi(x)``."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence


class Strategy(enum.Enum):
    FIXED_POINT = "fixed_point"
    NEWTON_FALLBACK = "newton_fallback"


@dataclass(frozen=True)
class SolverSettings:
    """Stage solver controls.

    Convergence is declared when ``max|phi(x) - x| <= tol * (1 + max|x|)``.
    With ``NEWTON_FALLBACK`` a fixed-point iteration that reduces the
    residual by less than 10% per sweep is handed to a finite-difference
    Newton solve.
    """

    tol: float = 1e-14
    max_iter: int = 200
    strategy: Strategy = Strategy.FIXED_POINT

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        object.__setattr__(self, "strategy", Strategy(self.strategy))


DEFAULT_SETTINGS = SolverSettings()

# sweeps before a stall may trigger the Newton fallback
_STALL_GRACE = 3


def _inf(x):
    return float(np.max(np.abs(x))) if x.size else 0.0


def solve_fixed_point(phi, x0, settings: SolverSettings = DEFAULT_SETTINGS, stage=None):
    """Solve ``x = phi(x)`` starting from ``x0``.

    Returns ``(x, iterations)``; iterations counts fixed-point sweeps plus
    Newton updates (Jacobian columns are not counted). Raises
    :class:`NonConvergence` with the last residual.
    """
    x = np.array(x0, dtype=float)
    prev = np.inf
    res = np.inf
    for it in range(1, settings.max_iter + 1):
        x_new = phi(x)
        res = _inf(x_new - x)
        x = x_new
        if not np.isfinite(res):
            raise NonConvergence(stage, it, res)
        if res <= settings.tol * (1.0 + _inf(x)):
            return x, it
        if (
            settings.strategy is Strategy.NEWTON_FALLBACK
            and it >= _STALL_GRACE
            and res > 0.9 * prev
        ):
            return _newton(phi, x, settings, stage, it)
        prev = res
    raise NonConvergence(stage, settings.max_iter, res)


def _jacobian(residual, x, r0):
    n = x.size
    jac = np.empty((n, n))
    for k in range(n):
        dx = np.sqrt(np.finfo(float).eps) * max(1.0, abs(x[k]))
        xp = x.copy()
        xp[k] += dx
        jac[:, k] = (residual(xp) - r0) / dx
    return jac


def _newton(phi, x, settings, stage, used):
    def residual(v):
        return v - phi(v)

    it = used
    r = residual(x)
    it += 1
    jac = None
    while it < settings.max_iter:
        if jac is None:
            jac = _jacobian(residual, x, r)
        try:
            dx = np.linalg.solve(jac, r)
        except np.linalg.LinAlgError:
            raise NonConvergence(stage, it, _inf(r)) from None
        x = x - dx
        r_new = residual(x)
        it += 1
        res = _inf(r_new)
        if not np.isfinite(res):
            raise NonConvergence(stage, it, res)
        if res <= settings.tol * (1.0 + _inf(x)):
            return x - r_new, it
        if res > 0.5 * _inf(r):
            jac = None  # slow contraction: refresh the Jacobian
        r = r_new
    raise NonConvergence(stage, it, _inf(r))
