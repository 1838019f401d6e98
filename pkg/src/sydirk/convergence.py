"""Step-halving ladders for measuring the observed order of a method."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .descent import descend_trajectory
from .equivalence import stage_order
from .rk import rk_trajectory
from .solver import DEFAULT_SETTINGS, SolverSettings
from .tableau import ButcherTableau

MODES = ("descended", "full")


@dataclass(frozen=True)
class ConvergenceRow:
    level: int
    h: float
    steps: int
    error: float
    order: float | None


def _steps_for(h, t_end):
    n = int(round(t_end / h))
    if n < 1 or abs(n * h - t_end) > 1e-9 * max(1.0, abs(t_end)):
        raise ValueError(f"t_end={t_end!r} is not a whole number of steps of size {h!r}")
    return n


def final_state(t: ButcherTableau, sys, y0, h, t_end, mode="descended", settings=DEFAULT_SETTINGS):
    """``z`` at ``t_end``; in full mode the full-space state is mapped
    through ``F``."""
    n = _steps_for(h, t_end)
    if mode == "descended":
        b = t.b[list(stage_order(t))]
        rec = descend_trajectory(b, sys.reduced, sys.F.value(y0), h, n, settings, diagnostics=())
        return rec.z_final
    if mode == "full":
        rec = rk_trajectory(t, sys.f, y0, h, n, settings)
        return sys.F.value(rec.z_final)
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def convergence_study(
    t: ButcherTableau,
    sys,
    y0,
    h0: float,
    levels: int,
    t_end: float,
    mode: str = "descended",
    settings: SolverSettings = DEFAULT_SETTINGS,
) -> list[ConvergenceRow]:
    """Errors at ``h0, h0/2, ...`` (``levels`` runs) against a reference
    run of the same method at ``h0 / 2^(levels + 2)``; ``order`` is
    ``log2(e_{k-1} / e_k)``."""
    if levels < 3:
        raise ValueError("levels must be at least 3")
    if not h0 > 0:
        raise ValueError("h0 must be positive")
    y0 = np.asarray(y0, dtype=float)
    ref = final_state(t, sys, y0, h0 / 2 ** (levels + 2), t_end, mode, settings)
    rows = []
    prev = None
    for k in range(levels):
        h = h0 / 2**k
        err = float(np.max(np.abs(final_state(t, sys, y0, h, t_end, mode, settings) - ref)))
        order = None if prev is None else math.log2(prev / err)
        rows.append(ConvergenceRow(k, h, _steps_for(h, t_end), err, order))
        prev = err
    return rows


def fitted_order(rows) -> float:
    """Least-squares slope of ``log2(error)`` against ``log2(h)``."""
    h = np.log2([r.h for r in rows])
    e = np.log2([r.error for r in rows])
    return float(np.polyfit(h, e, 1)[0])
