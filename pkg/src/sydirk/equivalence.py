"""Run the full-space SyDIRK method and its descended counterpart side by
side and measure how far ``F`` of the full-space stages and states is
from the descended ones."""
from __future__ import annotations

import numpy as np

from .descent import descend_step
from .errors import DegenerateSpectrum, NonConvergence
from .record import TrajectoryRecord
from .rk import rk_step, shifted_guess
from .solver import DEFAULT_SETTINGS, SolverSettings
from .tableau import ButcherTableau, MethodClass, classify


def stage_order(t: ButcherTableau):
    c = classify(t)
    if c.method_class is not MethodClass.SYDIRK:
        raise ValueError(f"tableau is {c.method_class}, not SyDIRK")
    return c.dirk_permutation


def step_deviation(F, full_stages, y1, desc_stages, z1, order):
    """Largest max-norm gap over stages (matched through ``order``) and
    the step."""
    dev = float(np.max(np.abs(F.value(y1) - z1)))
    for k, i in enumerate(order):
        dev = max(dev, float(np.max(np.abs(F.value(full_stages[i]) - desc_stages[k]))))
    return dev


def lockstep_trajectory(
    t: ButcherTableau,
    sys,
    y0,
    h,
    n_steps,
    settings: SolverSettings = DEFAULT_SETTINGS,
    keep_states: bool = False,
) -> TrajectoryRecord:
    """Both trajectories from ``y0`` and ``z0 = F(y0)``.

    Diagnostics are evaluated on the descended state; ``deviations`` holds
    the per-step worst gap (zero for the initial row, since ``z0 = F(y0)``).
    A step where either solve fails raises before anything is recorded for
    it; the partial record is attached to the exception as ``record``.
    """
    order = stage_order(t)
    b = t.b[list(order)]
    y = np.asarray(y0, dtype=float)
    z = sys.F.value(y)
    diagnostics = sys.diagnostics
    rec = TrajectoryRecord.start([name for name, _ in diagnostics], keep_states)
    rec.append(0.0, z, diagnostics, (), deviation=0.0)
    full_prev = desc_prev = None
    y_prev, z_prev = y, z
    for n in range(1, n_steps + 1):
        try:
            full = rk_step(t, sys.f, y, h, settings, guess=shifted_guess(full_prev, y_prev, y))
            desc = descend_step(b, sys.reduced, z, h, settings, guess=shifted_guess(desc_prev, z_prev, z))
        except (NonConvergence, DegenerateSpectrum) as exc:
            exc.at_step(n).record = rec
            raise
        dev = step_deviation(sys.F, full.stages, full.y1, desc.stages, desc.z1, order)
        y_prev, y = y, full.y1
        z_prev, z = z, desc.z1
        full_prev, desc_prev = full.stages, desc.stages
        iters = tuple(max(full.iters[i], desc.iters[k]) for k, i in enumerate(order))
        rec.append(n * h, z, diagnostics, iters, deviation=dev)
    return rec
