from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class TrajectoryRecord:
    """Time series produced by the trajectory drivers.

    ``diagnostics`` maps each diagnostic name to one value per recorded
    step; ``stage_iters`` holds the per-stage iteration counts of each
    step (empty for the initial row). ``deviations`` is only filled when a
    full-space and a descended run are compared in lockstep.
    """

    names: list[str]
    times: list[float] = field(default_factory=list)
    diagnostics: dict[str, list[float]] = field(default_factory=dict)
    stage_iters: list[tuple] = field(default_factory=list)
    states: list[np.ndarray] | None = None
    deviations: list[float] | None = None
    z_final: np.ndarray | None = None

    @classmethod
    def start(cls, names, keep_states=False):
        return cls(
            names=list(names),
            diagnostics={name: [] for name in names},
            states=[] if keep_states else None,
        )

    def append(self, time, z, diagnostics, iters, state=None, deviation=None):
        self.times.append(float(time))
        for name, fn in diagnostics:
            self.diagnostics[name].append(float(fn(z)))
        self.stage_iters.append(tuple(iters))
        if self.states is not None:
            self.states.append(np.array(z if state is None else state, copy=True))
        if deviation is not None:
            if self.deviations is None:
                self.deviations = [float("nan")] * (len(self.times) - 1)
            self.deviations.append(float(deviation))
        self.z_final = np.array(z, copy=True)

    def __len__(self):
        return len(self.times)

    def column(self, name) -> np.ndarray:
        return np.asarray(self.diagnostics[name])
