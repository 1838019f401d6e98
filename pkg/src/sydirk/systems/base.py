from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..descent import ReducedSystem
from ..errors import SydirkError
from ..rk import Quadratic

CONSISTENCY_TOL = 1e-10


class ConsistencyError(SydirkError):
    pass


def _identity(v):
    return np.asarray(v, dtype=float)


@dataclass(frozen=True, eq=False)
class ProjectableSystem:
    """A vector field ``f`` on ``Y`` with a quadratic ``F: Y -> Z`` and the
    fields ``g``, ``gamma`` on ``Z`` it projects to.

    All states are flat real vectors; ``encode_z``/``decode_z`` convert to
    and from the natural representation (matrices, pairs of matrices).
    ``sample_y`` draws generic points of ``Y`` for the consistency checks,
    ``initial_state`` draws a default ``z0`` and ``lift`` returns some
    ``y0`` with ``F(y0) = z0``.
    """

    name: str
    dim_y: int
    dim_z: int
    f: Callable
    F: Quadratic
    g: Callable
    gamma: Callable
    diagnostics: tuple = ()
    sample_y: Callable | None = None
    initial_state: Callable | None = None
    lift: Callable | None = None
    factors: Callable | None = None
    n: int | None = None
    family: str = ""
    encode_z: Callable = _identity
    decode_z: Callable = _identity
    params: dict = field(default_factory=dict)

    @property
    def diagnostic_names(self):
        return [name for name, _ in self.diagnostics]

    @property
    def reduced(self) -> ReducedSystem:
        return ReducedSystem(self.dim_z, self.g, self.gamma, self.factors, self.n)

    def consistency_residuals(self, samples=100, rng=None):
        """Worst relative gaps of ``F'(y) f(y) = g(F(y))`` and
        ``F''(f(y), f(y)) = gamma(F(y))`` over random ``y``."""
        rng = np.random.default_rng(rng)
        rel = gam = 0.0
        for _ in range(samples):
            y = self.sample_y(rng)
            fy = self.f(y)
            z = self.F.value(y)
            gz = self.g(z)
            rel = max(rel, np.max(np.abs(self.F.deriv(y, fy) - gz)) / (1 + np.max(np.abs(gz))))
            cz = self.gamma(z)
            gam = max(gam, np.max(np.abs(self.F.second(fy, fy) - cz)) / (1 + np.max(np.abs(cz))))
        return float(rel), float(gam)

    def check_consistency(self, samples=8, rng=12345, tol=CONSISTENCY_TOL):
        rel, gam = self.consistency_residuals(samples, rng)
        if rel > tol or gam > tol:
            raise ConsistencyError(
                f"{self.name}: F-relatedness residual {rel:.3e}, gamma residual {gam:.3e} (tol {tol:g})"
            )
        return self
