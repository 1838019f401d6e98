"""Scalar flows on ``|y|^2`` driven by octonion left multiplication."""
from __future__ import annotations

import numpy as np

from ..algebra.hypercomplex import omul, ore
from ..rk import Quadratic
from .base import ProjectableSystem

DEFAULT_A = np.array([-0.3, 0.5, 0.2, -0.4, 0.1, 0.3, -0.2, 0.6])


class SquaredNorm(Quadratic):
    dim_z = 1

    def __init__(self, dim_y):
        self.dim_y = dim_y

    def value(self, y):
        return np.array([np.dot(y, y)])

    def deriv(self, y, v):
        return np.array([2.0 * np.dot(y, v)])

    def second(self, u, v):
        return np.array([2.0 * np.dot(u, v)])


def constant_octonion(x):
    x = np.array(x, dtype=float).reshape(8)
    return lambda z: x


def octonion_flow(a=None, product=omul, check=True) -> ProjectableSystem:
    """``y' = 1/2 a(|y|^2) y`` on octonions, projecting to
    ``z' = Re(a(z)) z`` on ``z = |y|^2``.

    ``a`` maps a length-1 array to an octonion; the default is a constant.
    ``product`` can be swapped to check that the projection relies on the
    multiplication being alternative.
    """
    if a is None:
        a = constant_octonion(DEFAULT_A)
    F = SquaredNorm(8)

    def f(y):
        return 0.5 * product(a(F.value(y)), y)

    def g(z):
        return ore(a(z)) * z

    def gamma(z):
        x = a(z)
        return 0.5 * float(np.dot(x, x)) * z

    def lift(z, rng=None):
        rng = np.random.default_rng(rng)
        u = rng.standard_normal(8)
        return np.sqrt(float(z[0])) * u / np.linalg.norm(u)

    sys = ProjectableSystem(
        name="octonion_flow",
        dim_y=8,
        dim_z=1,
        f=f,
        F=F,
        g=g,
        gamma=gamma,
        diagnostics=(("z", lambda z: float(z[0])),),
        sample_y=lambda rng: rng.standard_normal(8),
        initial_state=lambda rng: np.array([1.0]),
        lift=lift,
        family="octonion",
    )
    return sys.check_consistency() if check else sys
