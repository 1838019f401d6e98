"""Free rigid body on ``R^3`` lifted to quaternions through the Hopf map."""
from __future__ import annotations

import numpy as np

from ..algebra.hypercomplex import K, hopf_map, imag, qconj, qmul, pure
from ..rk import Quadratic
from .base import ProjectableSystem

DEFAULT_INERTIA = (1.0, 2.0, 3.0)


class HopfQuadratic(Quadratic):
    """``F(y) = 1/4 y k y*`` on quaternions, valued in ``R^3``."""

    dim_y = 4
    dim_z = 3

    def value(self, y):
        return hopf_map(y)

    def _bil(self, u, v):
        return 0.25 * imag(qmul(qmul(u, K), qconj(v)))

    def deriv(self, y, v):
        return self._bil(v, y) + self._bil(y, v)

    def second(self, u, v):
        return self._bil(u, v) + self._bil(v, u)


def _rotation_to(target):
    """Unit quaternion ``u`` with ``u k u* = target`` for a unit vector."""
    target = np.asarray(target, dtype=float)
    axis = np.cross([0.0, 0.0, 1.0], target)
    c = np.clip(target[2], -1.0, 1.0)
    s = np.linalg.norm(axis)
    if s < 1e-12:
        return np.array([1.0, 0, 0, 0]) if c > 0 else np.array([0.0, 1.0, 0, 0])
    half = 0.5 * np.arctan2(s, c)
    return np.concatenate([[np.cos(half)], np.sin(half) * axis / s])


def hopf_rigid_body(inertia=DEFAULT_INERTIA, check=True) -> ProjectableSystem:
    """Rigid body with energy ``1/2 sum z_a^2 / I_a``."""
    inertia = np.asarray(inertia, dtype=float).reshape(-1)
    if inertia.shape != (3,) or np.any(inertia <= 0):
        raise ValueError("inertia must be three positive numbers")
    inv = 1.0 / inertia
    F = HopfQuadratic()

    def grad(z):
        return inv * z

    def f(y):
        return -0.5 * qmul(pure(grad(F.value(y))), y)

    def g(z):
        return np.cross(z, grad(z))

    def gamma(z):
        w = grad(z)
        return np.cross(np.cross(z, w), w) + 0.5 * z * np.dot(w, w)

    def lift(z, rng=None):
        z = np.asarray(z, dtype=float)
        r = np.linalg.norm(z)
        if r == 0.0:
            return np.zeros(4)
        # |F(y)| = |y|^2 / 4
        return 2.0 * np.sqrt(r) * _rotation_to(z / r)

    def initial_state(rng):
        v = rng.standard_normal(3)
        return v / np.linalg.norm(v)

    sys = ProjectableSystem(
        name="hopf_rigid_body",
        dim_y=4,
        dim_z=3,
        f=f,
        F=F,
        g=g,
        gamma=gamma,
        diagnostics=(
            ("energy", lambda z: 0.5 * float(np.dot(z, grad(z)))),
            ("casimir_norm", lambda z: float(np.linalg.norm(z))),
        ),
        sample_y=lambda rng: rng.standard_normal(4),
        initial_state=initial_state,
        lift=lift,
        family="quaternion",
        params={"inertia": inertia.tolist()},
    )
    return sys.check_consistency() if check else sys
