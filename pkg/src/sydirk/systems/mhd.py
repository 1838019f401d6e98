"""Semidirect-product (MHD-type) matrix flow on pairs ``(w, theta)``.

The full space holds block matrices

    Q = [[q1, q2^dagger], [0, q1]],   P = [[p2^dagger, 0], [p1, p2^dagger]]

so that ``Q^dagger P = [[theta^dagger, 0], [w, theta^dagger]]``.
"""
from __future__ import annotations

import numpy as np

from ..algebra.laplacian import laplacian
from ..algebra.matrices import commutator, dagger, from_real, random_complex, to_real
from ..rk import Quadratic
from .base import ProjectableSystem
from .matrix import LIFT_SPREAD, band_limited_vorticity


def _blocks(y, n):
    q1, q2, p1, p2 = from_real(y, n, 4)
    Z = np.zeros((n, n), dtype=complex)
    Q = np.block([[q1, dagger(q2)], [Z, q1]])
    P = np.block([[dagger(p2), Z], [p1, dagger(p2)]])
    return Q, P


def _z_from_block(X, n):
    """``(w, theta)`` from ``[[theta^dagger, 0], [w, theta^dagger]]``."""
    return to_real(X[n:, :n], dagger(X[:n, :n]))


class SemidirectQuadratic(Quadratic):
    def __init__(self, n):
        self.n = n
        self.dim_y = 8 * n * n
        self.dim_z = 4 * n * n

    def _bil(self, u, v):
        Qu, _ = _blocks(u, self.n)
        _, Pv = _blocks(v, self.n)
        return _z_from_block(dagger(Qu) @ Pv, self.n)

    def value(self, y):
        return self._bil(y, y)

    def deriv(self, y, v):
        return self._bil(v, y) + self._bil(y, v)

    def second(self, u, v):
        return self._bil(u, v) + self._bil(v, u)


def semidirect_mhd(n, M1=None, M2=None, check=True) -> ProjectableSystem:
    """Semidirect flow with closures ``M1(w)`` and ``M2(theta)``.

    Both closures default to the Laplacian pseudoinverse, which maps
    su(n) into su(n); they are placeholders, not a physical model.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    D = laplacian(n)
    if M1 is None:
        M1 = D.pinv
    if M2 is None:
        M2 = D.pinv
    F = SemidirectQuadratic(n)

    def f(y):
        Q, P = _blocks(y, n)
        w, th = from_real(_z_from_block(dagger(Q) @ P, n), n, 2)
        m1, m2 = M1(w), M2(th)
        Z = np.zeros((n, n), dtype=complex)
        Mb = np.block([[m1, dagger(m2)], [Z, m1]])
        QM = Q @ Mb
        PM = -P @ dagger(Mb)
        return to_real(QM[:n, :n], dagger(QM[:n, n:]), PM[n:, :n], dagger(PM[:n, :n]))

    def g(zv):
        w, th = from_real(zv, n, 2)
        m1, m2 = M1(w), M2(th)
        return to_real(commutator(dagger(m1), w) + commutator(m2, dagger(th)), commutator(th, m1))

    def gamma(zv):
        w, th = from_real(zv, n, 2)
        m1, m2 = M1(w), M2(th)
        m1d = dagger(m1)
        gw = m1d @ w @ m1d + m1d @ dagger(th) @ m2 + m2 @ dagger(th) @ m1d
        return to_real(-2.0 * gw, -2.0 * m1 @ th @ m1)

    def lift(zv, rng=None):
        rng = np.random.default_rng(rng)
        w, th = from_real(zv, n, 2)
        q1 = np.eye(n) + LIFT_SPREAD * random_complex(n, rng)
        q2 = LIFT_SPREAD * random_complex(n, rng)
        # theta^dagger = q1^dagger p2^dagger, w = q1^dagger p1 + q2 p2^dagger
        p2 = dagger(np.linalg.solve(dagger(q1), dagger(th)))
        p1 = np.linalg.solve(dagger(q1), w - q2 @ dagger(p2))
        return to_real(q1, q2, p1, p2)

    def initial_state(rng):
        w = band_limited_vorticity(n, rng)
        th = 0.5 * band_limited_vorticity(n, rng)
        return to_real(w, th)

    def norm_of(k):
        return lambda zv: float(np.linalg.norm(from_real(zv, n, 2)[k]))

    def cross_helicity(zv):
        w, th = from_real(zv, n, 2)
        return float(np.real(np.vdot(w, th)))

    sys = ProjectableSystem(
        name="semidirect_mhd",
        dim_y=8 * n * n,
        dim_z=4 * n * n,
        f=f,
        F=F,
        g=g,
        gamma=gamma,
        diagnostics=(("w_norm", norm_of(0)), ("theta_norm", norm_of(1)), ("cross_helicity", cross_helicity)),
        sample_y=lambda rng: to_real(*(random_complex(n, rng) for _ in range(4))),
        initial_state=initial_state,
        lift=lift,
        n=n,
        family="semidirect",
        encode_z=lambda pair: to_real(*pair),
        decode_z=lambda v: tuple(m.copy() for m in from_real(v, n, 2)),
        params={"n": n},
    )
    return sys.check_consistency() if check else sys
