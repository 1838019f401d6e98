"""Quaternions and octonions stored as trailing-axis float arrays.

A quaternion ``w + x i + y j + z k`` is an array ``[w, x, y, z]``; an
octonion is a pair of quaternions ``(q, p)`` concatenated into 8
components. All functions broadcast over leading axes.
"""
from __future__ import annotations

import numpy as np

ONE = np.array([1.0, 0.0, 0.0, 0.0])
I = np.array([0.0, 1.0, 0.0, 0.0])
J = np.array([0.0, 0.0, 1.0, 0.0])
K = np.array([0.0, 0.0, 0.0, 1.0])


def qmul(p, q):
    """Hamilton product ``p q``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    pw, px, py, pz = np.moveaxis(p, -1, 0)
    qw, qx, qy, qz = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ],
        axis=-1,
    )


def qconj(q):
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def qnorm(q):
    return np.linalg.norm(q, axis=-1)


def pure(v):
    """Embed ``R^3`` as purely imaginary quaternions."""
    v = np.asarray(v, dtype=float)
    return np.concatenate([np.zeros(v.shape[:-1] + (1,)), v], axis=-1)


def imag(q):
    return np.asarray(q)[..., 1:]


def hopf_map(y):
    """``1/4 y k y*`` as a vector in ``R^3`` (the imaginary part)."""
    return 0.25 * imag(qmul(qmul(y, K), qconj(y)))


# --- octonions via Cayley--Dickson ---------------------------------------

def _halves(x):
    x = np.asarray(x, dtype=float)
    return x[..., :4], x[..., 4:]


def omul(x, y):
    """Cayley--Dickson product ``(q, p)(r, s) = (q r - s* p, s q + p r*)``."""
    q, p = _halves(x)
    r, s = _halves(y)
    return np.concatenate(
        [qmul(q, r) - qmul(qconj(s), p), qmul(s, q) + qmul(p, qconj(r))], axis=-1
    )


def oconj(x):
    """``(q, p)* = (q*, -p)``."""
    q, p = _halves(x)
    return np.concatenate([qconj(q), -p], axis=-1)


def onorm(x):
    return np.linalg.norm(x, axis=-1)


def ore(x):
    """Real part ``(x + x*)/2``."""
    return np.asarray(x)[..., 0]


OCT_ONE = np.eye(8)[0]


def associator(x, y, z, mul=omul):
    return mul(mul(x, y), z) - mul(x, mul(y, z))


def left_mult_matrix(x, mul=omul, dim=8):
    """Matrix of ``L_x: y -> x y``."""
    basis = np.eye(dim)
    return mul(np.broadcast_to(x, basis.shape), basis).T


def right_mult_matrix(x, mul=omul, dim=8):
    """Matrix of ``R_x: y -> y x``."""
    basis = np.eye(dim)
    return mul(basis, np.broadcast_to(x, basis.shape)).T
