"""Discrete spherical Laplacian on ``u(n)`` built from the spin
``(n-1)/2`` representation, normalized to spectrum ``-l(l+1)``."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..errors import DimensionMismatch, NotAntiHermitian
from .matrices import dagger

PINV_TOL = 1e-12


def spin_generators(n: int):
    """Anti-Hermitian generators ``X_a = i J_a`` of the ``n``-dimensional
    irreducible representation, with ``sum_a J_a^2 = j(j+1) I``."""
    if n < 1:
        raise ValueError("n must be positive")
    j = (n - 1) / 2.0
    m = j - np.arange(n)
    # J_+ raises m: column k (m_k) -> row k-1 (m_k + 1)
    jp = np.zeros((n, n))
    for k in range(1, n):
        jp[k - 1, k] = np.sqrt(j * (j + 1) - m[k] * (m[k] + 1))
    jm = jp.T
    jx = 0.5 * (jp + jm)
    jy = -0.5j * (jp - jm)
    jz = np.diag(m)
    return tuple(1j * np.asarray(x, dtype=complex) for x in (jx, jy, jz))


class DiscreteLaplacian:
    """``W -> sum_a [X_a, [X_a, W]]`` on ``n x n`` complex matrices.

    The operator is complex linear, self-adjoint and negative
    semidefinite for the Frobenius inner product; its kernel is spanned by
    the identity. Use :func:`laplacian` for a cached instance.
    """

    def __init__(self, n: int):
        self.n = n
        self.generators = spin_generators(n)
        eye = np.eye(n)
        op = np.zeros((n * n, n * n), dtype=complex)
        for X in self.generators:
            # row-major vec: vec(X W) = (X (x) I) vec W, vec(W X) = (I (x) X^T) vec W
            ad = np.kron(X, eye) - np.kron(eye, X.T)
            op += ad @ ad
        op = 0.5 * (op + dagger(op))
        evals, evecs = np.linalg.eigh(op)
        self.matrix = op
        self.eigenvalues = evals
        keep = np.abs(evals) > 0.5  # exact spectrum is -l(l+1)
        self._eigvecs = evecs
        self._pinv = (evecs[:, keep] / evals[keep]) @ dagger(evecs[:, keep])
        self._spectral_l = np.rint((-1 + np.sqrt(np.maximum(1 - 4 * evals, 0))) / 2).astype(int)

    def _check(self, W):
        if np.shape(W) != (self.n, self.n):
            raise DimensionMismatch(f"expected {self.n}x{self.n} matrix, got shape {np.shape(W)}")

    def apply(self, W):
        self._check(W)
        out = np.zeros((self.n, self.n), dtype=complex)
        for X in self.generators:
            c = X @ W - W @ X
            out += X @ c - c @ X
        return out

    def pinv(self, W):
        """Pseudoinverse: solve on the trace-free part; result traceless."""
        self._check(W)
        n = self.n
        W0 = W - (np.trace(W) / n) * np.eye(n)
        out = (self._pinv @ W0.reshape(-1)).reshape(n, n)
        return out - (np.trace(out) / n) * np.eye(n)

    def eigenspace(self, degrees):
        """Orthonormal basis (columns of vec'd matrices) for the given
        degrees ``l``."""
        sel = np.isin(self._spectral_l, list(degrees))
        return self._eigvecs[:, sel]


@lru_cache(maxsize=None)
def laplacian(n: int) -> DiscreteLaplacian:
    return DiscreteLaplacian(n)


def laplacian_apply(D: DiscreteLaplacian, W):
    return D.apply(np.asarray(W, dtype=complex))


def laplacian_pinv(D: DiscreteLaplacian, W, tol: float = PINV_TOL):
    """``Delta_n^{-1}(W - tr(W)/n I)`` for anti-Hermitian ``W``."""
    W = np.asarray(W, dtype=complex)
    D._check(W)
    herm = float(np.max(np.abs(W + dagger(W))))
    if herm > tol * max(1.0, float(np.max(np.abs(W)))):
        raise NotAntiHermitian(f"input is not anti-Hermitian (|W + W^dagger| = {herm:.3e})")
    return D.pinv(W)
