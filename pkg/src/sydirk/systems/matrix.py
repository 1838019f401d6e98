"""Matrix flows lifted to pairs ``(q, p)`` through ``F(q, p) = q^dagger p``:
Lie--Poisson systems, general flows via the L/P splitting, and the
Zeitlin model."""
from __future__ import annotations

import numpy as np

from ..algebra.laplacian import laplacian
from ..algebra.matrices import (
    commutator,
    dagger,
    from_real,
    inner,
    lp_split,
    random_complex,
    random_u,
    to_real,
)
from ..rk import Quadratic
from .base import ProjectableSystem

LIFT_SPREAD = 0.3


class DaggerProduct(Quadratic):
    """``F(q, p) = q^dagger p`` for pairs of ``n x n`` complex matrices."""

    def __init__(self, n):
        self.n = n
        self.dim_y = 4 * n * n
        self.dim_z = 2 * n * n

    def value(self, y):
        q, p = from_real(y, self.n, 2)
        return to_real(dagger(q) @ p)

    def deriv(self, y, v):
        q, p = from_real(y, self.n, 2)
        dq, dp = from_real(v, self.n, 2)
        return to_real(dagger(dq) @ p + dagger(q) @ dp)

    def second(self, u, v):
        uq, up = from_real(u, self.n, 2)
        vq, vp = from_real(v, self.n, 2)
        return to_real(dagger(uq) @ vp + dagger(vq) @ up)


def eigen_diagnostics(n):
    """Sorted eigenvalues of ``z`` as ``eig<k>_re`` / ``eig<k>_im`` columns."""

    def pick(k, part):
        def fn(z):
            lam = np.sort_complex(np.linalg.eigvals(from_real(z, n)))
            return float(getattr(lam[k], part))

        return fn

    out = []
    for k in range(n):
        out.append((f"eig{k + 1}_re", pick(k, "real")))
        out.append((f"eig{k + 1}_im", pick(k, "imag")))
    return tuple(out)


def _frobenius(n):
    return ("frobenius", lambda z: float(np.linalg.norm(from_real(z, n))))


def _trace_abs(n):
    return ("trace_abs", lambda z: float(abs(np.trace(from_real(z, n)))))


def lift_pair(z, n, rng):
    """Some ``(q, p)`` with ``q^dagger p = z``; ``q`` is a random
    well-conditioned matrix."""
    rng = np.random.default_rng(rng)
    q = np.eye(n) + LIFT_SPREAD * random_complex(n, rng)
    p = np.linalg.solve(dagger(q), z)
    return to_real(q, p)


def _matrix_system(name, n, g_mat, mn, diagnostics, initial_state, family="matrix", params=None):
    """Assemble a system from ``g`` on matrices and ``mn(z) -> (M^dagger, N)``
    with ``g(z) = M^dagger z + z N``; then ``gamma = 2 M^dagger z N`` and
    the lift is ``f(q, p) = (q M, p N)``."""
    F = DaggerProduct(n)

    def f(y):
        q, p = from_real(y, n, 2)
        md, N = mn(dagger(q) @ p)
        return to_real(q @ dagger(md), p @ N)

    def g(zv):
        return to_real(g_mat(from_real(zv, n)))

    def gamma(zv):
        z = from_real(zv, n)
        md, N = mn(z)
        return to_real(2.0 * md @ z @ N)

    def factors(z):
        return mn(z)

    def sample_y(rng):
        return to_real(random_complex(n, rng), random_complex(n, rng))

    return ProjectableSystem(
        name=name,
        dim_y=4 * n * n,
        dim_z=2 * n * n,
        f=f,
        F=F,
        g=g,
        gamma=gamma,
        diagnostics=tuple(diagnostics),
        sample_y=sample_y,
        initial_state=initial_state,
        lift=lambda z, rng=None: lift_pair(from_real(z, n), n, rng),
        factors=factors,
        n=n,
        family=family,
        encode_z=lambda z: to_real(z),
        decode_z=lambda v: from_real(v, n).copy(),
        params=dict(params or {}),
    )


def rigid_weights(n):
    """Symmetric positive weights for the default Lie--Poisson energy."""
    i = np.arange(n)
    return 1.0 + 0.5 * (i[:, None] + i[None, :]) / n


def matrix_lie_poisson(n, grad_eta=None, eta=None, check=True) -> ProjectableSystem:
    """``z' = ad*_{grad eta(z)} z`` lifted to ``(q, p)``.

    Without arguments the energy is the weighted quadratic
    ``1/2 sum_ij J_ij |z_ij|^2`` with :func:`rigid_weights`.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if grad_eta is None:
        J = rigid_weights(n)

        def grad_eta(z):
            return J * z

        def eta(z):
            return 0.5 * float(np.sum(J * np.abs(z) ** 2))

    def mn(z):
        gd = dagger(grad_eta(z))
        return gd, -gd

    def g_mat(z):
        gd = dagger(grad_eta(z))
        return gd @ z - z @ gd

    def initial_state(rng):
        z = random_u(n, rng)
        return to_real(z / np.linalg.norm(z))

    diags = []
    if eta is not None:
        diags.append(("eta", lambda zv: float(eta(from_real(zv, n)))))
    diags += list(eigen_diagnostics(n)) + [_frobenius(n)]
    sys = _matrix_system("matrix_lie_poisson", n, g_mat, mn, diags, initial_state, params={"n": n})
    return sys.check_consistency() if check else sys


def split_factors(g_mat, eig_tol=None):
    """``z -> (M^dagger, N)`` from the L/P splitting of ``g(z)``."""
    kw = {} if eig_tol is None else {"eig_tol": eig_tol}

    def mn(z):
        sp = lp_split(z, g_mat(z), **kw)
        return sp.M_dagger, sp.N

    return mn


def damped_commutator(n, seed=0, kappa=0.1):
    """``z -> [A, z] - kappa (B z + z B)`` with seeded anti-Hermitian ``A``
    and positive semidefinite ``B``."""
    rng = np.random.default_rng(seed)
    A = random_u(n, rng)
    C = random_complex(n, rng)
    B = C @ dagger(C) / n

    def g_mat(z):
        return commutator(A, z) - kappa * (B @ z + z @ B)

    g_mat.A = A
    g_mat.B = B
    return g_mat


def general_matrix_flow(n, g=None, seed=0, kappa=0.1, check=True) -> ProjectableSystem:
    """Arbitrary matrix flow ``z' = g(z)``; ``M`` and ``N`` come from the
    L/P splitting at each evaluation, so ``z`` must have distinct nonzero
    eigenvalues."""
    if n < 2:
        raise ValueError("n must be at least 2")
    g_mat = damped_commutator(n, seed, kappa) if g is None else g

    def initial_state(rng):
        z = random_u(n, rng)
        return to_real(z / np.linalg.norm(z))

    sys = _matrix_system(
        "general_matrix_flow",
        n,
        g_mat,
        split_factors(g_mat),
        [_frobenius(n), _trace_abs(n)],
        initial_state,
        params={"n": n, "seed": seed, "kappa": kappa},
    )
    return sys.check_consistency() if check else sys


def band_limited_vorticity(n, rng, degrees=(1, 2, 3)):
    """Random element of su(n) built from low-degree Laplacian
    eigenmodes, scaled to enstrophy ``1/2 |w|^2 = 1``."""
    D = laplacian(n)
    basis = D.eigenspace([l for l in degrees if l < n])
    c = rng.standard_normal(basis.shape[1]) + 1j * rng.standard_normal(basis.shape[1])
    w = (basis @ c).reshape(n, n)
    w = 0.5 * (w - dagger(w))
    w -= (np.trace(w) / n) * np.eye(n)
    return w * (np.sqrt(2.0) / np.linalg.norm(w))


def zeitlin_ns(n, nu=0.0, check=True) -> ProjectableSystem:
    """``w' = [Delta^+ w, w] + nu Delta w`` on ``u(n)``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if nu < 0:
        raise ValueError("viscosity must be nonnegative")
    D = laplacian(n)

    def g_mat(w):
        out = commutator(D.pinv(w), w)
        if nu:
            out = out + nu * D.apply(w)
        return out

    def energy(zv):
        w = from_real(zv, n)
        return -0.5 * inner(D.pinv(w), w)

    def enstrophy(zv):
        return 0.5 * float(np.linalg.norm(from_real(zv, n)) ** 2)

    sys = _matrix_system(
        "zeitlin_ns",
        n,
        g_mat,
        split_factors(g_mat),
        [("energy", energy), ("enstrophy", enstrophy), _trace_abs(n)],
        lambda rng: to_real(band_limited_vorticity(n, rng)),
        params={"n": n, "nu": nu},
    )
    return sys.check_consistency() if check else sys
