"""Checks of the operator-family structure behind each system: the lift
``F'(y) T y = beta(T) F(y)``, the Jordan identity
``[beta(T)^2 - beta(T^2)] F(y) = F''(Ty, Ty)`` with its closed forms, and
momentum-map identities for canonical symplectic forms."""
from __future__ import annotations

import numpy as np

from ..algebra.hypercomplex import K, imag, omul, ore, pure, qconj, qmul
from ..algebra.matrices import dagger, from_real, random_complex, to_real
from .mhd import _blocks, _z_from_block


def _worst(report, key, a, b):
    report[key] = max(report.get(key, 0.0), float(np.max(np.abs(np.asarray(a) - np.asarray(b)))))


def _matrix_case(sys, rng, report):
    n = sys.n
    y = sys.sample_y(rng)
    M, N = random_complex(n, rng), random_complex(n, rng)
    Md = dagger(M)
    q, p = from_real(y, n, 2)
    z = from_real(sys.F.value(y), n)
    Ty = to_real(q @ M, p @ N)
    beta = lambda A, B, x: A @ x + x @ B
    _worst(report, "lift", sys.F.deriv(y, Ty), to_real(beta(Md, N, z)))
    jordan = beta(Md, N, beta(Md, N, z)) - beta(dagger(M @ M), N @ N, z)
    second = from_real(sys.F.second(Ty, Ty), n)
    _worst(report, "jordan", second, jordan)
    _worst(report, "jordan_closed_form", second, 2.0 * Md @ z @ N)


def _semidirect_case(sys, rng, report):
    n = sys.n
    y = sys.sample_y(rng)
    m1, m2 = random_complex(n, rng), random_complex(n, rng)
    Zr = np.zeros((n, n), dtype=complex)
    M = np.block([[m1, dagger(m2)], [Zr, m1]])
    Q, P = _blocks(y, n)
    Zb = dagger(Q) @ P

    def apply(A):
        QA, PA = Q @ A, -P @ dagger(A)
        return to_real(QA[:n, :n], dagger(QA[:n, n:]), PA[n:, :n], dagger(PA[:n, :n]))

    Ty = apply(M)
    Md = dagger(M)
    _worst(report, "lift", sys.F.deriv(y, Ty), _z_from_block(Md @ Zb - Zb @ Md, n))
    _worst(report, "jordan_closed_form", sys.F.second(Ty, Ty), _z_from_block(-2.0 * Md @ Zb @ Md, n))


def _quaternion_case(sys, rng, report):
    y = rng.standard_normal(4)
    x = rng.standard_normal(4)
    zq = pure(sys.F.value(y))
    Ty = qmul(x, y)
    lift = qmul(x, zq) + qmul(zq, qconj(x))
    _worst(report, "lift", pure(sys.F.deriv(y, Ty)), lift)
    beta = lambda a, v: qmul(a, v) + qmul(v, qconj(a))
    jordan = beta(x, beta(x, zq)) - beta(qmul(x, x), zq)
    second = pure(sys.F.second(Ty, Ty))
    _worst(report, "jordan", second, jordan)
    _worst(report, "jordan_closed_form", second, 2.0 * qmul(qmul(x, zq), qconj(x)))


def _octonion_case(sys, rng, report):
    y = rng.standard_normal(8)
    x = rng.standard_normal(8)
    z = sys.F.value(y)
    Ty = omul(x, y)
    _worst(report, "lift", sys.F.deriv(y, Ty), 2.0 * ore(x) * z)
    # beta(L_x) = 2 Re(x); L_x^2 = L_{x^2} by alternativity
    jordan = (2.0 * ore(x)) ** 2 * z - 2.0 * ore(omul(x, x)) * z
    second = sys.F.second(Ty, Ty)
    _worst(report, "jordan", second, jordan)
    _worst(report, "jordan_closed_form", second, 2.0 * np.dot(x, x) * z)
    _worst(report, "square_operator", omul(x, omul(x, y)), omul(omul(x, x), y))


_CASES = {
    "matrix": _matrix_case,
    "semidirect": _semidirect_case,
    "quaternion": _quaternion_case,
    "octonion": _octonion_case,
}


def beta_condition_check(sys, samples=100, rng=None) -> dict:
    """Worst absolute residuals of the lift and Jordan identities for the
    system's operator family, keyed by identity name."""
    try:
        case = _CASES[sys.family]
    except KeyError:
        raise ValueError(f"no operator family registered for {sys.family!r}") from None
    rng = np.random.default_rng(rng)
    report: dict = {}
    for _ in range(samples):
        case(sys, rng, report)
    return report


def gl_momentum_map_residual(n, samples=100, rng=None) -> float:
    """``<q^T p, M> = 1/2 omega(T_M y, y)`` for ``T_M(q, p) = (q M, -p M^T)``
    on real matrices, with ``omega = tr(q1^T p2 - p1^T q2)``."""
    rng = np.random.default_rng(rng)
    worst = 0.0
    for _ in range(samples):
        q, p, M = (rng.standard_normal((n, n)) for _ in range(3))
        tq, tp = q @ M, -p @ M.T
        omega = np.trace(tq.T @ p - tp.T @ q)
        worst = max(worst, abs(np.sum((q.T @ p) * M) - 0.5 * omega))
    return float(worst)


def hopf_momentum_map_residual(samples=100, rng=None) -> float:
    """``<F(y), x> = 1/2 omega(-1/2 x y, y)`` with ``omega(u, v) = Re(u k v*)``."""
    rng = np.random.default_rng(rng)
    worst = 0.0
    for _ in range(samples):
        y = rng.standard_normal(4)
        x = rng.standard_normal(3)
        Ty = -0.5 * qmul(pure(x), y)
        omega = qmul(qmul(Ty, K), qconj(y))[0]
        F = 0.25 * imag(qmul(qmul(y, K), qconj(y)))
        worst = max(worst, abs(np.dot(F, x) - 0.5 * omega))
    return float(worst)
