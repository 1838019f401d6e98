"""Complex matrix kernels: commutators, ``ad*``, the L/P eigenbasis
splitting, Lie/Jordan closure checks and real encodings."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateSpectrum, DimensionMismatch

DEFAULT_EIG_TOL = 1e-9
# relative size of the Hermitian part below which z is treated as anti-Hermitian
SKEW_DETECT_TOL = 1e-12


def dagger(a):
    return np.conj(np.swapaxes(a, -1, -2))


def commutator(a, b):
    return a @ b - b @ a


def jordan(a, b):
    return 0.5 * (a @ b + b @ a)


def inner(a, b) -> float:
    """Real Frobenius inner product ``Re tr(a^dagger b)``."""
    return float(np.real(np.vdot(a, b)))


def _same_square(*ms):
    shapes = {np.shape(m) for m in ms}
    if len(shapes) != 1:
        raise DimensionMismatch(f"matrix shapes differ: {sorted(shapes)}")
    (shape,) = shapes
    if len(shape) != 2 or shape[0] != shape[1]:
        raise DimensionMismatch(f"expected square matrices, got shape {shape}")


def ad_star(m, z):
    """``ad*_m z = m^dagger z - z m^dagger``."""
    _same_square(m, z)
    md = dagger(m)
    return md @ z - z @ md


def skew_part(z):
    return 0.5 * (z - dagger(z))


def is_anti_hermitian(z, tol=SKEW_DETECT_TOL) -> bool:
    scale = max(1.0, float(np.max(np.abs(z))))
    return float(np.max(np.abs(z + dagger(z)))) <= tol * scale


# --- random elements -----------------------------------------------------

def random_complex(n, rng, scale=1.0):
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def random_u(n, rng, scale=1.0):
    """Random anti-Hermitian matrix."""
    return skew_part(random_complex(n, rng, scale))


def random_su(n, rng, scale=1.0):
    z = random_u(n, rng, scale)
    return z - (np.trace(z) / n) * np.eye(n)


def random_hermitian(n, rng, scale=1.0):
    z = random_complex(n, rng, scale)
    return 0.5 * (z + dagger(z))


# --- real encodings ------------------------------------------------------

def to_real(*mats) -> np.ndarray:
    """Flatten complex matrices into one real vector, re/im interleaved."""
    return np.concatenate([np.ascontiguousarray(m, dtype=complex).reshape(-1).view(float) for m in mats])


def from_real(v, n, count=1):
    """Inverse of :func:`to_real` for ``count`` matrices of size ``n``."""
    c = np.ascontiguousarray(v, dtype=float).view(complex)
    if c.size != count * n * n:
        raise DimensionMismatch(f"vector of length {np.size(v)} does not hold {count} {n}x{n} complex matrices")
    if count == 1:
        return c.reshape(n, n)
    return tuple(c[k * n * n:(k + 1) * n * n].reshape(n, n) for k in range(count))


def matrix_to_dict(z) -> dict:
    z = np.asarray(z, dtype=complex)
    return {
        "n": z.shape[0],
        "re": [f"{x:.17g}" for x in z.real.reshape(-1)],
        "im": [f"{x:.17g}" for x in z.imag.reshape(-1)],
    }


def matrix_from_dict(doc) -> np.ndarray:
    n = int(doc["n"])
    re = np.array([float(x) for x in doc["re"]])
    im = np.array([float(x) for x in doc["im"]])
    if re.size != n * n or im.size != n * n:
        raise ValueError(f"matrix document declares n={n} but holds {re.size}/{im.size} entries")
    return (re + 1j * im).reshape(n, n)


def dumps_matrix(z) -> str:
    return json.dumps(matrix_to_dict(z))


def loads_matrix(text) -> np.ndarray:
    return matrix_from_dict(json.loads(text))


# --- L/P splitting -------------------------------------------------------

@dataclass(frozen=True)
class LPSplitting:
    """``g = [L, z] + P z`` with ``L`` off-diagonal and ``P`` diagonal in
    the eigenbasis ``V`` of ``z``; ``M^dagger = L + P/2``, ``N = -L + P/2``."""

    V: np.ndarray
    lam: np.ndarray
    L: np.ndarray
    P: np.ndarray

    @property
    def M_dagger(self):
        return self.L + 0.5 * self.P

    @property
    def M(self):
        return dagger(self.M_dagger)

    @property
    def N(self):
        return -self.L + 0.5 * self.P


def eig_decompose(z):
    """Eigenvalues and eigenvectors of ``z``; unitary ``V`` when ``z`` is
    anti-Hermitian (computed from the Hermitian matrix ``i z``)."""
    if is_anti_hermitian(z):
        mu, V = np.linalg.eigh(1j * skew_part(z))
        return -1j * mu, V, True
    lam, V = np.linalg.eig(z)
    return lam, V, False


def lp_split(z, gval, eig_tol: float = DEFAULT_EIG_TOL) -> LPSplitting:
    """Split ``gval = [L, z] + P z`` in the eigenbasis of ``z``.

    Requires distinct, nonzero eigenvalues, both measured relative to the
    spectral radius with ``eig_tol``; raises :class:`DegenerateSpectrum`
    otherwise.
    """
    _same_square(z, gval)
    n = z.shape[0]
    lam, V, unitary = eig_decompose(z)
    radius = float(np.max(np.abs(lam)))
    floor = eig_tol * radius
    smallest = float(np.min(np.abs(lam)))
    if radius == 0.0 or smallest <= floor:
        raise DegenerateSpectrum(
            f"eigenvalue {lam[np.argmin(np.abs(lam))]:.3e} is too close to zero "
            f"(threshold {floor:.3e})",
            gap=smallest,
        )
    diff = lam[None, :] - lam[:, None]  # diff[i, j] = lam_j - lam_i
    off = ~np.eye(n, dtype=bool)
    if n > 1:
        gap = float(np.min(np.abs(diff[off])))
        if gap <= floor:
            raise DegenerateSpectrum(
                f"eigenvalue gap {gap:.3e} is below threshold {floor:.3e}", gap=gap
            )
    if unitary:
        Vinv = dagger(V)
    else:
        Vinv = np.linalg.inv(V)
    Kt = Vinv @ gval @ V
    Lt = np.zeros_like(Kt)
    Lt[off] = Kt[off] / diff[off]
    Pt = np.diag(np.diag(Kt) / lam)
    return LPSplitting(V=V, lam=lam, L=V @ Lt @ Vinv, P=V @ Pt @ Vinv)


# --- closure checks ------------------------------------------------------

@dataclass(frozen=True)
class ClosureReport:
    bracket_su: float
    quadratic_su: float
    jordan_hermitian: float

    @property
    def worst(self):
        return max(self.bracket_su, self.quadratic_su, self.jordan_hermitian)


def _su_violation(x):
    n = x.shape[0]
    return max(float(np.max(np.abs(x + dagger(x)))), abs(np.trace(x)) / n)


def _ah_violation(x):
    return float(np.max(np.abs(x + dagger(x))))


def closure_checks(sample_count: int, n: int, rng=None) -> ClosureReport:
    """Largest constraint violation of ``[S, T]`` (in su(n)), ``T S T`` (in
    u(n)) and the Jordan product of Hermitian matrices (Hermitian).

    ``T S T`` of traceless matrices need not be traceless, so only
    anti-Hermitian symmetry is required of it.
    """
    rng = np.random.default_rng(rng)
    br = qu = jo = 0.0
    for _ in range(sample_count):
        S, T = random_su(n, rng), random_su(n, rng)
        br = max(br, _su_violation(commutator(S, T)))
        qu = max(qu, _ah_violation(T @ S @ T))
        A, B = random_hermitian(n, rng), random_hermitian(n, rng)
        x = jordan(A, B)
        jo = max(jo, float(np.max(np.abs(x - dagger(x)))))
    return ClosureReport(br, qu, jo)
