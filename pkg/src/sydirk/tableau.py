"""Butcher tableaus, the symplecticity and projectability conditions, and
classification of methods up to permutation of stages."""
from __future__ import annotations

import enum
import heapq
import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import OrderCycle, UnknownName, ZeroWeight

DEFAULT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ButcherTableau:
    """Coefficients ``(a, b)`` of an ``s``-stage Runge--Kutta method.

    The node vector ``c`` is not stored: every method here is applied to
    autonomous systems only.
    """

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float)
        b = np.array(self.b, dtype=float).reshape(-1)
        s = b.size
        if s == 0 or a.shape != (s, s):
            raise ValueError(f"a must be {s}x{s} to match b, got shape {a.shape}")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("tableau entries must be finite")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def s(self) -> int:
        return self.b.size

    def permuted(self, perm) -> "ButcherTableau":
        """Reorder the stages: new stage ``k`` is old stage ``perm[k]``."""
        p = np.asarray(perm)
        return ButcherTableau(self.a[np.ix_(p, p)], self.b[p])

    @cached_property
    def solve_order(self):
        """Stage order making ``a`` lower triangular, using the exact zero
        pattern, or ``None`` when the stages are genuinely coupled."""
        try:
            return _stable_toposort(self.a != 0.0)
        except _Cycle:
            return None

    def __repr__(self):
        return f"ButcherTableau(a={self.a.tolist()}, b={self.b.tolist()})"


class MethodClass(enum.Enum):
    EXPLICIT = "Explicit"
    DIRK = "DIRK"
    SYDIRK = "SyDIRK"
    GENERAL = "General"

    def __str__(self):
        return self.value


def _short(x: float) -> str:
    return "0" if x == 0 else f"{x:.4e}"


@dataclass(frozen=True)
class TableauClassification:
    symplectic_residual: float
    projectable_residual: float
    dirk_permutation: tuple[int, ...] | None
    method_class: MethodClass

    def summary(self) -> str:
        text = (
            f"{self.method_class}, symplectic_residual {_short(self.symplectic_residual)}, "
            f"projectable_residual {_short(self.projectable_residual)}"
        )
        if self.dirk_permutation is not None:
            text += ", permutation " + " ".join(str(i + 1) for i in self.dirk_permutation)
        return text

    def to_dict(self) -> dict:
        return {
            "class": self.method_class.value,
            "symplectic_residual": float(f"{self.symplectic_residual:.17g}"),
            "projectable_residual": float(f"{self.projectable_residual:.17g}"),
            "dirk_permutation": (
                None if self.dirk_permutation is None else [i + 1 for i in self.dirk_permutation]
            ),
        }


def make_sydirk(b) -> ButcherTableau:
    """SyDIRK tableau with weights ``b``: ``a_ij = b_j`` below the diagonal,
    ``b_i/2`` on it, zero above.

    >>> make_sydirk([1.0]).a
    array([[0.5]])
    """
    b = np.array(b, dtype=float).reshape(-1)
    if b.size == 0:
        raise ValueError("need at least one stage")
    if np.any(b == 0.0):
        zero = [int(i) + 1 for i in np.flatnonzero(b == 0.0)]
        raise ZeroWeight(f"SyDIRK weights must be nonzero; b is zero at stage(s) {zero}")
    a = np.tril(np.broadcast_to(b, (b.size, b.size)), k=-1) + np.diag(b / 2)
    return ButcherTableau(a, b)


def symplectic_matrix(t: ButcherTableau) -> np.ndarray:
    """``m_ij = b_i b_j - b_i a_ij - b_j a_ji``."""
    a, b = t.a, t.b
    ba = b[:, None] * a
    return np.outer(b, b) - ba - ba.T


def projectable_tensor(t: ButcherTableau) -> np.ndarray:
    """``c_ijk = a_ij a_ik - a_ij a_jk - a_ik a_kj`` for all ``i, j, k``."""
    a = t.a
    return (
        a[:, :, None] * a[:, None, :]
        - a[:, :, None] * a[None, :, :]
        - a[:, None, :] * a.T[None, :, :]
    )


def check_symplectic(t: ButcherTableau) -> float:
    return float(np.max(np.abs(symplectic_matrix(t))))


def check_projectable(t: ButcherTableau, include_diagonal: bool = False) -> float:
    """Max of ``|a_ij a_ik - a_ij a_jk - a_ik a_kj|`` over ``j != k``.

    With ``include_diagonal`` the ``j == k`` triples are included too; that
    stronger condition admits only the zero tableau.
    """
    c = np.abs(projectable_tensor(t))
    if not include_diagonal:
        s = t.s
        c = c[:, ~np.eye(s, dtype=bool)]
    return float(np.max(c)) if c.size else 0.0


class _Cycle(Exception):
    def __init__(self, cycle):
        self.cycle = cycle


def _stable_toposort(pred: np.ndarray) -> tuple[int, ...]:
    """Total order extending ``j < i`` whenever ``pred[i, j]`` (``i != j``),
    breaking ties by original index."""
    s = pred.shape[0]
    pred = pred & ~np.eye(s, dtype=bool)
    indeg = pred.sum(axis=1)
    ready = [i for i in range(s) if indeg[i] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        j = heapq.heappop(ready)
        order.append(j)
        for i in np.flatnonzero(pred[:, j]):
            indeg[i] -= 1
            if indeg[i] == 0:
                heapq.heappush(ready, int(i))
    if len(order) < s:
        raise _Cycle(_find_cycle(pred, set(range(s)) - set(order)))
    return tuple(order)


def _find_cycle(pred, remaining):
    # every remaining node has a remaining predecessor; walk until a repeat
    node = min(remaining)
    seen = {}
    path = []
    while node not in seen:
        seen[node] = len(path)
        path.append(node)
        node = next(int(j) for j in np.flatnonzero(pred[node]) if int(j) in remaining)
    return path[seen[node]:][::-1]


def classify(t: ButcherTableau, tol: float = DEFAULT_TOL) -> TableauClassification:
    """Classify ``t`` as Explicit, DIRK, SyDIRK or General.

    A stage ``j`` precedes ``i`` whenever ``|a_ij| > tol``. If this relation
    extends to a total order, the permuted tableau is lower triangular and
    the permutation is reported; the class then follows from the permuted
    diagonal and the two residuals.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    sym = check_symplectic(t)
    proj = check_projectable(t)
    try:
        perm = _stable_toposort(np.abs(t.a) > tol)
    except _Cycle as exc:
        if proj <= tol:
            raise OrderCycle(exc.cycle, tol) from None
        return TableauClassification(sym, proj, None, MethodClass.GENERAL)

    pt = t.permuted(perm)
    if sym <= tol and proj <= tol and np.all(np.abs(pt.b) > tol):
        cls = MethodClass.SYDIRK
    elif np.all(np.abs(np.diag(pt.a)) <= tol):
        cls = MethodClass.EXPLICIT
    else:
        cls = MethodClass.DIRK
    return TableauClassification(sym, proj, perm, cls)


def sydirk_weights(t: ButcherTableau, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Weights ``b`` in solve order if ``t`` is SyDIRK up to permutation."""
    c = classify(t, tol)
    if c.method_class is not MethodClass.SYDIRK:
        raise ValueError(f"tableau is {c.method_class}, not SyDIRK")
    return t.b[list(c.dirk_permutation)].copy()


_CBRT2 = 2.0 ** (1.0 / 3.0)
_TJ_OUTER = 1.0 / (2.0 - _CBRT2)
_TJ_INNER = -_CBRT2 / (2.0 - _CBRT2)
_SQRT3_6 = np.sqrt(3.0) / 6.0


def _builtins():
    return {
        "midpoint": lambda: make_sydirk([1.0]),
        "sydirk2": lambda: make_sydirk([0.5, 0.5]),
        "sydirk3_tj": lambda: make_sydirk([_TJ_OUTER, _TJ_INNER, _TJ_OUTER]),
        "gauss2": lambda: ButcherTableau(
            [[0.25, 0.25 - _SQRT3_6], [0.25 + _SQRT3_6, 0.25]], [0.5, 0.5]
        ),
        "rk4": lambda: ButcherTableau(
            [[0, 0, 0, 0], [0.5, 0, 0, 0], [0, 0.5, 0, 0], [0, 0, 1, 0]],
            [1 / 6, 1 / 3, 1 / 3, 1 / 6],
        ),
        "euler": lambda: ButcherTableau([[0.0]], [1.0]),
    }


BUILTIN_NAMES = tuple(_builtins())


def builtin_tableau(name: str) -> ButcherTableau:
    try:
        return _builtins()[name]()
    except KeyError:
        raise UnknownName(f"unknown tableau {name!r}; choose from {', '.join(BUILTIN_NAMES)}") from None


# --- structured text -------------------------------------------------------

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def tableau_to_dict(t: ButcherTableau) -> dict:
    return {
        "s": t.s,
        "a": [_fmt(x) for x in t.a.reshape(-1)],
        "b": [_fmt(x) for x in t.b],
    }


def tableau_from_dict(doc: dict) -> ButcherTableau:
    s = int(doc["s"])
    a = np.array([float(x) for x in np.ravel(np.array(doc["a"], dtype=object))])
    b = np.array([float(x) for x in doc["b"]])
    if a.size != s * s or b.size != s:
        raise ValueError(f"tableau document declares s={s} but has {a.size} a-entries and {b.size} b-entries")
    return ButcherTableau(a.reshape(s, s), b)


def dumps_tableau(t: ButcherTableau) -> str:
    return json.dumps(tableau_to_dict(t), indent=2)


def loads_tableau(text: str) -> ButcherTableau:
    return tableau_from_dict(json.loads(text))
