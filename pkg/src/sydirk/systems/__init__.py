"""Catalog of quadratic projectable systems."""
from __future__ import annotations

from .base import CONSISTENCY_TOL, ConsistencyError, ProjectableSystem
from .beta import beta_condition_check, gl_momentum_map_residual, hopf_momentum_map_residual
from .hopf import DEFAULT_INERTIA, HopfQuadratic, hopf_rigid_body
from .matrix import (
    DaggerProduct,
    band_limited_vorticity,
    damped_commutator,
    general_matrix_flow,
    lift_pair,
    matrix_lie_poisson,
    rigid_weights,
    split_factors,
    zeitlin_ns,
)
from .mhd import SemidirectQuadratic, semidirect_mhd
from .octonion import DEFAULT_A, SquaredNorm, constant_octonion, octonion_flow
from ..errors import UnknownName


def _octonion_from_params(a=None):
    return octonion_flow(None if a is None else constant_octonion(a))


def _hopf_from_params(inertia=DEFAULT_INERTIA):
    return hopf_rigid_body(inertia)


def _mhd_from_params(n=3):
    return semidirect_mhd(n)


CATALOG = {
    "matrix_lie_poisson": lambda n=3: matrix_lie_poisson(n),
    "hopf_rigid_body": _hopf_from_params,
    "octonion_flow": _octonion_from_params,
    "semidirect_mhd": _mhd_from_params,
    "zeitlin_ns": lambda n=8, nu=0.0: zeitlin_ns(n, nu),
    "general_matrix_flow": lambda n=4, seed=0, kappa=0.1: general_matrix_flow(n, seed=seed, kappa=kappa),
}


def build_system(name, params=None) -> ProjectableSystem:
    """Construct a catalog system from JSON-style parameters."""
    if name not in CATALOG:
        raise UnknownName(f"unknown system {name!r}; choose from {', '.join(sorted(CATALOG))}")
    return CATALOG[name](**(params or {}))
