"""Algebraic kernels: quaternions, octonions, complex matrices and the
discrete spherical Laplacian."""
from .hypercomplex import (
    associator,
    hopf_map,
    left_mult_matrix,
    oconj,
    omul,
    onorm,
    ore,
    qconj,
    qmul,
    qnorm,
    right_mult_matrix,
)
from .laplacian import DiscreteLaplacian, laplacian, laplacian_apply, laplacian_pinv, spin_generators
from .matrices import (
    ClosureReport,
    LPSplitting,
    ad_star,
    closure_checks,
    commutator,
    dagger,
    from_real,
    inner,
    jordan,
    lp_split,
    random_hermitian,
    random_su,
    random_u,
    to_real,
)
