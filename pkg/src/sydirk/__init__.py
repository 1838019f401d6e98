"""Symplectic diagonally implicit Runge--Kutta (SyDIRK) methods, their
descended counterparts on quadratically projected variables, and a catalog
of projectable systems."""
from .convergence import ConvergenceRow, convergence_study, fitted_order
from .descent import (
    DescentStepRecord,
    ReducedSystem,
    dcay_step,
    descend_step,
    descend_trajectory,
    observable_law_residual,
    observable_law_terms,
)
from .equivalence import lockstep_trajectory, stage_order
from .errors import (
    DegenerateSpectrum,
    DimensionMismatch,
    NonConvergence,
    NotAntiHermitian,
    NotEquivariant,
    OrderCycle,
    SingularFactor,
    SydirkError,
    UnknownName,
    ZeroWeight,
)
from .record import TrajectoryRecord
from .rk import Quadratic, QuadraticMap, RKStep, evolve_observable, expansion_residual, rk_step, rk_trajectory
from .solver import DEFAULT_SETTINGS, SolverSettings, Strategy
from .tableau import (
    BUILTIN_NAMES,
    ButcherTableau,
    MethodClass,
    TableauClassification,
    builtin_tableau,
    check_projectable,
    check_symplectic,
    classify,
    make_sydirk,
    sydirk_weights,
)

__version__ = "0.1.0"
