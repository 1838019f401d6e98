import dataclasses

import numpy as np
import pytest

from sydirk.algebra.hypercomplex import K, ONE, associator, qconj, qmul
from sydirk.algebra.matrices import commutator, dagger, from_real, lp_split, random_u, to_real
from sydirk.descent import descend_step, descend_trajectory
from sydirk.errors import DegenerateSpectrum, UnknownName
from sydirk.solver import SolverSettings
from sydirk.systems import (
    CATALOG,
    ConsistencyError,
    beta_condition_check,
    build_system,
    constant_octonion,
    general_matrix_flow,
    gl_momentum_map_residual,
    hopf_momentum_map_residual,
    hopf_rigid_body,
    matrix_lie_poisson,
    octonion_flow,
    semidirect_mhd,
    zeitlin_ns,
)


def twisted_product(x, y):
    """Cayley--Dickson doubling with one factor order flipped; not alternative."""
    q, p, r, s = x[..., :4], x[..., 4:], y[..., :4], y[..., 4:]
    return np.concatenate([qmul(q, r) - qmul(qconj(s), p), qmul(q, s) + qmul(p, qconj(r))], axis=-1)


SYSTEMS = {
    "matrix_lie_poisson": lambda: matrix_lie_poisson(3),
    "hopf_rigid_body": hopf_rigid_body,
    "octonion_flow": octonion_flow,
    "semidirect_mhd": lambda: semidirect_mhd(3),
    "zeitlin_inviscid": lambda: zeitlin_ns(6),
    "zeitlin_viscous": lambda: zeitlin_ns(6, 0.01),
    "general_matrix_flow": lambda: general_matrix_flow(4),
}


@pytest.fixture(scope="module", params=sorted(SYSTEMS))
def system(request):
    return SYSTEMS[request.param]()


def test_consistency_at_many_points(system):
    rel, gam = system.consistency_residuals(100, rng=7)
    assert rel <= 1e-10 and gam <= 1e-10


def test_lift_inverts_projection(system, rng):
    z = system.initial_state(rng)
    y = system.lift(z, rng)
    assert y.shape == (system.dim_y,)
    assert np.max(np.abs(system.F.value(y) - z)) <= 1e-12 * (1 + np.max(np.abs(z)))


def test_encode_decode(system, rng):
    z = system.initial_state(rng)
    assert np.array_equal(system.encode_z(system.decode_z(z)), z)


def test_diagnostics_are_scalars(system, rng):
    z = system.initial_state(rng)
    for name, fn in system.diagnostics:
        assert isinstance(fn(z), float), name


def test_systems_are_immutable(system):
    with pytest.raises(dataclasses.FrozenInstanceError):
        system.name = "other"


def test_beta_conditions(system):
    if system.family not in ("matrix", "semidirect", "quaternion", "octonion"):
        pytest.skip("no operator family")
    report = beta_condition_check(system, samples=50, rng=3)
    assert report and max(report.values()) <= 1e-12


def test_quaternion_beta_example():
    # x = k, y = 1: both sides vanish
    sys = hopf_rigid_body()
    z = sys.F.value(ONE)
    assert np.array_equal(z, [0, 0, 0.25])
    zq = np.concatenate([[0.0], z])
    lhs = sys.F.deriv(ONE, qmul(K, ONE))
    rhs = qmul(K, zq) + qmul(zq, qconj(K))
    assert np.max(np.abs(lhs - rhs[1:])) <= 1e-14 and abs(rhs[0]) <= 1e-14


def test_momentum_maps():
    assert gl_momentum_map_residual(4, 200, rng=0) <= 1e-12
    assert hopf_momentum_map_residual(200, rng=0) <= 1e-12


def test_catalog_builds_with_params():
    assert set(CATALOG) == {
        "matrix_lie_poisson", "hopf_rigid_body", "octonion_flow", "semidirect_mhd",
        "zeitlin_ns", "general_matrix_flow",
    }
    assert build_system("zeitlin_ns", {"n": 4, "nu": 0.1}).params == {"n": 4, "nu": 0.1}
    with pytest.raises(UnknownName):
        build_system("navier_stokes")
    with pytest.raises(TypeError):
        build_system("hopf_rigid_body", {"mass": 1})


def test_bad_parameters():
    with pytest.raises(ValueError):
        hopf_rigid_body((1.0, -1.0, 2.0))
    with pytest.raises(ValueError):
        zeitlin_ns(4, nu=-1)
    with pytest.raises(ValueError):
        matrix_lie_poisson(1)


# --- matrix Lie--Poisson ---------------------------------------------------

def test_identity_gradient_gives_equilibria(rng):
    sys = matrix_lie_poisson(3, grad_eta=lambda z: np.eye(3))
    for _ in range(5):
        z = to_real(random_u(3, rng))
        assert not np.any(sys.g(z))


def test_lie_poisson_descent_preserves_spectrum(rng):
    sys = matrix_lie_poisson(4)
    z0 = sys.initial_state(rng)
    rec = descend_trajectory([1.0], sys.reduced, z0, 0.1, 20)
    ev = lambda v: np.sort(np.linalg.eigvals(from_real(v, 4)).imag)
    assert np.max(np.abs(ev(rec.z_final) - ev(z0))) <= 1e-12


# --- Hopf rigid body -------------------------------------------------------

def test_principal_axis_is_equilibrium():
    sys = hopf_rigid_body()
    z0 = np.array([1.0, 0.0, 0.0])
    assert not np.any(sys.g(z0))
    step = descend_step([1.0], sys.reduced, z0, 0.1)
    assert np.max(np.abs(step.z1 - z0)) <= 1e-14


def test_hopf_gamma_against_quaternion_arithmetic(rng):
    sys = hopf_rigid_body((0.5, 1.5, 4.0))
    for _ in range(20):
        y = rng.standard_normal(4)
        fy = sys.f(y)
        direct = 0.5 * qmul(qmul(fy, K), qconj(fy))[1:]
        assert np.allclose(direct, sys.gamma(sys.F.value(y)), atol=1e-13)


# --- octonions -------------------------------------------------------------

def test_imaginary_octonion_keeps_norm(rng):
    sys = octonion_flow(constant_octonion([0, 1, -2, 0.5, 0, 3, 1, -1]))
    rec = descend_trajectory([1.0], sys.reduced, np.array([2.5]), 0.1, 50)
    assert rec.z_final[0] == 2.5


def test_constant_octonion_matches_exponential():
    x = np.array([-0.4, 0.3, 0.1, 0.0, 0.2, -0.5, 0.3, 0.1])
    sys = octonion_flow(constant_octonion(x))
    errs = []
    for n in (10, 20, 40):
        rec = descend_trajectory([1.0], sys.reduced, np.array([1.0]), 1.0 / n, n)
        errs.append(abs(rec.z_final[0] - np.exp(x[0])))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(np.abs(orders - 2.0) < 0.1)


def test_non_alternative_product_breaks_projection(rng):
    x, y = rng.standard_normal((2, 8))
    assert np.max(np.abs(associator(x, x, y, twisted_product))) > 1e-3
    sys = octonion_flow(product=twisted_product, check=False)
    assert max(sys.consistency_residuals(20, rng=1)) > 1e-3
    with pytest.raises(ConsistencyError):
        octonion_flow(product=twisted_product)


# --- semidirect MHD --------------------------------------------------------

def test_zero_theta_reduces_to_lie_poisson(rng):
    n = 3
    mhd = semidirect_mhd(n)
    w0 = from_real(mhd.initial_state(rng), n, 2)[0]
    from sydirk.algebra.laplacian import laplacian

    lp = matrix_lie_poisson(n, grad_eta=laplacian(n).pinv)
    a = descend_trajectory([0.5, 0.5], mhd.reduced, to_real(w0, np.zeros((n, n))), 0.05, 30)
    b = descend_trajectory([0.5, 0.5], lp.reduced, to_real(w0), 0.05, 30)
    w1, th1 = from_real(a.z_final, n, 2)
    assert not np.any(th1)
    assert np.max(np.abs(w1 - from_real(b.z_final, n))) <= 1e-13


def test_mhd_stages_stay_anti_hermitian(rng):
    n = 4
    sys = semidirect_mhd(n)
    z = sys.initial_state(rng)
    worst = 0.0
    for _ in range(20):
        step = descend_step([1.35, -1.7, 1.35], sys.reduced, z, 0.05)
        for Z in step.stages + [step.z1]:
            for m in from_real(Z, n, 2):
                worst = max(worst, np.max(np.abs(m + dagger(m))))
        z = step.z1
    assert worst <= 1e-12


# --- Zeitlin ---------------------------------------------------------------

def test_inviscid_field_is_pure_commutator(rng):
    sys = zeitlin_ns(6)
    w = from_real(sys.initial_state(rng), 6)
    sp = lp_split(w, from_real(sys.g(to_real(w)), 6))
    assert np.max(np.abs(sp.P)) <= 1e-12


def test_zeitlin_initial_condition():
    w = from_real(zeitlin_ns(8).initial_state(np.random.default_rng(0)), 8)
    assert abs(0.5 * np.linalg.norm(w) ** 2 - 1.0) <= 1e-14
    assert np.max(np.abs(w + dagger(w))) <= 1e-15 and abs(np.trace(w)) <= 1e-14


def test_trace_free_states_with_traced_stages(rng):
    n = 5
    sys = zeitlin_ns(n, 0.05)
    z = sys.initial_state(rng)
    stage_trace = 0.0
    # an eigenvalue drifts through zero here; plain iteration stalls near it
    settings = SolverSettings(strategy="newton_fallback")
    for _ in range(10):
        step = descend_step([1.0], sys.reduced, z, 0.1, settings)
        stage_trace = max(stage_trace, abs(np.trace(from_real(step.stages[0], n))))
        z = step.z1
        assert abs(np.trace(from_real(z, n))) <= 1e-12
    assert stage_trace > 1e-8


def test_viscous_decay(rng):
    sys = zeitlin_ns(6, 0.05)
    rec = descend_trajectory([1.0], sys.reduced, sys.initial_state(rng), 0.05, 40, diagnostics=sys.diagnostics)
    for name in ("energy", "enstrophy"):
        assert np.all(np.diff(rec.column(name)) <= 1e-12)


# --- general matrix flow ---------------------------------------------------

def test_zero_flow_is_static(rng):
    sys = general_matrix_flow(3, g=lambda z: np.zeros_like(z))
    z0 = to_real(random_u(3, rng))
    rec = descend_trajectory([0.5, 0.5], sys.reduced, z0, 0.1, 10)
    assert np.array_equal(rec.z_final, z0)


def test_commutator_flow_is_lie_poisson_with_split_gradient(rng):
    n = 4
    A = random_u(n, rng)
    flow = general_matrix_flow(n, g=lambda z: commutator(A, z))
    # grad eta = L^dagger reproduces g and gamma exactly
    lp = matrix_lie_poisson(n, grad_eta=lambda z: dagger(lp_split(z, commutator(A, z)).L))
    z0 = flow.initial_state(rng)
    a = descend_trajectory([1.0], flow.reduced, z0, 0.05, 30, diagnostics=flow.diagnostics)
    b = descend_trajectory([1.0], lp.reduced, z0, 0.05, 30)
    assert np.max(np.abs(a.z_final - b.z_final)) <= 1e-12
    norms = a.column("frobenius")
    assert np.max(np.abs(norms - norms[0])) <= 1e-13


def test_commutator_flow_close_to_constant_gradient(rng):
    n = 4
    A = random_u(n, rng)
    flow = general_matrix_flow(n, g=lambda z: commutator(A, z))
    lp = matrix_lie_poisson(n, grad_eta=lambda z: dagger(A))
    z0 = flow.initial_state(rng)
    gaps = []
    for h in (0.1, 0.05):
        gaps.append(np.max(np.abs(descend_step([1.0], flow.reduced, z0, h).z1 - descend_step([1.0], lp.reduced, z0, h).z1)))
    # the two methods share g but not gamma: one-step gap is third order
    assert 6.5 < gaps[0] / gaps[1] < 9.5


def test_frobenius_norm_law(rng):
    n = 4
    sys = general_matrix_flow(n)
    z0 = sys.initial_state(rng)
    b, h = np.array([1.35, -1.7, 1.35]), 0.05
    step = descend_step(b, sys.reduced, z0, h)
    rhs = 0.5 * np.linalg.norm(from_real(z0, n)) ** 2
    for bi, Zv in zip(b, step.stages):
        Z = from_real(Zv, n)
        sp = lp_split(Z, from_real(sys.g(Zv), n))
        rhs -= h * bi * np.real(np.trace(Z @ sp.P @ Z))
        rhs -= 0.25 * h**3 * bi**3 * np.real(np.trace(sp.M_dagger @ Z @ sp.P @ Z @ sp.M))
    assert abs(0.5 * np.linalg.norm(from_real(step.z1, n)) ** 2 - rhs) <= 1e-13


def test_degenerate_start_reports_step():
    sys = general_matrix_flow(3)
    with pytest.raises(DegenerateSpectrum) as err:
        descend_trajectory([1.0], sys.reduced, np.zeros(sys.dim_z), 0.1, 5)
    assert err.value.step == 1 and len(err.value.record) == 1
