import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import solve_ivp

from starkcorr.linalg import hermitian_eigenvalues
from starkcorr.model import (
    InvalidStateError,
    ModelParams,
    Regime,
    Scenario,
    StatePrep,
    XState,
    amplitudes,
    density_matrix,
    phi,
    principal_sqrt,
    regime,
    sigma_excited,
    sigma_excited_reduced,
    sigma_vacuum,
    theta,
)

BELL = 1 / math.sqrt(2)
PARAM_SETS = [(10.0, 0.0), (10.0, 15.0), (0.1, 0.0), (0.1, 1.5), (4.0, 0.0), (2.0, 0.7), (0.5, 3.0)]

# independent high-precision evaluations (mpmath, 40 digits)
SQRT_60 = 7.745966692414833770
SQRT_039 = 0.6244997998398398206
SQRT_20 = 4.472135954999579393
SIGMA_EXC_SLOW = complex(0.09940540479243896765, 10.05981517894349531)
# phi(1) at lam=10, eta=0 from DOP853 on the equivalent ODE pair (rtol 1e-12)
PHI_LAM10_TAU1 = 0.3711188979537405


def test_sigma_vacuum_examples():
    assert sigma_vacuum(ModelParams(10.0)) == pytest.approx(SQRT_60, abs=1e-12)
    assert sigma_vacuum(ModelParams(4.0)) == 0
    s = sigma_vacuum(ModelParams(0.1))
    assert s.real == 0.0 and s.imag == pytest.approx(SQRT_039, abs=1e-14)


def test_principal_branch_convention():
    assert principal_sqrt(-4.0) == 2j
    assert principal_sqrt(complex(-4.0, -0.0)) == 2j
    for z in (3 - 4j, -3 + 4j, -3 - 4j, 1j):
        w = principal_sqrt(z)
        assert w.real >= 0
        assert abs(w * w - z) < 1e-14


def test_sigma_excited_examples():
    p = ModelParams(10.0, scenario=Scenario.ONE_PHOTON)
    s = sigma_excited(p)
    assert s.real == pytest.approx(0.0, abs=1e-12)
    assert s.imag == pytest.approx(SQRT_20, abs=1e-12)
    for common in (0.5, 3.0, 12.0):
        q = ModelParams(10.0, common, common, Scenario.ONE_PHOTON)
        assert sigma_excited(q) == pytest.approx(s, abs=1e-12)
    slow = sigma_excited(ModelParams(0.1, 10.0, 0.0, Scenario.ONE_PHOTON))
    assert slow == pytest.approx(SIGMA_EXC_SLOW, abs=1e-12)


@given(
    st.floats(0.01, 50.0), st.floats(0.0, 30.0), st.floats(-30.0, 30.0)
)
@settings(max_examples=200, deadline=None)
def test_sigma_excited_expanded_equals_reduced(lam, eta, xi):
    p = ModelParams(lam, eta, xi, Scenario.ONE_PHOTON)
    a, b = sigma_excited(p), sigma_excited_reduced(p)
    scale = max(1.0, abs(complex(lam, xi + 7 * eta)) ** 2) / max(1.0, abs(b))
    # the expanded form cancels terms of size |lam + i(xi + 7 eta)|^2
    assert abs(a - b) <= 1e-12 * max(1.0, scale)


def test_phi_and_theta_start_at_one():
    for lam, eta in PARAM_SETS:
        assert phi(0.0, ModelParams(lam, eta)) == 1
        assert theta(0.0, ModelParams(lam, eta, 2.5, Scenario.ONE_PHOTON)) == 1


def test_phi_matches_ode_solution():
    assert phi(1.0, ModelParams(10.0)) == pytest.approx(PHI_LAM10_TAU1, abs=1e-6)


def _ode_amplitude(p: ModelParams, tau: float, kernel_rate: complex, kernel_amp: float, detuning: complex):
    """b' = -kernel_amp * M - detuning * b, M' = b - kernel_rate * M."""

    def rhs(_, y):
        b, m = y[0] + 1j * y[1], y[2] + 1j * y[3]
        db = -kernel_amp * m - detuning * b
        dm = b - kernel_rate * m
        return [db.real, db.imag, dm.real, dm.imag]

    sol = solve_ivp(rhs, (0.0, tau), [1.0, 0.0, 0.0, 0.0], method="DOP853", rtol=1e-12, atol=1e-14)
    return complex(sol.y[0, -1], sol.y[1, -1])


@pytest.mark.parametrize("lam,eta,tau", [(10.0, 0.0, 1.0), (10.0, 15.0, 1.0), (0.1, 0.5, 7.0), (4.0, 0.0, 2.0)])
def test_phi_agrees_with_independent_ode(lam, eta, tau):
    p = ModelParams(lam, eta)
    ref = _ode_amplitude(p, tau, complex(lam, 2 * eta), lam, 0j)
    assert abs(phi(tau, p) - ref) < 1e-8


@pytest.mark.parametrize("lam,eta,xi,tau", [(10.0, 0.0, 0.0, 1.0), (10.0, 5.0, 2.0, 0.8), (0.1, 1.5, 0.0, 9.0)])
def test_theta_agrees_with_independent_ode(lam, eta, xi, tau):
    p = ModelParams(lam, eta, xi, Scenario.ONE_PHOTON)
    ref = _ode_amplitude(p, tau, complex(lam, 4 * eta), 3 * lam, 1j * (xi + 3 * eta))
    assert abs(theta(tau, p) - ref) < 1e-8


def test_non_markovian_death_and_revival():
    p = ModelParams(0.1)
    taus = np.linspace(0, 50, 5001)
    pops = np.array([abs(phi(t, p)) ** 2 for t in taus])
    interior_min = [i for i in range(1, len(pops) - 1) if pops[i] < pops[i - 1] and pops[i] <= pops[i + 1]]
    assert len(interior_min) >= 3
    assert all(pops[i] < 1e-3 for i in interior_min)
    interior_max = [i for i in range(1, len(pops) - 1) if pops[i] > pops[i - 1] and pops[i] >= pops[i + 1]]
    assert len(interior_max) >= 2 and pops[interior_max[0]] > 0.1


def test_critical_damping_uses_limit():
    p = ModelParams(4.0)
    for tau in (0.1, 1.0, 5.0):
        # at sigma = 0 the amplitude is exp(-2 tau) (1 + 2 tau)
        assert phi(tau, p) == pytest.approx(math.exp(-2 * tau) * (1 + 2 * tau), abs=1e-14)
    near = ModelParams(4.0 + 1e-9)
    assert abs(phi(1.0, near) - phi(1.0, p)) < 1e-8


def test_theta_modulus_depends_on_detuning_only():
    a = ModelParams(10.0, 15.0, 0.0, Scenario.ONE_PHOTON)
    b = ModelParams(10.0, 20.0, 5.0, Scenario.ONE_PHOTON)
    assert abs(abs(theta(0.5, a)) - abs(theta(0.5, b))) <= 1e-12


def test_stark_detuning_slows_decay_one_photon():
    fast = abs(theta(5.0, ModelParams(0.1, 0.0, 0.0, Scenario.ONE_PHOTON)))
    slow = abs(theta(5.0, ModelParams(0.1, 10.0, 0.0, Scenario.ONE_PHOTON)))
    assert slow > fast


@pytest.mark.parametrize("lam,eta", PARAM_SETS)
def test_amplitudes_bounded(lam, eta):
    taus = np.linspace(0, 50, 2001)
    for xi in (0.0, 1.0, -3.0):
        pv = ModelParams(lam, eta, xi)
        pe = ModelParams(lam, eta, xi, Scenario.ONE_PHOTON)
        assert max(abs(phi(t, pv)) for t in taus) <= 1 + 1e-9
        assert max(abs(theta(t, pe)) for t in taus) <= 1 + 1e-9


def test_large_times_do_not_overflow():
    assert abs(phi(500.0, ModelParams(200.0, 3.0))) < 1e-10
    assert abs(theta(500.0, ModelParams(200.0, 3.0, 1.0, Scenario.ONE_PHOTON))) < 1e-10


def test_density_matrix_examples():
    s = density_matrix(0.0, StatePrep(BELL), ModelParams(10.0))
    assert s.r22 == pytest.approx(0.5) and s.r33 == pytest.approx(0.5)
    assert s.r23 == pytest.approx(0.5) and s.r44 == pytest.approx(0.0, abs=1e-15)
    assert s.r11 == 0 and s.r14 == 0

    s = density_matrix(0.0, StatePrep(1.0), ModelParams(10.0))
    assert (s.r22, s.r33, s.r44, s.r23) == (1.0, 0.0, 0.0, 0j)

    s = density_matrix(40.0, StatePrep(BELL), ModelParams(10.0))
    assert s.r44 == pytest.approx(1.0, abs=1e-12)
    assert abs(s.r23) < 1e-12


def test_initial_amplitudes():
    a = amplitudes(0.0, StatePrep(0.3), ModelParams(10.0))
    assert a.b1 == 0.3 and a.b2 == pytest.approx(math.sqrt(1 - 0.09))


@given(st.floats(0.0, 50.0), st.floats(0.0, 1.0), st.floats(0.01, 20.0), st.floats(0.0, 20.0),
       st.floats(-20.0, 20.0), st.sampled_from(list(Scenario)))
@settings(max_examples=300, deadline=None)
def test_density_matrix_is_a_state(tau, x, lam, eta, xi, scenario):
    s = density_matrix(tau, StatePrep(x), ModelParams(lam, eta, xi, scenario))
    rho = s.matrix()
    assert abs(np.trace(rho).real - 1) <= 1e-10
    assert hermitian_eigenvalues(rho)[-1] >= -1e-10


@given(st.floats(0.0, 50.0), st.floats(0.0, 1.0), st.floats(0.01, 20.0), st.floats(0.0, 20.0),
       st.floats(-50.0, 50.0))
@settings(max_examples=200, deadline=None)
def test_vacuum_state_ignores_xi_bitwise(tau, x, lam, eta, xi):
    base = density_matrix(tau, StatePrep(x), ModelParams(lam, eta, 0.0))
    other = density_matrix(tau, StatePrep(x), ModelParams(lam, eta, xi))
    assert base == other


@given(st.floats(0.0, 20.0), st.floats(0.0, 1.0), st.sampled_from([10.0, 0.1, 1.0]),
       st.floats(-10.0, 15.0), st.floats(0.0, 10.0))
@settings(max_examples=200, deadline=None)
def test_one_photon_state_depends_on_detuning_only(tau, x, lam, detuning, shift):
    a = density_matrix(tau, StatePrep(x), ModelParams(lam, detuning, 0.0, Scenario.ONE_PHOTON))
    b = density_matrix(tau, StatePrep(x), ModelParams(lam, detuning + shift, shift, Scenario.ONE_PHOTON))
    np.testing.assert_allclose(a.matrix(), b.matrix(), rtol=0, atol=1e-12)


def test_invalid_states_are_rejected():
    with pytest.raises(InvalidStateError):
        XState(0.0, 0.6, 0.6, -0.2)
    with pytest.raises(InvalidStateError):
        XState(0.0, 0.5, 0.5, 0.0, r23=0.6)
    with pytest.raises(InvalidStateError):
        XState(0.0, 0.5, 0.4, 0.0)
    with pytest.raises(InvalidStateError):
        XState(0.25, 0.25, 0.25, 0.25, r14=0.3)


def test_parameter_validation():
    with pytest.raises(ValueError):
        ModelParams(0.0)
    with pytest.raises(ValueError):
        ModelParams(1.0, float("nan"))
    with pytest.raises(ValueError):
        StatePrep(1.2)
    with pytest.raises(ValueError):
        phi(-1.0, ModelParams(1.0))


def test_regime():
    assert regime(ModelParams(10.0)) is Regime.MARKOVIAN
    assert regime(ModelParams(0.1)) is Regime.NON_MARKOVIAN
    assert regime(ModelParams(2.0)) is Regime.MARKOVIAN
    assert regime(ModelParams(1.999)) is Regime.NON_MARKOVIAN


def test_scenario_parse():
    assert Scenario.parse("Vacuum") is Scenario.VACUUM
    assert Scenario.parse("one_photon") is Scenario.ONE_PHOTON
    with pytest.raises(ValueError):
        Scenario.parse("thermal")


def test_principal_sqrt_is_even_in_envelope():
    # cosh + (z/s) sinh is even in s, so the branch choice cannot matter
    p = ModelParams(0.3, 0.8)
    z = complex(p.lam, 2 * p.eta)
    s = sigma_vacuum(p)
    tau = 3.3
    plus = cmath.cosh(s * tau / 2) + z / s * cmath.sinh(s * tau / 2)
    minus = cmath.cosh(-s * tau / 2) + z / (-s) * cmath.sinh(-s * tau / 2)
    assert abs(plus - minus) < 1e-13
    assert abs(cmath.exp(-z * tau / 2) * plus - phi(tau, p)) < 1e-13
