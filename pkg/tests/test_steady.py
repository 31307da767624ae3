"""Stationary solutions, resonant closed form, singular locations and flux."""

import math
from dataclasses import replace

import numpy as np
import pytest

from oscsync.dynamics import CovarianceState, propagate_covariance
from oscsync.errors import (
    DeltaSingularError,
    DetuningNotZeroError,
    NoUniqueSteadyStateError,
)
from oscsync.gauss_info import ladder_to_quadrature_matrix, symplectic_eigenvalues
from oscsync.model import SystemParams, build_diffusion_matrix, gamma12
from oscsync.steady import (
    SteadyMethod,
    _closed_form_of_stationary_equation,
    closed_form_steady,
    flux,
    singular_xi,
    solve_lyapunov,
)

from conftest import random_params


def stable_resonant(rng, nbar_floor=0.0, xi_max=0.9):
    while True:
        p = random_params(rng, nbar_floor=nbar_floor, xi_max=xi_max,
                          gamma_range=(0.05, 1.0))
        p = replace(p, omega2=p.omega1)
        if abs(p.xi) * gamma12(p) < 0.95 * p.gamma:
            return p


class TestSolveLyapunov:
    def test_independent_thermal_states(self):
        p = SystemParams(omega1=1, omega2=1.3, gamma=0.4, nbar1=0.7, nbar2=2.1)
        ss = solve_lyapunov(p)
        expected = np.diag([1.2, 1.2, 2.6, 2.6])
        assert np.abs(ss.theta_ss - expected).max() < 1e-13
        assert ss.method is SteadyMethod.NUMERIC_SOLVE

    def test_thermal_bias_coherence(self):
        # frozen oracle: i g gamma (n2 - n1) / (4 g^2 + gamma^2) = 0.1/4.01 i,
        # cross-checked against long-time integration below
        p = SystemParams(omega1=1, omega2=1, g=1, gamma=0.1, nbar1=0, nbar2=1)
        ss = solve_lyapunov(p)
        assert ss.a1dag_a2 == pytest.approx(0.024937655860349127j, abs=1e-12)
        assert ss.theta_ss[0, 0].real == pytest.approx(0.9987531172069825, abs=1e-12)
        traj = propagate_covariance(p, CovarianceState.vacuum(), 600.0,
                                    strict_physicality=False)
        assert np.abs(traj.covariances[-1] - ss.theta_ss).max() < 1e-8

    def test_residual_contract(self, rng):
        for _ in range(200):
            p = stable_resonant(rng)
            ss = solve_lyapunov(p)
            d_norm = np.linalg.norm(build_diffusion_matrix(p).D)
            assert ss.residual < 1e-10 * d_norm

    def test_no_unique_steady_state_at_full_correlation(self):
        with pytest.raises(NoUniqueSteadyStateError):
            solve_lyapunov(SystemParams(omega1=1, omega2=1, gamma=0.3, xi=1.0))

    def test_near_singular_flag(self):
        p = SystemParams(omega1=1, omega2=1, gamma=0.3, xi=1.0 - 1e-7, nbar1=0.5, nbar2=0.5)
        ss = solve_lyapunov(p)
        assert ss.near_singular

    def test_mode_swap_symmetry(self, rng):
        swap = np.zeros((4, 4))
        swap[0, 2] = swap[1, 3] = swap[2, 0] = swap[3, 1] = 1.0
        for _ in range(50):
            p = random_params(rng, gamma_range=(0.05, 1.0), xi_max=0.6)
            q = replace(p, omega1=p.omega2, omega2=p.omega1,
                        nbar1=p.nbar2, nbar2=p.nbar1)
            ss_p = solve_lyapunov(p)
            ss_q = solve_lyapunov(q)
            assert np.abs(swap @ ss_p.theta_ss @ swap - ss_q.theta_ss).max() < 1e-11
            assert flux(q, ss_q).J == pytest.approx(-flux(p, ss_p).J, abs=1e-14)

    def test_physicality_on_moderate_corpus(self, rng):
        for _ in range(200):
            p = stable_resonant(rng, nbar_floor=0.25)
            sigma = ladder_to_quadrature_matrix(solve_lyapunov(p).theta_ss)
            nus = symplectic_eigenvalues(sigma)
            assert nus[1] >= 0.5 - 1e-10


class TestClosedFormSteady:
    def test_uncoupled_uncorrelated_collapse(self):
        p = SystemParams(omega1=1, omega2=1, gamma=0.5, nbar1=1.4, nbar2=0.2)
        ss = closed_form_steady(p)
        assert ss.theta_ss[0, 0].real == pytest.approx(1.9, abs=1e-14)
        assert ss.method is SteadyMethod.CLOSED_FORM

    def test_thermal_bias_populations(self):
        p = SystemParams(omega1=1, omega2=1, g=1, gamma=0.1, nbar1=0, nbar2=1)
        ss = closed_form_steady(p)
        assert ss.theta_ss[0, 0].real == pytest.approx(0.5 + 2 / 4.01, abs=1e-12)
        assert ss.theta_ss[2, 2].real == pytest.approx(1.5 - 2 / 4.01, abs=1e-12)

    def test_correlated_cold_bath_value(self):
        # Delta = gamma12 / (2 (gamma^2 - gamma12^2 xi^2)) = 2/3 at these values
        p = SystemParams(omega1=1, omega2=1, gamma=1.0, xi=0.5)
        ss = closed_form_steady(p)
        assert ss.a1dag_a2 == pytest.approx(1.0 / 3.0, abs=1e-14)
        # the numeric stationary solution carries the opposite real part
        # (documented discrepancy; the numeric solve is authoritative)
        num = solve_lyapunov(p)
        assert num.a1dag_a2 == pytest.approx(-1.0 / 3.0, abs=1e-12)

    def test_detuning_rejected(self):
        with pytest.raises(DetuningNotZeroError):
            closed_form_steady(SystemParams(omega1=1, omega2=1.1, gamma=0.3))

    def test_singular_rejected(self):
        with pytest.raises(DeltaSingularError):
            closed_form_steady(SystemParams(omega1=1, omega2=1, gamma=0.3, xi=1.0))

    def test_matches_numeric_at_xi_zero(self, rng):
        for _ in range(100):
            p = replace(stable_resonant(rng), xi=0.0)
            cf = closed_form_steady(p)
            num = solve_lyapunov(p)
            assert np.abs(cf.theta_ss - num.theta_ss).max() < 1e-9

    def test_consistent_variant_matches_numeric_everywhere(self, rng):
        for _ in range(200):
            p = stable_resonant(rng)
            cf = _closed_form_of_stationary_equation(p)
            num = solve_lyapunov(p)
            assert np.abs(cf.theta_ss - num.theta_ss).max() < 1e-9

    @pytest.mark.xfail(
        strict=True,
        reason="the published resonant closed form disagrees with the numeric "
               "stationary solution away from xi = 0 (sign of Re<a1† a2>, and the "
               "sqrt(n1 n2) term of the Delta numerator); the numeric solve is the "
               "gold standard and the exact discrepancy is characterized by "
               "test_consistent_variant_matches_numeric_everywhere")
    def test_published_form_matches_numeric_everywhere(self, rng):
        worst = 0.0
        for _ in range(100):
            p = stable_resonant(rng)
            worst = max(worst, np.abs(closed_form_steady(p).theta_ss
                                      - solve_lyapunov(p).theta_ss).max())
        assert worst < 1e-9


class TestSingularXi:
    def test_zero_temperature(self):
        sx = singular_xi(SystemParams(gamma=0.3))
        assert sx.occupation_form == 1.0
        assert sx.denominator_form == 1.0

    def test_equal_occupations_disagree(self):
        sx = singular_xi(SystemParams(gamma=1.0, nbar1=1, nbar2=1))
        assert sx.occupation_form == pytest.approx(1 / math.sqrt(3), abs=1e-15)
        assert sx.denominator_form == pytest.approx(1.0, abs=1e-15)

    def test_one_cold_bath_agrees(self):
        sx = singular_xi(SystemParams(gamma=0.7, nbar1=0, nbar2=1))
        assert sx.occupation_form == pytest.approx(1 / math.sqrt(2), abs=1e-15)
        assert sx.denominator_form == pytest.approx(1 / math.sqrt(2), abs=1e-15)

    def test_empirical_divergence_follows_denominator_form(self):
        from oscsync.model import build_dynamical_matrix
        p = SystemParams(omega1=1, omega2=1, g=1, gamma=0.2, nbar1=1, nbar2=2)
        sx = singular_xi(p)
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            W = build_dynamical_matrix(replace(p, xi=mid)).W
            lo, hi = (mid, hi) if np.linalg.eigvals(W).real.max() < 0 else (lo, mid)
        empirical = 0.5 * (lo + hi)
        assert empirical == pytest.approx(sx.denominator_form, abs=1e-9)
        assert abs(empirical - sx.occupation_form) > 0.4


class TestFlux:
    def test_no_bias_no_flux(self):
        p = SystemParams(omega1=1, omega2=1, g=0.3, gamma=0.2, nbar1=1.1, nbar2=1.1)
        fr = flux(p, solve_lyapunov(p))
        assert fr.J == 0.0
        assert abs(fr.theta_flux) < 1e-14

    def test_closed_form_rate(self):
        p = SystemParams(omega1=1, omega2=1, g=0.1, gamma=0.1, nbar1=0, nbar2=1)
        fr = flux(p, solve_lyapunov(p))
        assert fr.J == pytest.approx(0.4, abs=1e-15)
        assert fr.direction == 1.0

    def test_continuity_residual_at_xi_zero(self, rng):
        for _ in range(100):
            p = replace(stable_resonant(rng), xi=0.0)
            fr = flux(p, solve_lyapunov(p))
            assert fr.continuity_residual < 1e-10

    def test_full_balance_everywhere(self, rng):
        for _ in range(200):
            p = random_params(rng, gamma_range=(0.05, 1.0), xi_max=0.9)
            if abs(p.xi) * gamma12(p) > 0.95 * p.gamma:
                continue
            fr = flux(p, solve_lyapunov(p))
            assert fr.full_balance_residual < 1e-12

    def test_two_term_residual_is_cross_channel_flux(self, rng):
        # the two-term continuity misses exactly the correlated-channel term
        for _ in range(100):
            p = stable_resonant(rng)
            ss = solve_lyapunov(p)
            fr = flux(p, ss)
            expected = abs(p.xi * gamma12(p) * ss.a1dag_a2.real)
            assert fr.continuity_residual == pytest.approx(expected, abs=1e-12)

    def test_xi_invariance_at_resonance(self):
        p0 = SystemParams(omega1=1, omega2=1, g=0.3, gamma=0.4, nbar1=0.3, nbar2=1.7)
        js, ts = [], []
        for xi in (-0.9, 0.0, 0.9):
            p = replace(p0, xi=xi)
            fr = flux(p, solve_lyapunov(p))
            js.append(fr.J)
            ts.append(fr.theta_flux)
        assert np.ptp(js) == 0.0
        assert np.ptp(ts) < 1e-12

    def test_theta_flux_equals_g_times_j(self, rng):
        for _ in range(100):
            p = stable_resonant(rng)
            fr = flux(p, solve_lyapunov(p))
            assert fr.theta_flux == pytest.approx(p.g * fr.J, abs=1e-12)

    @pytest.mark.xfail(
        strict=True,
        reason="the closed-form rate J and the covariance-derived flux differ by one "
               "power of the coupling (theta_flux = g * J at resonance); documented "
               "model defect, characterized by test_theta_flux_equals_g_times_j")
    def test_j_matches_theta_flux(self):
        p = SystemParams(omega1=1, omega2=1, g=0.1, gamma=0.1, nbar1=0, nbar2=1)
        fr = flux(p, solve_lyapunov(p))
        assert fr.J == pytest.approx(fr.theta_flux, abs=1e-10)


class TestFixedPointInsertion:
    def test_steady_state_constant_under_integration(self, rng):
        for _ in range(10):
            p = stable_resonant(rng, nbar_floor=0.25)
            ss = solve_lyapunov(p)
            traj = propagate_covariance(p, CovarianceState(0.0, ss.theta_ss), 30.0,
                                        strict_physicality=False)
            assert np.abs(traj.covariances - ss.theta_ss).max() < 1e-9
