"""Seeded cross-module invariant checks, exposed through the ``validate`` subcommand.

Every check is deterministic for a fixed seed and returns a measured value
against a threshold.  Known internal inconsistencies of the shipped model
(the diffusion cross term vs. the channel-assembled dissipator, the resonant
closed form vs. the numeric stationary solve, the flux formula vs. the
covariance-derived flux) are pinned down by *characterization* checks that
assert the exact analytic form of the discrepancy rather than hiding it; see
README notes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import gauss_info
from .dynamics import (
    CovarianceState,
    MomentState,
    eigenspectrum,
    propagate_covariance,
    propagate_moments,
    sync_diagnostics,
)
from .errors import NoUniqueSteadyStateError
from .model import (
    SystemParams,
    assemble_generators,
    build_diffusion_matrix,
    build_dynamical_matrix,
    gamma12,
    validate_params,
)
from .steady import (
    _closed_form_of_stationary_equation,
    closed_form_steady,
    flux,
    singular_xi,
    solve_lyapunov,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    threshold: float
    passed: bool
    note: str


def _draw_params(rng: np.random.Generator, nbar_floor: float = 0.0,
                 xi_max: float = 1.0) -> SystemParams:
    return SystemParams(
        omega1=rng.uniform(0.5, 2.0),
        omega2=rng.uniform(0.5, 2.0),
        g=rng.uniform(0.0, 0.5),
        gamma=rng.uniform(0.0, 1.0),
        xi=rng.uniform(-xi_max, xi_max),
        nbar1=rng.uniform(nbar_floor, 3.0),
        nbar2=rng.uniform(nbar_floor, 3.0),
    )


def _draw_stable_params(rng: np.random.Generator, nbar_floor: float,
                        xi_max: float, margin: float = 1e-3) -> SystemParams:
    while True:
        p = replace(_draw_params(rng, nbar_floor, xi_max),
                    gamma=rng.uniform(0.05, 1.0))
        W = build_dynamical_matrix(p).W
        if np.linalg.eigvals(W).real.max() < -margin:
            return p


def _random_physical_sigma(rng: np.random.Generator) -> np.ndarray:
    """Random physical two-mode quadrature covariance via symplectic conjugation."""
    def rot(t):
        return np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])

    def local(rng):
        r = rng.uniform(0.0, 0.8)
        return rot(rng.uniform(0, 2 * math.pi)) @ np.diag([math.exp(r), math.exp(-r)]) \
            @ rot(rng.uniform(0, 2 * math.pi))

    nu1, nu2 = rng.uniform(0.5, 2.5, 2)
    t = rng.uniform(0, 2 * math.pi)
    c, s = math.cos(t), math.sin(t)
    mixer = np.block([[c * np.eye(2), s * np.eye(2)], [-s * np.eye(2), c * np.eye(2)]])
    S = np.block([[local(rng), np.zeros((2, 2))], [np.zeros((2, 2)), local(rng)]]) @ mixer
    return S @ np.diag([nu1, nu1, nu2, nu2]) @ S.T


def classical_correlations_grid(sigma, n_s: int = 400, n_phi: int = 180,
                                log_s_range: float = 2.0) -> float:
    """Brute-force grid oracle for the classical-correlations supremum.

    Vectorized scan over (squeezing, angle) pure measurement seeds; used as an
    optimizer-independent reference.
    """
    sig = np.asarray(sigma, dtype=float) if not hasattr(sigma, "sigma") else sigma.sigma
    A = sig[:2, :2]
    G = sig[:2, 2:]
    B = sig[2:, 2:]
    s = np.logspace(-log_s_range, log_s_range, n_s)[:, None]
    phi = np.linspace(0.0, math.pi, n_phi, endpoint=False)[None, :]
    c, sn = np.cos(phi), np.sin(phi)
    sig11 = 0.5 * (s * c**2 + sn**2 / s) + B[0, 0]
    sig22 = 0.5 * (s * sn**2 + c**2 / s) + B[1, 1]
    sig12 = 0.5 * c * sn * (s - 1.0 / s) + B[0, 1]
    det_m = sig11 * sig22 - sig12**2
    g11, g12_, g21, g22 = G[0, 0], G[0, 1], G[1, 0], G[1, 1]
    t11 = (g11**2 * sig22 - 2 * g11 * g12_ * sig12 + g12_**2 * sig11) / det_m
    t12 = (g11 * g21 * sig22 - (g11 * g22 + g12_ * g21) * sig12 + g12_ * g22 * sig11) / det_m
    t22 = (g21**2 * sig22 - 2 * g21 * g22 * sig12 + g22**2 * sig11) / det_m
    det_cond = (A[0, 0] - t11) * (A[1, 1] - t22) - (A[0, 1] - t12)**2
    det_cond = np.where(det_cond > 0, det_cond, np.inf)
    val = 0.5 * np.log(np.linalg.det(A) / det_cond)
    return float(max(0.0, val.max()))


def _check(name, value, threshold, passed, note) -> CheckResult:
    return CheckResult(name, float(value), float(threshold), bool(passed), note)


def check_eigenvalues_closed_vs_numeric(rng, draws=1000) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        p = _draw_params(rng)
        sr = eigenspectrum(p)
        ev = np.linalg.eigvals(build_dynamical_matrix(p).M)
        if (ev[1].real, ev[1].imag) > (ev[0].real, ev[0].imag):
            ev = ev[::-1]
        worst = max(worst, abs(sr.lambda_plus - ev[0]), abs(sr.lambda_minus - ev[1]))
    return _check("eigenvalues_closed_vs_numeric", worst, 1e-10, worst <= 1e-10,
                  f"max |closed - dense eig| over {draws} draws")


def check_propagator_composition(rng, draws=200) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        p = _draw_params(rng)
        t1, t2 = rng.uniform(0.1, 5.0, 2)
        x0 = MomentState.displaced(complex(rng.normal(), rng.normal()),
                                   complex(rng.normal(), rng.normal()))
        one = propagate_moments(p, x0, t1 + t2)
        two = propagate_moments(p, propagate_moments(p, x0, t1), t2)
        worst = max(worst, float(np.abs(one.x - two.x).max()))
    return _check("propagator_composition", worst, 1e-10, worst <= 1e-10,
                  f"max |U(t1+t2) - U(t2)U(t1)| x0 over {draws} draws")


def check_integrator_order() -> CheckResult:
    p = SystemParams(omega1=1, omega2=1, g=1, gamma=0.1, xi=0.5, nbar1=0.5, nbar2=0.5)
    theta0 = CovarianceState.vacuum()
    ref = propagate_covariance(p, theta0, 4.0, dt=0.002).covariances[-1]
    errs = []
    for dt in (0.08, 0.04):
        end = propagate_covariance(p, theta0, 4.0, dt=dt).covariances[-1]
        errs.append(np.abs(end - ref).max())
    order = math.log2(errs[0] / errs[1])
    return _check("covariance_integrator_order", order, 3.5, order >= 3.5,
                  "observed convergence order under step halving (passes when >= threshold)")


def check_hermiticity_and_pairing(rng, draws=50) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        p = _draw_stable_params(rng, nbar_floor=0.25, xi_max=0.9)
        traj = propagate_covariance(p, CovarianceState.thermal(p.nbar1, p.nbar2),
                                    10.0, strict_physicality=False)
        for th in traj.covariances[::5]:
            worst = max(worst, float(np.abs(th - th.conj().T).max()))
        m = traj.moments
        worst = max(worst, float(np.abs(m[:, 1] - m[:, 0].conj()).max()),
                    float(np.abs(m[:, 3] - m[:, 2].conj()).max()))
    return _check("hermiticity_and_conjugation_pairing", worst, 1e-12, worst <= 1e-12,
                  "max Hermiticity / pairing defect over sampled trajectories")


def check_unitary_purity(rng, draws=20) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        p = SystemParams(omega1=rng.uniform(0.5, 2), omega2=rng.uniform(0.5, 2),
                         g=rng.uniform(0, 0.5), gamma=0.0)
        sig0 = gauss_info.ladder_to_quadrature_matrix(np.diag([0.7, 0.7, 1.1, 1.1]).astype(complex))
        nus0 = gauss_info.symplectic_eigenvalues(sig0)
        traj = propagate_covariance(p, CovarianceState(0.0, np.diag([0.7, 0.7, 1.1, 1.1]).astype(complex)),
                                    8.0, dt=0.01)
        for th in traj.covariances[::40]:
            nus = gauss_info.symplectic_eigenvalues(gauss_info.ladder_to_quadrature_matrix(th))
            worst = max(worst, abs(nus[0] - nus0[0]), abs(nus[1] - nus0[1]))
    return _check("undamped_purity_preservation", worst, 1e-9, worst <= 1e-9,
                  "max symplectic-eigenvalue drift at gamma = 0")


def check_dissipator_roundtrip_w(rng, draws=1000) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        p = _draw_params(rng)
        W_built = build_dynamical_matrix(p).W
        W_asm, _ = assemble_generators(p)
        worst = max(worst, float(np.abs(W_built - W_asm).max()))
    return _check("dissipator_roundtrip_W", worst, 1e-12, worst <= 1e-12,
                  f"max |W_built - W_assembled| over {draws} draws")


def check_dissipator_roundtrip_d_diagonal(rng, draws=1000) -> CheckResult:
    worst = 0.0
    cross = np.zeros((4, 4), dtype=bool)
    cross[0, 2] = cross[2, 0] = cross[1, 3] = cross[3, 1] = True
    for _ in range(draws):
        p = _draw_params(rng)
        D_built = build_diffusion_matrix(p).D
        _, D_asm = assemble_generators(p)
        diff = np.abs(D_built - D_asm)
        diff[cross] = 0.0
        worst = max(worst, float(diff.max()))
    return _check("dissipator_roundtrip_D_diagonal", worst, 1e-12, worst <= 1e-12,
                  f"max diagonal/structure defect over {draws} draws (cross entries excluded)")


def check_diffusion_cross_defect(rng, draws=1000) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        p = _draw_params(rng)
        D_built = build_diffusion_matrix(p).D
        _, D_asm = assemble_generators(p)
        expected = p.xi * gamma12(p) / 2.0
        worst = max(worst, abs((D_asm[0, 2] - D_built[0, 2]) - expected))
    return _check(
        "diffusion_cross_term_defect_characterized", worst, 1e-12, worst <= 1e-12,
        "assembled-minus-built cross entry equals xi*gamma12/2 exactly "
        "(the shipped cross term xi*gamma*sqrt(n1*n2) is not the channel-assembled one)")


def check_vacuum_drift_at_zero_temperature(rng, draws=200) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        p = replace(_draw_params(rng), nbar1=0.0, nbar2=0.0)
        W = build_dynamical_matrix(p).W
        D = build_diffusion_matrix(p).D
        drift = np.linalg.norm(W @ (0.5 * np.eye(4)) + (0.5 * np.eye(4)) @ W.conj().T + D)
        worst = max(worst, abs(drift - abs(p.xi) * gamma12(p)))
    return _check(
        "vacuum_drift_at_zero_temperature_characterized", worst, 1e-12, worst <= 1e-12,
        "with the shipped diffusion the vacuum is not stationary at T=0, xi != 0; "
        "the drift norm equals |xi|*gamma12 exactly")


def check_steady_residual(rng, draws=300, d_sign=1.0) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        p = _draw_stable_params(rng, nbar_floor=0.0, xi_max=0.95)
        W = build_dynamical_matrix(p).W
        D = d_sign * build_diffusion_matrix(p).D
        system = np.kron(W, np.eye(4)) + np.kron(np.eye(4), W.conj())
        theta = np.linalg.solve(system, -D.reshape(-1).astype(complex)).reshape(4, 4)
        theta = 0.5 * (theta + theta.conj().T)
        res = np.linalg.norm(W @ theta + theta @ W.conj().T + D)
        worst = max(worst, res / np.linalg.norm(D))
    return _check("steady_residual_relative", worst, 1e-10, worst <= 1e-10,
                  f"max ||W Th + Th W† + D||_F / ||D||_F over {draws} stable draws")


def check_steady_fixed_point(rng, draws=25) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        p = _draw_stable_params(rng, nbar_floor=0.25, xi_max=0.9)
        ss = solve_lyapunov(p)
        traj = propagate_covariance(p, CovarianceState(0.0, ss.theta_ss),
                                    20.0, strict_physicality=False)
        worst = max(worst, float(np.abs(traj.covariances[-1] - ss.theta_ss).max()))
    return _check("steady_state_is_fixed_point", worst, 1e-9, worst <= 1e-9,
                  f"max drift of the stationary covariance over t=20, {draws} draws")


def check_closed_form_characterized(rng, draws=300) -> CheckResult:
    worst = 0.0
    published_dev = 0.0
    for _ in range(draws):
        p = _draw_stable_params(rng, nbar_floor=0.0, xi_max=0.9)
        p = replace(p, omega2=p.omega1)
        if abs(p.gamma**2 - (gamma12(p) * p.xi)**2) < 1e-3:
            continue
        num = solve_lyapunov(p).theta_ss
        consistent = _closed_form_of_stationary_equation(p).theta_ss
        published = closed_form_steady(p).theta_ss
        worst = max(worst, float(np.abs(num - consistent).max()))
        published_dev = max(published_dev, float(np.abs(num - published).max()))
    return _check(
        "closed_form_of_stationary_equation_characterized", worst, 1e-9, worst <= 1e-9,
        "numeric solve equals the consistent closed form exactly; the published-form "
        f"route deviates from the numeric solve by up to {published_dev:.3e} on this corpus "
        "(numeric solve is authoritative)")


def check_flux_continuity(rng, draws=300) -> CheckResult:
    worst_full = 0.0
    worst_xi0 = 0.0
    worst_char = 0.0
    for _ in range(draws):
        p = _draw_stable_params(rng, nbar_floor=0.0, xi_max=0.95)
        ss = solve_lyapunov(p)
        fr = flux(p, ss)
        worst_full = max(worst_full, fr.full_balance_residual)
        # the two-term continuity holds on the xi = 0 slice and deviates by
        # exactly the cross-channel flux |xi gamma12 Re<a1† a2>| elsewhere
        worst_char = max(worst_char, abs(
            fr.continuity_residual - abs(p.xi * gamma12(p) * ss.a1dag_a2.real)))
        q = replace(p, xi=0.0)
        worst_xi0 = max(worst_xi0, flux(q, solve_lyapunov(q)).continuity_residual)
    worst = max(worst_full, worst_xi0, worst_char)
    return _check("flux_continuity_residual", worst, 1e-10, worst <= 1e-10,
                  f"over {draws} draws: full three-term balance everywhere, two-term "
                  "continuity at xi = 0, and the off-slice two-term residual equals "
                  "|xi gamma12 Re<a1† a2>| (the cross-channel flux the two-term form omits)")


def check_flux_xi_invariance(rng, draws=100) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        p = _draw_stable_params(rng, nbar_floor=0.25, xi_max=0.0)
        p = replace(p, omega2=p.omega1)
        vals_j, vals_t = [], []
        for xi in (-0.9, 0.0, 0.9):
            q = validate_params(replace(p, xi=xi))
            if np.linalg.eigvals(build_dynamical_matrix(q).W).real.max() > -1e-6:
                break
            fr = flux(q, solve_lyapunov(q))
            vals_j.append(fr.J)
            vals_t.append(fr.theta_flux)
        if len(vals_j) == 3:
            worst = max(worst, np.ptp(vals_j), np.ptp(vals_t))
    return _check("flux_xi_invariance", worst, 1e-12, worst <= 1e-12,
                  "spread of J and of the covariance-derived flux across xi in "
                  "{-0.9, 0, 0.9} at resonance")


def check_flux_formula_vs_theta(rng, draws=300) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        p = _draw_stable_params(rng, nbar_floor=0.0, xi_max=0.95)
        p = replace(p, omega2=p.omega1)
        fr = flux(p, solve_lyapunov(p))
        worst = max(worst, abs(fr.theta_flux - p.g * fr.J))
    return _check(
        "flux_formula_vs_theta_characterized", worst, 1e-10, worst <= 1e-10,
        "at resonance the covariance-derived flux equals g * J exactly: the closed-form "
        "rate J and the covariance-derived flux differ by one power of the coupling "
        "(documented defect)")


def check_steady_physicality(rng, draws=400, d_sign=1.0) -> CheckResult:
    worst = math.inf
    for _ in range(draws):
        p = _draw_stable_params(rng, nbar_floor=0.25, xi_max=0.9)
        W = build_dynamical_matrix(p).W
        D = d_sign * build_diffusion_matrix(p).D
        system = np.kron(W, np.eye(4)) + np.kron(np.eye(4), W.conj())
        theta = np.linalg.solve(system, -D.reshape(-1).astype(complex)).reshape(4, 4)
        theta = 0.5 * (theta + theta.conj().T)
        sigma = gauss_info.ladder_to_quadrature_matrix(theta)
        ev = np.linalg.eigvals(1j * gauss_info.symplectic_form(2) @ sigma)
        worst = min(worst, float(np.sort(np.abs(ev.real))[0]) if np.all(np.isfinite(ev)) else -1.0)
        if np.linalg.eigvalsh(sigma).min() <= 0:
            worst = min(worst, -1.0)
    return _check("steady_physicality_corpus", worst, 0.5 - 1e-10, worst >= 0.5 - 1e-10,
                  f"min symplectic eigenvalue over {draws} stationary states, "
                  "occupations in [0.25, 3], |xi| <= 0.9 (passes when >= threshold)")


def check_trajectory_physicality(rng, draws=60) -> CheckResult:
    worst = math.inf
    for _ in range(draws):
        p = _draw_stable_params(rng, nbar_floor=0.25, xi_max=0.9)
        for theta0 in (CovarianceState.vacuum(), CovarianceState.thermal(p.nbar1, p.nbar2)):
            traj = propagate_covariance(p, theta0, 15.0, strict_physicality=False)
            for th in traj.covariances[::10]:
                sigma = gauss_info.ladder_to_quadrature_matrix(th)
                nus = gauss_info.symplectic_eigenvalues(sigma)
                worst = min(worst, nus[1])
    return _check("trajectory_physicality_corpus", worst, 0.5 - 1e-10, worst >= 0.5 - 1e-10,
                  f"min symplectic eigenvalue along {draws} trajectory pairs (passes when >= threshold)")


def check_optimizer_vs_grid(rng, states=50) -> CheckResult:
    # one-sided on random states: the optimizer must never land below the
    # brute-force grid (grid - optimizer <= 1e-6); the two-sided agreement is
    # gated on reference stationary states of the model itself, where the
    # 400x180 grid resolves the optimum to better than 1e-6 (on strongly
    # elongated states the grid's own discretization error exceeds that)
    worst_below = 0.0
    worst_two_sided = 0.0
    for _ in range(states):
        sigma = _random_physical_sigma(rng)
        j_opt, _ = gauss_info.classical_correlations(sigma)
        j_grid = classical_correlations_grid(sigma)
        worst_below = max(worst_below, j_grid - j_opt)
        worst_two_sided = max(worst_two_sided, abs(j_opt - j_grid))
    for xi, n in ((0.25, 0.5), (0.5, 0.5), (0.5, 1.0), (-0.5, 0.5)):
        p = SystemParams(omega1=1, omega2=1, g=1, gamma=0.1, xi=xi, nbar1=n, nbar2=n)
        sigma = gauss_info.ladder_to_quadrature_matrix(solve_lyapunov(p).theta_ss)
        j_opt, _ = gauss_info.classical_correlations(sigma)
        j_grid = classical_correlations_grid(sigma)
        worst_below = max(worst_below, abs(j_opt - j_grid))
    return _check("classical_correlations_optimizer_vs_grid", worst_below, 1e-6,
                  worst_below <= 1e-6,
                  f"grid never beats the optimizer ({states} random states) and the two "
                  "agree two-sided on reference stationary states; max two-sided gap on "
                  f"the random corpus was {worst_two_sided:.3e} (grid resolution limited)")


def check_discord_bounds(rng, states=50) -> CheckResult:
    worst = 0.0
    for _ in range(states):
        sigma = _random_physical_sigma(rng)
        rep = gauss_info.info_report(sigma)
        worst = max(worst, -rep.I2, -rep.J2, rep.D2 - rep.I2, -rep.D2,
                    rep.D2_lower - rep.D2)
    return _check("discord_bound_chain", worst, 1e-9, worst <= 1e-9,
                  "max violation of 0 <= D2 <= I2, J2 >= 0 and lower-bound <= D2 "
                  f"over {states} random physical states")


def check_local_symplectic_invariance(rng, states=25) -> CheckResult:
    def rot(t):
        return np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])

    worst = 0.0
    for _ in range(states):
        sigma = _random_physical_sigma(rng)
        r = rng.uniform(0, 0.6, 2)
        blocks = [rot(rng.uniform(0, 2 * math.pi)) @ np.diag([math.exp(ri), math.exp(-ri)])
                  @ rot(rng.uniform(0, 2 * math.pi)) for ri in r]
        S = np.block([[blocks[0], np.zeros((2, 2))], [np.zeros((2, 2)), blocks[1]]])
        sigma2 = S @ sigma @ S.T
        for f in (gauss_info.mutual_information,
                  lambda s: gauss_info.classical_correlations(s)[0]):
            worst = max(worst, abs(f(sigma) - f(sigma2)))
        worst = max(worst, abs(gauss_info.gaussian_discord(sigma)
                               - gauss_info.gaussian_discord(sigma2)))
    return _check("info_local_symplectic_invariance", worst, 1e-9, worst <= 1e-9,
                  f"max change of I2/J2/D2 under local symplectics, {states} states")


def check_basis_roundtrip(rng, draws=200) -> CheckResult:
    worst = 0.0
    for _ in range(draws):
        theta = gauss_info.quadrature_to_ladder(_random_physical_sigma(rng))
        sigma = gauss_info.ladder_to_quadrature(theta)
        back = gauss_info.quadrature_to_ladder(sigma)
        worst = max(worst, float(np.abs(back - theta).max()))
    return _check("ladder_quadrature_roundtrip", worst, 1e-13, worst <= 1e-13,
                  f"max round-trip defect over {draws} random physical covariances")


def check_williamson_invariance(rng, draws=100) -> CheckResult:
    worst = 0.0
    omega = gauss_info.symplectic_form(2)
    for _ in range(draws):
        sigma = _random_physical_sigma(rng)
        h = rng.normal(size=(4, 4))
        h = 0.5 * (h + h.T)
        from scipy.linalg import expm
        S = expm(omega @ h * 0.3)
        sigma2 = S @ sigma @ S.T
        n1 = gauss_info.symplectic_eigenvalues(sigma)
        n2 = gauss_info.symplectic_eigenvalues(sigma2)
        worst = max(worst, abs(n1[0] - n2[0]), abs(n1[1] - n2[1]),
                    abs(np.linalg.det(sigma) - np.linalg.det(sigma2)))
    return _check("williamson_invariance", worst, 1e-10, worst <= 1e-10,
                  f"max drift of det and symplectic spectrum under {draws} random symplectics")


def check_entropy_conventions(rng, draws=100) -> CheckResult:
    vac = 0.5 * np.eye(4)
    worst = abs(gauss_info.renyi2_entropy(vac))
    for _ in range(draws):
        n1, n2 = rng.uniform(0.0, 3.0, 2)
        sigma = np.diag([n1 + 0.5, n1 + 0.5, n2 + 0.5, n2 + 0.5])
        total = gauss_info.renyi2_entropy(sigma)
        parts = gauss_info.renyi2_entropy(sigma, modes=(0,)) + gauss_info.renyi2_entropy(sigma, modes=(1,))
        worst = max(worst, abs(total - parts))
    return _check("entropy_vacuum_zero_and_additivity", worst, 1e-12, worst <= 1e-12,
                  "S2(vacuum) = 0 and additivity over product states")


def check_sync_phase_locking() -> CheckResult:
    worst = 0.0
    expected = {-1.0: 0.0, 1.0: math.pi}
    for xi, target in expected.items():
        p = SystemParams(omega1=1, omega2=1, g=0.1, gamma=0.1, xi=xi)
        traj = propagate_covariance(p, CovarianceState.vacuum(), 100 * 2 * math.pi,
                                    dt=2 * math.pi / 100,
                                    x0=MomentState.displaced(1.0, 0.6j),
                                    strict_physicality=False)
        diag = sync_diagnostics(traj)
        worst = max(worst, abs(diag.decay_rate_fit))
        half = len(diag.relative_phase) // 2
        dev = np.abs(np.angle(np.exp(1j * (diag.relative_phase[half:] - target))))
        worst = max(worst, float(dev.max()))
    return _check("synchronized_phase_locking", worst, 1e-3, worst <= 1e-3,
                  "at |xi| = 1: envelope decay-rate fit and deviation of the settled "
                  "relative phase from 0 (xi=-1) / pi (xi=+1)")


def check_divergence_location(rng, draws=20) -> CheckResult:
    worst = 0.0
    notes = []
    for _ in range(draws):
        n1 = rng.uniform(0.2, 2.5)
        n2 = rng.uniform(0.2, 2.5)
        gam = rng.uniform(0.1, 0.8)
        p = SystemParams(omega1=1, omega2=1, g=rng.uniform(0, 1), gamma=gam,
                         nbar1=n1, nbar2=n2)
        sx = singular_xi(p)
        if sx.denominator_form > 1.0:
            continue
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            W = build_dynamical_matrix(replace(p, xi=mid)).W
            if np.linalg.eigvals(W).real.max() < 0.0:
                lo = mid
            else:
                hi = mid
        empirical = 0.5 * (lo + hi)
        worst = max(worst, abs(empirical - sx.denominator_form))
        notes.append(abs(empirical - sx.occupation_form))
    occ_dev = max(notes) if notes else 0.0
    return _check(
        "divergence_location_matches_denominator_form", worst, 1e-6, worst <= 1e-6,
        "empirical loss of stability sits at gamma/gamma12 (occupation-form candidate "
        f"deviates by up to {occ_dev:.3g} on this corpus)")


def run_all(seed: int = 12345, flip_diffusion_sign: bool = False,
            scale: float = 1.0) -> list[CheckResult]:
    """Run every named check with a deterministic seeded corpus.

    ``flip_diffusion_sign`` is a deliberate mutation hook: it negates the
    diffusion matrix inside the stationary-state checks, which must make the
    physicality check fail (a self-test of the suite's sensitivity).
    ``scale`` shrinks or grows corpus sizes (minimum 5 draws per check);
    output is deterministic for fixed (seed, flip, scale).
    """
    d_sign = -1.0 if flip_diffusion_sign else 1.0

    def n(draws: int) -> int:
        return max(5, int(round(draws * scale)))

    return [
        check_eigenvalues_closed_vs_numeric(np.random.default_rng(seed + 1), draws=n(1000)),
        check_propagator_composition(np.random.default_rng(seed + 2), draws=n(200)),
        check_integrator_order(),
        check_hermiticity_and_pairing(np.random.default_rng(seed + 3), draws=n(50)),
        check_unitary_purity(np.random.default_rng(seed + 4), draws=n(20)),
        check_dissipator_roundtrip_w(np.random.default_rng(seed + 5), draws=n(1000)),
        check_dissipator_roundtrip_d_diagonal(np.random.default_rng(seed + 6), draws=n(1000)),
        check_diffusion_cross_defect(np.random.default_rng(seed + 7), draws=n(1000)),
        check_vacuum_drift_at_zero_temperature(np.random.default_rng(seed + 8), draws=n(200)),
        check_steady_residual(np.random.default_rng(seed + 9), draws=n(300), d_sign=d_sign),
        check_steady_fixed_point(np.random.default_rng(seed + 10), draws=n(25)),
        check_closed_form_characterized(np.random.default_rng(seed + 11), draws=n(300)),
        check_flux_continuity(np.random.default_rng(seed + 12), draws=n(300)),
        check_flux_xi_invariance(np.random.default_rng(seed + 13), draws=n(100)),
        check_flux_formula_vs_theta(np.random.default_rng(seed + 14), draws=n(300)),
        check_steady_physicality(np.random.default_rng(seed + 15), draws=n(400), d_sign=d_sign),
        check_trajectory_physicality(np.random.default_rng(seed + 16), draws=n(60)),
        check_optimizer_vs_grid(np.random.default_rng(seed + 17), states=n(50)),
        check_discord_bounds(np.random.default_rng(seed + 18), states=n(50)),
        check_local_symplectic_invariance(np.random.default_rng(seed + 19), states=n(25)),
        check_basis_roundtrip(np.random.default_rng(seed + 20), draws=n(200)),
        check_williamson_invariance(np.random.default_rng(seed + 21), draws=n(100)),
        check_entropy_conventions(np.random.default_rng(seed + 22), draws=n(100)),
        check_sync_phase_locking(),
        check_divergence_location(np.random.default_rng(seed + 23), draws=n(20)),
    ]
