"""Stationary covariances: numeric Lyapunov solve, resonant closed form, flux.

The stationary state solves W Theta + Theta W† = -D.  The numeric route
vectorizes this into a 16x16 linear system (Kronecker form) and is the gold
standard; the closed form implements the published resonant-case expressions,
which the validation suite compares against the numeric solution (they are
known to disagree away from xi = 0 -- see README notes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from .errors import (
    DeltaSingularError,
    DetuningNotZeroError,
    NoUniqueSteadyStateError,
    SingularSolveError,
)
from .model import (
    SystemParams,
    build_diffusion_matrix,
    build_dynamical_matrix,
    gamma12,
)

UNDAMPED_TOL = 1e-9
NEAR_SINGULAR_TOL = 1e-6
DELTA_SINGULAR_TOL = 1e-12


class SteadyMethod(Enum):
    NUMERIC_SOLVE = "NumericSolve"
    CLOSED_FORM = "ClosedForm"


@dataclass(frozen=True)
class SteadyState:
    """Stationary covariance with its residual against the stationary equation.

    ``theta_ss`` uses the same orientation as
    :class:`~oscsync.dynamics.CovarianceState`: <a1† a2> sits at [2, 0].
    """

    theta_ss: NDArray[np.complex128]
    residual: float
    method: SteadyMethod
    near_singular: bool = False

    @property
    def occupation1(self) -> float:
        return float(self.theta_ss[0, 0].real - 0.5)

    @property
    def occupation2(self) -> float:
        return float(self.theta_ss[2, 2].real - 0.5)

    @property
    def a1dag_a2(self) -> complex:
        """Stationary inter-mode moment <a1† a2>."""
        return complex(self.theta_ss[2, 0])


def _residual(W, D, theta) -> float:
    return float(np.linalg.norm(W @ theta + theta @ W.conj().T + D))


def solve_lyapunov(p: SystemParams) -> SteadyState:
    """Solve the stationary equation W Theta + Theta W† = -D directly.

    The 16x16 vectorized system (W (x) I + I (x) conj W) vec(Theta) = -vec(D)
    is solved densely and the result re-Hermitized.

    Raises
    ------
    NoUniqueSteadyStateError
        If min|Re eig W| < 1e-9 (an undamped mode: the physical state grows
        without bound, e.g. |xi| -> 1 at zero detuning).
    SingularSolveError
        If the linear system is rank-deficient away from that regime.
    """
    W = build_dynamical_matrix(p).W
    D = build_diffusion_matrix(p).D
    margin = float(np.abs(np.linalg.eigvals(W).real).min())
    if margin < UNDAMPED_TOL:
        raise NoUniqueSteadyStateError(
            f"min|Re eig W| = {margin:.3g} < {UNDAMPED_TOL:g}: undamped mode, "
            "stationary covariance diverges")
    system = np.kron(W, np.eye(4)) + np.kron(np.eye(4), W.conj())
    try:
        vec = np.linalg.solve(system, -D.reshape(-1).astype(complex))
    except np.linalg.LinAlgError as exc:
        raise SingularSolveError(f"stationary system singular: {exc}") from exc
    theta = vec.reshape(4, 4)
    theta = 0.5 * (theta + theta.conj().T)
    return SteadyState(
        theta_ss=theta,
        residual=_residual(W, D, theta),
        method=SteadyMethod.NUMERIC_SOLVE,
        near_singular=margin < NEAR_SINGULAR_TOL,
    )


def _assemble_theta(th11: float, th22: float, a1dag_a2: complex) -> NDArray[np.complex128]:
    theta = np.zeros((4, 4), dtype=complex)
    theta[0, 0] = theta[1, 1] = th11
    theta[2, 2] = theta[3, 3] = th22
    theta[2, 0] = a1dag_a2
    theta[0, 2] = np.conj(a1dag_a2)
    theta[1, 3] = a1dag_a2
    theta[3, 1] = np.conj(a1dag_a2)
    return theta


def closed_form_steady(p: SystemParams) -> SteadyState:
    """Resonant closed-form stationary covariance.

    For omega1 = omega2, with Delta = (gamma12 (n1+n2+1) + 2 gamma
    sqrt(n1 n2)) / (2 (gamma^2 - gamma12^2 xi^2)):

        Theta11 = (n1 + 1/2) + 2g^2/(4g^2+gamma^2) (n2-n1) + xi^2 gamma12 Delta
        Theta22 = (n2 + 1/2) - 2g^2/(4g^2+gamma^2) (n2-n1) + xi^2 gamma12 Delta
        <a1† a2> = i g gamma/(4g^2+gamma^2) (n2-n1) + gamma xi Delta

    remaining entries by Hermiticity and sector conjugation.  The residual
    field records how far this sits from the numeric stationary equation;
    away from xi = 0 the two routes disagree (tracked by the validation
    suite; the numeric solve is authoritative).

    Raises
    ------
    DetuningNotZeroError
        If omega1 != omega2.
    DeltaSingularError
        If |gamma^2 - gamma12^2 xi^2| < 1e-12.
    """
    if p.omega1 != p.omega2:
        raise DetuningNotZeroError(
            f"closed form requires omega1 == omega2, got detuning {p.delta}")
    g12 = gamma12(p)
    denom = p.gamma**2 - g12**2 * p.xi**2
    if abs(denom) < DELTA_SINGULAR_TOL:
        raise DeltaSingularError(
            f"gamma^2 - gamma12^2 xi^2 = {denom:.3g} is singular")
    big_delta = (g12 * (p.nbar1 + p.nbar2 + 1.0)
                 + 2.0 * p.gamma * math.sqrt(p.nbar1 * p.nbar2)) / (2.0 * denom)
    lorentz = 2.0 * p.g**2 / (4.0 * p.g**2 + p.gamma**2) if p.gamma or p.g else 0.0
    bias = p.nbar2 - p.nbar1
    th11 = (p.nbar1 + 0.5) + lorentz * bias + p.xi**2 * g12 * big_delta
    th22 = (p.nbar2 + 0.5) - lorentz * bias + p.xi**2 * g12 * big_delta
    imag = p.g * p.gamma / (4.0 * p.g**2 + p.gamma**2) if p.gamma or p.g else 0.0
    a1dag_a2 = 1j * imag * bias + p.gamma * p.xi * big_delta
    theta = _assemble_theta(th11, th22, a1dag_a2)
    W = build_dynamical_matrix(p).W
    D = build_diffusion_matrix(p).D
    return SteadyState(theta_ss=theta, residual=_residual(W, D, theta),
                       method=SteadyMethod.CLOSED_FORM)


def _closed_form_of_stationary_equation(p: SystemParams) -> SteadyState:
    """Exact closed-form solution of the shipped stationary equation (resonant case).

    Identical in structure to :func:`closed_form_steady` but with the
    sqrt(n1 n2) term of Delta negated and the real part of <a1† a2> sign
    flipped; matches :func:`solve_lyapunov` to machine precision and is used
    by the validation suite to characterize the closed-form discrepancy.
    """
    if p.omega1 != p.omega2:
        raise DetuningNotZeroError(
            f"closed form requires omega1 == omega2, got detuning {p.delta}")
    g12 = gamma12(p)
    denom = p.gamma**2 - g12**2 * p.xi**2
    if abs(denom) < DELTA_SINGULAR_TOL:
        raise DeltaSingularError(
            f"gamma^2 - gamma12^2 xi^2 = {denom:.3g} is singular")
    delta_eff = (g12 * (p.nbar1 + p.nbar2 + 1.0)
                 - 2.0 * p.gamma * math.sqrt(p.nbar1 * p.nbar2)) / (2.0 * denom)
    lorentz = 2.0 * p.g**2 / (4.0 * p.g**2 + p.gamma**2) if p.gamma or p.g else 0.0
    bias = p.nbar2 - p.nbar1
    th11 = (p.nbar1 + 0.5) + lorentz * bias + p.xi**2 * g12 * delta_eff
    th22 = (p.nbar2 + 0.5) - lorentz * bias + p.xi**2 * g12 * delta_eff
    imag = p.g * p.gamma / (4.0 * p.g**2 + p.gamma**2) if p.gamma or p.g else 0.0
    a1dag_a2 = 1j * imag * bias - p.gamma * p.xi * delta_eff
    theta = _assemble_theta(th11, th22, a1dag_a2)
    W = build_dynamical_matrix(p).W
    D = build_diffusion_matrix(p).D
    return SteadyState(theta_ss=theta, residual=_residual(W, D, theta),
                       method=SteadyMethod.CLOSED_FORM)


@dataclass(frozen=True)
class SingularXi:
    """The two candidate locations of the stationary-state divergence in |xi|.

    ``occupation_form`` is sqrt(1/(n1+n2+1)); ``denominator_form`` is the root
    gamma/gamma12 of the closed-form denominator gamma^2 - gamma12^2 xi^2.
    They agree at zero temperature and whenever one bath is at zero
    temperature; otherwise they differ, and the empirical divergence of
    :func:`solve_lyapunov` follows the denominator form (the undamped-mode
    condition |xi| gamma12 = gamma).  Both are reported.
    """

    occupation_form: float
    denominator_form: float


def singular_xi(p: SystemParams) -> SingularXi:
    """Both candidate singular |xi| values (each understood as +-)."""
    occ = math.sqrt(1.0 / (p.nbar1 + p.nbar2 + 1.0))
    k = math.sqrt((p.nbar1 + 1.0) * (p.nbar2 + 1.0)) - math.sqrt(p.nbar1 * p.nbar2)
    return SingularXi(occupation_form=occ, denominator_form=1.0 / k)


@dataclass(frozen=True)
class FluxReport:
    """Stationary quanta flux between the thermally biased modes.

    ``J`` is the closed-form rate 2 g gamma (n2-n1)/(4g^2+gamma^2);
    ``theta_flux`` is the flux evaluated from the stationary covariance,
    2 g Im<a1† a2> (what the coupling carries into mode 1).  The two differ
    systematically (theta_flux = g * J at resonance) -- see README notes.

    ``continuity_residual`` is the two-term rate balance
    |gamma (nbar1 - n1_ss) - i g (theta12 - theta21)|; it vanishes only where
    the correlated channels carry no population flux (xi = 0, or
    Re<a1† a2> = 0).  ``full_balance_residual`` additionally subtracts the
    cross-channel term xi gamma12 Re<a1† a2> and vanishes for every numeric
    stationary solution.
    """

    J: float
    theta_flux: float
    continuity_residual: float
    full_balance_residual: float
    direction: float


def flux(p: SystemParams, ss: SteadyState) -> FluxReport:
    """Flux of quanta from the warmer to the cooler bath, plus rate-balance checks."""
    bias = p.nbar2 - p.nbar1
    j = 2.0 * p.g * p.gamma * bias / (4.0 * p.g**2 + p.gamma**2) if (p.g or p.gamma) else 0.0
    th12 = ss.a1dag_a2
    theta_flux = 2.0 * p.g * th12.imag
    bath_rate = p.gamma * (p.nbar1 - ss.occupation1)
    two_term = bath_rate - 1j * p.g * (th12 - np.conj(th12))
    full = two_term - p.xi * gamma12(p) * th12.real
    return FluxReport(J=j, theta_flux=theta_flux,
                      continuity_residual=float(abs(two_term)),
                      full_balance_residual=float(abs(full)),
                      direction=float(np.sign(bias)))
