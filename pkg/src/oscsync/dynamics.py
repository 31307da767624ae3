"""Time evolution of moments and covariances, spectrum and synchronization diagnostics.

Moments evolve by the exact propagator exp(-i M t) of the reduced 2x2 block;
covariances are integrated with a fixed-step classical RK4 on
dTheta/dt = W Theta + Theta W† + D.  The non-Hermitian spectrum of M encodes
the synchronization transition: below threshold both eigenmodes damp at
gamma/2, above it the real parts lock and the damping splits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.typing import NDArray
from scipy.linalg import expm

from . import gauss_info
from .errors import (
    AmplitudeUnderflowError,
    NonFiniteError,
    PhysicalityLostError,
    StepTooLargeError,
)
from .model import SystemParams, build_diffusion_matrix, build_dynamical_matrix, gamma12

GAP_TOL = 1e-9
EIG_COND_FALLBACK = 1e8
PHYSICALITY_TOL = 1e-8
AMPLITUDE_FLOOR = 1e-12


class Regime(Enum):
    NORMAL = "Normal"
    EXCEPTIONAL_POINT = "ExceptionalPoint"
    SYNCHRONIZED = "Synchronized"


@dataclass(frozen=True)
class SpectralResult:
    """Eigenvalues lambda± of the reduced moment matrix with regime classification."""

    lambda_plus: complex
    lambda_minus: complex
    gap_real: float
    gap_imag: float
    regime: Regime


def eigenspectrum(p: SystemParams) -> SpectralResult:
    """Closed-form complex eigenvalues of the reduced moment matrix.

    lambda± = (omega1 + omega2 - i gamma)/2 ± sqrt((2g - i xi gamma12)^2 + delta^2)/2,
    branch chosen so lambda+ has the larger real part (tie: larger imaginary
    part).  Regime is Synchronized when the real parts agree within 1e-9 while
    the imaginary parts differ by more, ExceptionalPoint when both gaps are
    below 1e-9 with nonzero damping, Normal otherwise.
    """
    g12 = gamma12(p)
    center = 0.5 * (p.omega1 + p.omega2 - 1j * p.gamma)
    half = 0.5 * np.sqrt((2.0 * p.g - 1j * p.xi * g12) ** 2 + p.delta**2 + 0j)
    lp, lm = center + half, center - half
    if (lm.real, lm.imag) > (lp.real, lp.imag):
        lp, lm = lm, lp
    gap_real = abs(lp.real - lm.real)
    gap_imag = abs(lp.imag - lm.imag)
    if gap_real < GAP_TOL and gap_imag < GAP_TOL and p.gamma > 0.0:
        regime = Regime.EXCEPTIONAL_POINT
    elif gap_real < GAP_TOL and gap_imag > GAP_TOL:
        regime = Regime.SYNCHRONIZED
    else:
        regime = Regime.NORMAL
    return SpectralResult(complex(lp), complex(lm), gap_real, gap_imag, regime)


@dataclass(frozen=True)
class MomentState:
    """First moments (<a1>, <a1†>, <a2>, <a2†>) at time t.

    Components 2 and 4 must be the conjugates of components 1 and 3; the
    dynamics preserves this pairing exactly.
    """

    t: float
    x: NDArray[np.complex128]

    def __post_init__(self):
        x = np.asarray(self.x, dtype=complex)
        if x.shape != (4,):
            raise ValueError(f"moment vector must have shape (4,), got {x.shape}")
        if not np.all(np.isfinite(x.view(float))):
            raise NonFiniteError("moment vector contains non-finite entries")
        if abs(x[1] - np.conj(x[0])) > 1e-12 or abs(x[3] - np.conj(x[2])) > 1e-12:
            raise ValueError("conjugation pairing violated: x[1] != conj(x[0]) or x[3] != conj(x[2])")
        object.__setattr__(self, "x", x)

    @property
    def a1(self) -> complex:
        return complex(self.x[0])

    @property
    def a2(self) -> complex:
        return complex(self.x[2])

    @staticmethod
    def displaced(alpha1: complex, alpha2: complex, t: float = 0.0) -> "MomentState":
        return MomentState(t, np.array([alpha1, np.conj(alpha1), alpha2, np.conj(alpha2)]))


def _reduced_propagator(M: NDArray[np.complex128], t: float) -> NDArray[np.complex128]:
    # exact exp(-i M t); eigendecomposition unless M is near-defective
    lam, V = np.linalg.eig(M)
    if np.linalg.cond(V) > EIG_COND_FALLBACK:
        return expm(-1j * M * t)
    return V @ np.diag(np.exp(-1j * lam * t)) @ np.linalg.inv(V)


def propagate_moments(p: SystemParams, x0: MomentState, t: float) -> MomentState:
    """Exact moment propagation x(t) = exp(W t) x0.

    The (<a1>, <a2>) pair is propagated by exp(-i M t) via eigendecomposition
    of the 2x2 block; near an exceptional point (eigenvector condition number
    above 1e8) a scaling-and-squaring matrix exponential is used instead.  The
    conjugate components are rebuilt by conjugation, so the pairing invariant
    holds exactly.
    """
    if t == 0.0:
        return MomentState(x0.t, x0.x.copy())
    M = build_dynamical_matrix(p).M
    U = _reduced_propagator(M, t)
    a = U @ np.array([x0.x[0], x0.x[2]])
    if not np.all(np.isfinite(a.view(float))):
        raise NonFiniteError("moment propagation overflowed")
    return MomentState(x0.t + t, np.array([a[0], np.conj(a[0]), a[1], np.conj(a[1])]))


@dataclass(frozen=True)
class CovarianceState:
    """Hermitian 4x4 covariance Theta at time t.

    Convention: theta[i, j] = (1/2) <{dx_i, dx_j†}> in the ordering
    (a1, a1†, a2, a2†), so the vacuum is (1/2) I and <a1† a2> sits at
    theta[2, 0].  This is the orientation for which
    dTheta/dt = W Theta + Theta W† + D holds with W, D from the model
    builders.
    """

    t: float
    theta: NDArray[np.complex128]

    def __post_init__(self):
        th = np.asarray(self.theta, dtype=complex)
        if th.shape != (4, 4):
            raise ValueError(f"covariance must be 4x4, got {th.shape}")
        if np.abs(th - th.conj().T).max() > 1e-12:
            raise ValueError("covariance not Hermitian to 1e-12")
        object.__setattr__(self, "theta", th)

    @staticmethod
    def vacuum(t: float = 0.0) -> "CovarianceState":
        return CovarianceState(t, 0.5 * np.eye(4, dtype=complex))

    @staticmethod
    def thermal(nbar1: float, nbar2: float, t: float = 0.0) -> "CovarianceState":
        return CovarianceState(t, np.diag([nbar1 + 0.5, nbar1 + 0.5,
                                           nbar2 + 0.5, nbar2 + 0.5]).astype(complex))

    @property
    def occupation1(self) -> float:
        return float(self.theta[0, 0].real - 0.5)

    @property
    def occupation2(self) -> float:
        return float(self.theta[2, 2].real - 0.5)

    @property
    def a1dag_a2(self) -> complex:
        """Inter-mode moment <a1† a2> (the [2, 0] entry in this convention)."""
        return complex(self.theta[2, 0])


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled run of moments and covariances with run metadata."""

    params: SystemParams
    times: NDArray[np.float64]
    moments: NDArray[np.complex128]          # (n, 4)
    covariances: NDArray[np.complex128]      # (n, 4, 4)
    dt: float
    used_expm_fallback: bool
    physical: NDArray[np.bool_] = field(default=None)  # per-sample uncertainty check

    def moment_state(self, i: int) -> MomentState:
        return MomentState(float(self.times[i]), self.moments[i])

    def covariance_state(self, i: int) -> CovarianceState:
        return CovarianceState(float(self.times[i]), self.covariances[i])


def _rk4_step(W, D, theta, dt):
    def f(y):
        return W @ y + y @ W.conj().T + D
    k1 = f(theta)
    k2 = f(theta + 0.5 * dt * k1)
    k3 = f(theta + 0.5 * dt * k2)
    k4 = f(theta + dt * k3)
    return theta + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def propagate_covariance(
    p: SystemParams,
    theta0: CovarianceState,
    t_end: float,
    dt: float | None = None,
    x0: MomentState | None = None,
    strict_physicality: bool = True,
) -> Trajectory:
    """Integrate the covariance equation with fixed-step classical RK4.

    Every emitted sample is re-Hermitized (Theta <- (Theta + Theta†)/2) and
    checked against the uncertainty relation; the final sample lands exactly
    on ``t_end``.  Moments are co-sampled with the exact propagator so the
    trajectory carries both.

    Parameters
    ----------
    dt:
        Step size; defaults to one two-hundredth of the mode-1 period.
    x0:
        Initial moments; defaults to both modes displaced by +1.
    strict_physicality:
        If True, raise :class:`PhysicalityLostError` as soon as a sample
        violates the uncertainty relation beyond 1e-8 (an integrator-misuse
        signal on well-posed runs).  If False, samples are flagged instead;
        sweep drivers use this to emit flagged rows rather than abort.

    Raises
    ------
    StepTooLargeError
        If dt * max|Re eig W| > 0.1.
    """
    if dt is None:
        dt = (2.0 * math.pi / p.omega1) / 200.0
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if t_end < 0.0:
        raise ValueError("t_end must be >= 0")
    dyn = build_dynamical_matrix(p)
    W = dyn.W
    D = build_diffusion_matrix(p).D
    max_rate = float(np.abs(np.linalg.eigvals(W).real).max())
    if dt * max_rate > 0.1:
        raise StepTooLargeError(
            f"dt * max|Re eig W| = {dt * max_rate:.3g} > 0.1; reduce dt")

    if x0 is None:
        x0 = MomentState.displaced(1.0, 1.0)
    lam, V = np.linalg.eig(dyn.M)
    used_fallback = np.linalg.cond(V) > EIG_COND_FALLBACK

    n_full = int(math.floor(t_end / dt + 1e-12))
    times = [0.0]
    thetas = [theta0.theta.copy()]
    theta = theta0.theta.copy()
    t = 0.0
    for _ in range(n_full):
        theta = _rk4_step(W, D, theta, dt)
        theta = 0.5 * (theta + theta.conj().T)
        t += dt
        times.append(t)
        thetas.append(theta)
    if t_end - t > 1e-12 * max(1.0, t_end):
        theta = _rk4_step(W, D, theta, t_end - t)
        theta = 0.5 * (theta + theta.conj().T)
        times.append(t_end)
        thetas.append(theta)

    times = np.array(times)
    thetas = np.array(thetas)

    # co-sampled exact moments
    a0 = np.array([x0.x[0], x0.x[2]])
    moments = np.empty((len(times), 4), dtype=complex)
    for i, ti in enumerate(times):
        a = _reduced_propagator(dyn.M, ti) @ a0
        moments[i] = [a[0], np.conj(a[0]), a[1], np.conj(a[1])]

    physical = np.empty(len(times), dtype=bool)
    for i, th in enumerate(thetas):
        sigma = gauss_info.ladder_to_quadrature_matrix(th)
        violation = gauss_info.uncertainty_violation(sigma)
        physical[i] = violation <= PHYSICALITY_TOL
        if strict_physicality and not physical[i]:
            raise PhysicalityLostError(
                f"sample at t = {times[i]:.6g} violates the uncertainty relation "
                f"by {violation:.3g} (> {PHYSICALITY_TOL:g})")

    return Trajectory(params=p, times=times, moments=moments, covariances=thetas,
                      dt=dt, used_expm_fallback=bool(used_fallback), physical=physical)


@dataclass(frozen=True)
class SyncDiagnostics:
    """Relative phase / amplitude series and envelope decay fit for a trajectory."""

    relative_phase: NDArray[np.float64]
    amplitude_ratio: NDArray[np.float64]
    decay_rate_fit: float


def sync_diagnostics(traj: Trajectory) -> SyncDiagnostics:
    """Phase-locking diagnostics from the moment samples.

    The relative phase arg<a1> - arg<a2> is unwrapped with nearest-branch
    continuation seeded at t = 0; the envelope decay rate is the least-squares
    slope of log|<a1>| over the last half of the trajectory.

    Raises
    ------
    AmplitudeUnderflowError
        If either amplitude drops below 1e-12 (phase undefined).
    """
    a1 = traj.moments[:, 0]
    a2 = traj.moments[:, 2]
    amp1 = np.abs(a1)
    amp2 = np.abs(a2)
    if amp1.min() < AMPLITUDE_FLOOR or amp2.min() < AMPLITUDE_FLOOR:
        raise AmplitudeUnderflowError(
            f"moment amplitude below {AMPLITUDE_FLOOR:g}; phase undefined")
    rel = np.unwrap(np.angle(a1) - np.angle(a2))
    ratio = amp2 / amp1
    half = len(traj.times) // 2
    ts = traj.times[half:]
    A = np.column_stack([ts, np.ones_like(ts)])
    slope, _ = np.linalg.lstsq(A, np.log(amp1[half:]), rcond=None)[0]
    return SyncDiagnostics(relative_phase=rel, amplitude_ratio=ratio,
                           decay_rate_fit=float(slope))
