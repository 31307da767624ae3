"""Physical parameters and generator matrices for two oscillators in a correlated bath.

The model is a pair of bosonic modes with exchange coupling, each damped by a
thermal channel pair; bath noise is shared between the modes with correlation
strength ``xi``.  Everything downstream (moment propagation, covariance
dynamics, stationary solves) is driven by the 4x4 dynamical matrix ``W``, the
reduced 2x2 moment matrix ``M`` and the 4x4 diffusion matrix ``D`` built here.

Operator ordering is (a1, a1†, a2, a2†) throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize_scalar

from .errors import NonFiniteError, OutOfRangeError, ZeroDampingError

#: index sets of the annihilation / creation sectors in the ladder ordering
A_SECTOR = (0, 2)
ADAG_SECTOR = (1, 3)

DELTA_SINGULAR_TOL = 1e-9


@dataclass(frozen=True)
class SystemParams:
    """Physical inputs.  ``omega1 = 1`` fixes the time unit.

    Attributes
    ----------
    omega1, omega2:
        Angular frequencies of the two modes (dimensionless units).
    g:
        Exchange coupling between the modes.
    gamma:
        Bath relaxation rate, >= 0.
    xi:
        Noise correlation in [-1, 1]: +1 fully correlated baths, -1 fully
        anti-correlated, 0 independent.
    nbar1, nbar2:
        Mean thermal occupations of the two baths, >= 0.
    """

    omega1: float = 1.0
    omega2: float = 1.0
    g: float = 0.0
    gamma: float = 0.0
    xi: float = 0.0
    nbar1: float = 0.0
    nbar2: float = 0.0
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @property
    def delta(self) -> float:
        """Detuning omega1 - omega2 (derived, never stored)."""
        return self.omega1 - self.omega2


def gamma12(p: SystemParams) -> float:
    """Temperature-dependent cross-relaxation rate.

    gamma12 = gamma * (sqrt((nbar1+1)(nbar2+1)) - sqrt(nbar1*nbar2)); equals
    gamma at zero temperature and is strictly positive for gamma > 0.
    """
    return p.gamma * (
        math.sqrt((p.nbar1 + 1.0) * (p.nbar2 + 1.0)) - math.sqrt(p.nbar1 * p.nbar2)
    )


def gamma12_plus(p: SystemParams) -> float:
    """Companion rate gamma * (sqrt((nbar1+1)(nbar2+1)) + sqrt(nbar1*nbar2)).

    This is the cross amplitude produced by assembling the dissipator from the
    correlated channels (see :func:`assemble_generators`); it differs from the
    cross entry of :func:`build_diffusion_matrix` except at xi = 0.
    """
    return p.gamma * (
        math.sqrt((p.nbar1 + 1.0) * (p.nbar2 + 1.0)) + math.sqrt(p.nbar1 * p.nbar2)
    )


def validate_params(p: SystemParams) -> SystemParams:
    """Validate raw parameters, returning them with informational warnings attached.

    Raises
    ------
    NonFiniteError
        If any field is NaN or infinite.
    OutOfRangeError
        If xi is outside [-1, 1], or gamma or an occupation is negative.
    """
    values = {
        "omega1": p.omega1, "omega2": p.omega2, "g": p.g,
        "gamma": p.gamma, "xi": p.xi, "nbar1": p.nbar1, "nbar2": p.nbar2,
    }
    for name, v in values.items():
        if not math.isfinite(v):
            raise NonFiniteError(f"{name} = {v!r} is not finite")
    if not -1.0 <= p.xi <= 1.0:
        raise OutOfRangeError(f"xi = {p.xi} outside [-1, 1]")
    if p.gamma < 0.0:
        raise OutOfRangeError(f"gamma = {p.gamma} must be >= 0")
    if p.nbar1 < 0.0 or p.nbar2 < 0.0:
        raise OutOfRangeError(f"occupations must be >= 0, got {p.nbar1}, {p.nbar2}")

    warnings = []
    g12 = gamma12(p)
    if abs(abs(p.xi * g12) - p.gamma) <= DELTA_SINGULAR_TOL:
        warnings.append("delta-singular: |xi * gamma12| == gamma within tolerance")
    # informational: the eigenfrequencies lock when |xi| gamma12 >= |detuning|
    if abs(p.xi) * g12 >= abs(p.delta) and p.gamma > 0.0:
        warnings.append("synchronized-regime: |xi| * gamma12 >= |detuning|")
    return replace(p, warnings=tuple(warnings))


@dataclass(frozen=True)
class DynamicalMatrix:
    """Moment-equation generators.

    ``W`` drives d<x>/dt = W <x> in the ordering (a1, a1†, a2, a2†); ``M`` is
    the reduced matrix for (<a1>, <a2>), related by W[a-sector] = -i M.
    """

    W: NDArray[np.complex128]
    M: NDArray[np.complex128]


def build_dynamical_matrix(p: SystemParams) -> DynamicalMatrix:
    """Build the 4x4 dynamical matrix and its reduced 2x2 moment block.

    M has diagonal omega_i - i gamma/2 and off-diagonal g - i xi gamma12 / 2;
    the creation sector of W is the elementwise conjugate of the annihilation
    sector.
    """
    g12 = gamma12(p)
    off = p.g - 0.5j * p.xi * g12
    M = np.array(
        [[p.omega1 - 0.5j * p.gamma, off],
         [off, p.omega2 - 0.5j * p.gamma]],
        dtype=complex,
    )
    W = np.zeros((4, 4), dtype=complex)
    block = -1j * M
    W[np.ix_(A_SECTOR, A_SECTOR)] = block
    W[np.ix_(ADAG_SECTOR, ADAG_SECTOR)] = block.conj()
    return DynamicalMatrix(W=W, M=M)


@dataclass(frozen=True)
class DiffusionMatrix:
    """Symmetric diffusion matrix D entering dTheta/dt = W Theta + Theta W† + D."""

    D: NDArray[np.float64]


def build_diffusion_matrix(p: SystemParams) -> DiffusionMatrix:
    """Build the 4x4 diffusion matrix.

    Diagonal entries are gamma/2 + gamma*nbar_i and the inter-mode entries are
    xi * gamma * sqrt(nbar1*nbar2).  The sign convention is positive: at
    g = 0, xi = 0 the stationary point of dTheta/dt = W Theta + Theta W† + D
    is the thermal state with Theta_11 = nbar1 + 1/2.

    Note: the cross entry is *not* what the correlated-channel dissipator
    produces (that is xi * gamma12_plus / 2); the difference is exactly
    xi * gamma12 / 2 and is characterized by the validation suite.  This form
    is the shipped contract; its consequences (e.g. sub-vacuum stationary
    covariances at low occupations and |xi| near 1) are documented in the
    README.
    """
    d1 = p.gamma / 2.0 + p.gamma * p.nbar1
    d2 = p.gamma / 2.0 + p.gamma * p.nbar2
    cx = p.xi * p.gamma * math.sqrt(p.nbar1 * p.nbar2)
    D = np.zeros((4, 4))
    D[0, 0] = D[1, 1] = d1
    D[2, 2] = D[3, 3] = d2
    D[0, 2] = D[2, 0] = D[1, 3] = D[3, 1] = cx
    return DiffusionMatrix(D=D)


@dataclass(frozen=True)
class LindbladCoefficients:
    """Amplitudes of the four correlated thermal channels.

    Per-mode thermal amplitudes combine into symmetric (+) and antisymmetric
    (-) channels with weights sqrt((1 +- xi)/2):

        C(+,down) = w+ * (lower1 * a1 + lower2 * a2)
        C(-,down) = w- * (lower1 * a1 - lower2 * a2)

    and likewise for the raising amplitudes on a†.
    """

    lowering: tuple[float, float]   # sqrt(gamma (nbar_i + 1))
    raising: tuple[float, float]    # sqrt(gamma nbar_i)
    weight_plus: float              # sqrt((1 + xi) / 2)
    weight_minus: float             # sqrt((1 - xi) / 2)

    def channel_vectors(self) -> tuple[list[NDArray[np.float64]], list[NDArray[np.float64]]]:
        """Return (lowering, raising) channel coefficient vectors over (mode1, mode2)."""
        u = np.array(self.lowering)
        z = np.array(self.raising)
        sign = np.array([1.0, -1.0])
        lower = [self.weight_plus * u, self.weight_minus * u * sign]
        raise_ = [self.weight_plus * z, self.weight_minus * z * sign]
        return lower, raise_


def build_lindblad_ops(p: SystemParams) -> LindbladCoefficients:
    """Coefficients of the correlated/anticorrelated thermal channels.

    At xi = 0 both weights equal 1/sqrt(2) and the reassembled dissipator has
    no cross-mode terms; at xi = 1 the antisymmetric weight vanishes.
    """
    return LindbladCoefficients(
        lowering=(math.sqrt(p.gamma * (p.nbar1 + 1.0)), math.sqrt(p.gamma * (p.nbar2 + 1.0))),
        raising=(math.sqrt(p.gamma * p.nbar1), math.sqrt(p.gamma * p.nbar2)),
        weight_plus=math.sqrt((1.0 + p.xi) / 2.0),
        weight_minus=math.sqrt((1.0 - p.xi) / 2.0),
    )


def assemble_generators(
    p: SystemParams, coeffs: LindbladCoefficients | None = None
) -> tuple[NDArray[np.complex128], NDArray[np.float64]]:
    """Assemble (W, D) from the channel coefficients via the adjoint dissipator.

    For channels linear in the mode operators the adjoint dissipator gives, in
    the (mode1, mode2) block,

        W_mode = -i h - (G_down - G_up) / 2,      h = [[w1, g], [g, w2]]
        D_mode = (G_down + G_up) / 2

    with G_down = sum_c v_c v_c† over lowering-channel coefficient vectors and
    G_up likewise for raising channels.  Used as the round-trip cross-check
    against :func:`build_dynamical_matrix` / :func:`build_diffusion_matrix`.
    """
    if coeffs is None:
        coeffs = build_lindblad_ops(p)
    lower, raise_ = coeffs.channel_vectors()
    G_down = sum(np.outer(v, v) for v in lower)
    G_up = sum(np.outer(w, w) for w in raise_)
    h = np.array([[p.omega1, p.g], [p.g, p.omega2]], dtype=complex)
    W_mode = -1j * h - 0.5 * (G_down - G_up)
    D_mode = 0.5 * (G_down + G_up)

    W = np.zeros((4, 4), dtype=complex)
    W[np.ix_(A_SECTOR, A_SECTOR)] = W_mode
    W[np.ix_(ADAG_SECTOR, ADAG_SECTOR)] = W_mode.conj()
    D = np.zeros((4, 4))
    D[np.ix_(A_SECTOR, A_SECTOR)] = D_mode
    D[np.ix_(ADAG_SECTOR, ADAG_SECTOR)] = D_mode
    return W, D


def critical_xi(p: SystemParams) -> float | None:
    """Correlation strength at which the two eigenfrequencies coalesce.

    For g = 0 this is the exceptional point |delta| / gamma12 exactly.  For
    g != 0 the level crossing unfolds into an avoided crossing and the
    returned value is the xi in [0, 1] minimizing |lambda+ - lambda-|
    (bounded scalar minimization, tolerance 1e-10).

    Returns None when the threshold lies outside the physical range |xi| <= 1.

    Raises
    ------
    ZeroDampingError
        If gamma12 = 0 (no dissipative coupling, no synchronization).
    """
    g12 = gamma12(p)
    if g12 == 0.0:
        raise ZeroDampingError("gamma12 = 0: no dissipative synchronization mechanism")
    delta = abs(p.delta)
    if p.g == 0.0:
        xi_c = delta / g12
        return xi_c if xi_c <= 1.0 else None
    # gap^2 = |disc| with disc = (2g - i xi gamma12)^2 + delta^2; its minimum
    # over xi^2 sits at (delta^2 - 4 g^2) / gamma12^2
    u_star = (delta**2 - 4.0 * p.g**2) / g12**2
    if u_star > 1.0:
        return None
    if u_star <= 0.0:
        return 0.0

    def gap(xi: float) -> float:
        disc = (2.0 * p.g - 1j * xi * g12) ** 2 + p.delta**2
        return abs(np.sqrt(disc))

    res = minimize_scalar(gap, bounds=(0.0, 1.0), method="bounded",
                          options={"xatol": 1e-10})
    return float(res.x)
