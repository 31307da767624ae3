"""Gaussian-state information measures on two-mode covariance matrices.

Ladder-basis covariances (ordering a1, a1†, a2, a2†) are mapped unitarily to
the real quadrature basis (x1, p1, x2, p2) with a = (x + i p)/sqrt(2), so the
vacuum is (1/2) I in both pictures.  All entropic quantities are Renyi-2 in
nats, normalized so the vacuum has zero entropy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize

from .errors import (
    NotHermitianError,
    NotPositiveDefiniteError,
    OptimizationDidNotConvergeError,
)

#: unitary change of basis (x1, p1, x2, p2) = T (a1, a1†, a2, a2†)
_T = np.array(
    [
        [1, 1, 0, 0],
        [-1j, 1j, 0, 0],
        [0, 0, 1, 1],
        [0, 0, -1j, 1j],
    ],
    dtype=complex,
) / math.sqrt(2.0)

HERMITICITY_TOL = 1e-10
PHYSICALITY_TOL = 1e-10
DIVERGENCE_NATS = 50.0


def symplectic_form(n_modes: int = 2) -> NDArray[np.float64]:
    """Block-diagonal symplectic form for the (x, p) ordering, [x_i, p_i] = i."""
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = np.zeros((2 * n_modes, 2 * n_modes))
    for m in range(n_modes):
        out[2 * m : 2 * m + 2, 2 * m : 2 * m + 2] = j
    return out


_OMEGA = symplectic_form(2)


@dataclass(frozen=True)
class QuadratureCovariance:
    """Real symmetric covariance in the (x1, p1, x2, p2) basis; vacuum = I/2."""

    sigma: NDArray[np.float64]

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=float)
        if s.shape != (4, 4):
            raise ValueError(f"quadrature covariance must be 4x4, got {s.shape}")
        if np.abs(s - s.T).max() > 1e-12:
            raise ValueError("quadrature covariance not symmetric to 1e-12")
        object.__setattr__(self, "sigma", s)


def _as_sigma(sigma) -> NDArray[np.float64]:
    if isinstance(sigma, QuadratureCovariance):
        return sigma.sigma
    return np.asarray(sigma, dtype=float)


def ladder_to_quadrature_matrix(theta: NDArray[np.complex128]) -> NDArray[np.float64]:
    """Map a ladder-basis covariance matrix to the real quadrature basis.

    Besides Hermiticity, a valid mode covariance must carry the redundancy of
    the ladder ordering (the creation-sector block is the conjugate of the
    annihilation-sector block); violations surface as an imaginary residue
    after the basis change and are rejected.
    """
    theta = np.asarray(theta, dtype=complex)
    if np.abs(theta - theta.conj().T).max() > HERMITICITY_TOL:
        raise NotHermitianError("ladder covariance not Hermitian to 1e-10")
    sigma = _T @ theta @ _T.conj().T
    if np.abs(sigma.imag).max() > HERMITICITY_TOL:
        raise ValueError(
            "ladder covariance lacks the conjugation-sector structure "
            "(quadrature image is not real)")
    return sigma.real


def ladder_to_quadrature(theta) -> QuadratureCovariance:
    """Basis change for a :class:`~oscsync.dynamics.CovarianceState` or raw matrix.

    Round trip with :func:`quadrature_to_ladder` reproduces the input to 1e-13.
    """
    mat = theta.theta if hasattr(theta, "theta") else theta
    return QuadratureCovariance(ladder_to_quadrature_matrix(mat))


def quadrature_to_ladder(sigma) -> NDArray[np.complex128]:
    """Inverse basis change back to the (a1, a1†, a2, a2†) ordering."""
    s = _as_sigma(sigma).astype(complex)
    return _T.conj().T @ s @ _T


def physicality_check(sigma) -> float:
    """Smallest eigenvalue of sigma + (i/2) Omega; >= -1e-10 means physical.

    Diagnostic only: never raises, returns the signed margin so callers can
    report the violation magnitude.
    """
    s = _as_sigma(sigma)
    h = s.astype(complex) + 0.5j * _OMEGA
    return float(np.linalg.eigvalsh(h).min())


def is_physical(sigma) -> bool:
    return physicality_check(sigma) >= -PHYSICALITY_TOL


def uncertainty_violation(sigma) -> float:
    """Nonnegative magnitude of the uncertainty-relation violation (0 if physical)."""
    return max(0.0, -physicality_check(sigma))


def symplectic_eigenvalues(sigma) -> tuple[float, float]:
    """Williamson invariants (nu1, nu2), sorted descending; nu >= 1/2 iff physical.

    Raises
    ------
    NotPositiveDefiniteError
        If sigma is not positive definite.
    """
    s = _as_sigma(sigma)
    if np.linalg.eigvalsh(s).min() <= 0.0:
        raise NotPositiveDefiniteError("covariance is not positive definite")
    ev = np.linalg.eigvals(1j * _OMEGA @ s)
    nus = np.sort(np.abs(ev.real))
    return float(nus[2]), float(nus[0])


def _block_det(sigma, rows) -> float:
    return float(np.linalg.det(sigma[np.ix_(rows, rows)]))


def renyi2_entropy(sigma, modes: tuple[int, ...] | None = None) -> float:
    """Renyi-2 entropy (nats) of the full state or of one mode's marginal.

    S2 = (1/2) ln det sigma' + N' ln 2 over the selected block; with the
    vacuum-1/2 convention the constant cancels so S2(vacuum) = 0.

    Parameters
    ----------
    modes:
        None for the joint state, or a subset like (0,) / (1,) selecting a
        single mode's 2x2 diagonal block.
    """
    s = _as_sigma(sigma)
    if modes is None:
        modes = (0, 1)
    rows = [i for m in modes for i in (2 * m, 2 * m + 1)]
    block = s[np.ix_(rows, rows)]
    if np.linalg.eigvalsh(block).min() <= 0.0:
        raise NotPositiveDefiniteError("selected covariance block is not positive definite")
    det = np.linalg.det(block)
    return 0.5 * math.log(det) + len(modes) * math.log(2.0)


def mutual_information(sigma) -> float:
    """Renyi-2 mutual information I2 = (1/2) ln(det A det B / det AB) >= 0."""
    s = _as_sigma(sigma)
    det_a = _block_det(s, [0, 1])
    det_b = _block_det(s, [2, 3])
    det_ab = float(np.linalg.det(s))
    if det_a <= 0.0 or det_b <= 0.0 or det_ab <= 0.0:
        raise NotPositiveDefiniteError("covariance blocks must have positive determinants")
    return 0.5 * math.log(det_a * det_b / det_ab)


def measurement_seed(s: float, phi: float) -> NDArray[np.float64]:
    """Pure single-mode Gaussian seed (1/2) R(phi) diag(s, 1/s) R(phi)^T."""
    c, sn = math.cos(phi), math.sin(phi)
    R = np.array([[c, -sn], [sn, c]])
    return 0.5 * R @ np.diag([s, 1.0 / s]) @ R.T


def _j2_objective(sigma: NDArray[np.float64], s: float, phi: float) -> float:
    A = sigma[:2, :2]
    B = sigma[2:, 2:]
    G = sigma[:2, 2:]
    cond = A - G @ np.linalg.solve(B + measurement_seed(s, phi), G.T)
    det_cond = np.linalg.det(cond)
    if det_cond <= 0.0:
        return -math.inf
    return 0.5 * math.log(np.linalg.det(A) / det_cond)


def classical_correlations(sigma) -> tuple[float, tuple[float, float]]:
    """Maximal classical correlations J2(A|B) over pure Gaussian seeds on mode B.

    Maximizes (1/2) ln(det sigma_A / det sigma_A^cond) with
    sigma_A^cond = sigma_A - Gamma (sigma_B + seed)^{-1} Gamma^T over seeds
    parameterized by squeezing s in (0, inf) and angle phi in [0, pi):
    coarse 32x16 grid, then simplex refinement.

    Returns
    -------
    (j2, (s, phi)):
        The supremum and the maximizing seed parameters.

    Raises
    ------
    OptimizationDidNotConvergeError
        If the simplex refinement does not converge.
    """
    sig = _as_sigma(sigma)
    best = 0.0
    arg = (1.0, 0.0)
    for s in np.logspace(-3, 3, 32):
        for phi in np.linspace(0.0, math.pi, 16, endpoint=False):
            v = _j2_objective(sig, s, phi)
            if v > best:
                best, arg = v, (float(s), float(phi))

    res = minimize(
        lambda z: -_j2_objective(sig, math.exp(z[0]), z[1]),
        x0=[math.log(arg[0]), arg[1]],
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000, "maxfev": 8000},
    )
    if not res.success:
        raise OptimizationDidNotConvergeError(res.message)
    if -res.fun > best:
        best = float(-res.fun)
        arg = (math.exp(res.x[0]), float(res.x[1] % math.pi))
    return best, arg


def gaussian_discord(sigma) -> float:
    """Quantum discord D2 = I2 - J2, clipped to zero within tolerance below."""
    i2 = mutual_information(sigma)
    j2, _ = classical_correlations(sigma)
    d2 = i2 - j2
    return 0.0 if -1e-9 <= d2 < 0.0 else d2


def _lower_bound_from_sigma(sigma: NDArray[np.float64]) -> float:
    # decohere: zero the inter-mode block, S2 of the decohered state is the
    # sum of the retained block entropies; subtract the classical ceiling of
    # the retained A block (a conditioned single-mode covariance keeps
    # det >= 1/4, so no Gaussian measurement on B extracts more than S2_A)
    sigma_dec = sigma.copy()
    sigma_dec[:2, 2:] = 0.0
    sigma_dec[2:, :2] = 0.0
    gained = renyi2_entropy(sigma_dec) - renyi2_entropy(sigma)
    bound = gained - renyi2_entropy(sigma, modes=(0,))
    return max(0.0, bound)


def discord_lower_bound(theta) -> float:
    """Coherence-removal lower bound on the discord D2(A|B).

    Zeroes the inter-mode covariance block, takes the entropy gained by that
    decoherence (= the mutual information between the retained diagonal
    blocks and the original state) and subtracts the classical ceiling S2(A);
    the result never exceeds D2 and is tight on pure states.

    Accepts a ladder-basis :class:`~oscsync.dynamics.CovarianceState` /
    matrix or a :class:`QuadratureCovariance`.
    """
    if isinstance(theta, QuadratureCovariance):
        sigma = theta.sigma
    else:
        mat = theta.theta if hasattr(theta, "theta") else np.asarray(theta)
        if np.iscomplexobj(mat) and np.abs(np.asarray(mat).imag).max() > 0:
            sigma = ladder_to_quadrature_matrix(mat)
        else:
            # real Hermitian ladder matrices are valid input too
            sigma = ladder_to_quadrature_matrix(np.asarray(mat, dtype=complex))
    return _lower_bound_from_sigma(sigma)


@dataclass(frozen=True)
class InfoReport:
    """Bundle of the information measures for one state (entropies in nats)."""

    S2_A: float
    S2_B: float
    S2_AB: float
    I2: float
    J2: float
    D2: float
    D2_lower: float
    nu: tuple[float, float]


def _cap(value: float, threshold: float) -> float:
    return math.inf if value > threshold else value


def info_report(sigma, divergence_nats: float = DIVERGENCE_NATS) -> InfoReport:
    """Compute all measures; values above ``divergence_nats`` report as +inf."""
    s = _as_sigma(sigma)
    s2a = renyi2_entropy(s, modes=(0,))
    s2b = renyi2_entropy(s, modes=(1,))
    s2ab = renyi2_entropy(s)
    i2 = mutual_information(s)
    j2, _ = classical_correlations(s)
    d2 = 0.0 if -1e-9 <= i2 - j2 < 0.0 else i2 - j2
    lower = _lower_bound_from_sigma(s)
    nu = symplectic_eigenvalues(s)
    return InfoReport(
        S2_A=s2a,
        S2_B=s2b,
        S2_AB=s2ab,
        I2=_cap(i2, divergence_nats),
        J2=_cap(j2, divergence_nats),
        D2=_cap(d2, divergence_nats),
        D2_lower=_cap(lower, divergence_nats),
        nu=nu,
    )
