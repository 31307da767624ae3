"""Shared fixtures and independent oracles for the test suite."""

import math

import numpy as np
import pytest

from oscsync.model import SystemParams, build_lindblad_ops


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def random_params(rng, nbar_floor=0.0, xi_max=1.0, gamma_range=(0.0, 1.0)):
    return SystemParams(
        omega1=rng.uniform(0.5, 2.0),
        omega2=rng.uniform(0.5, 2.0),
        g=rng.uniform(0.0, 0.5),
        gamma=rng.uniform(*gamma_range),
        xi=rng.uniform(-xi_max, xi_max),
        nbar1=rng.uniform(nbar_floor, 3.0),
        nbar2=rng.uniform(nbar_floor, 3.0),
    )


def random_physical_sigma(rng, squeeze_max=0.8, nu_max=2.5):
    """Random physical two-mode quadrature covariance (thermal core, symplectic dressing)."""
    def rot(t):
        return np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])

    def local():
        r = rng.uniform(0.0, squeeze_max)
        return rot(rng.uniform(0, 2 * math.pi)) @ np.diag([math.exp(r), math.exp(-r)]) \
            @ rot(rng.uniform(0, 2 * math.pi))

    nu1, nu2 = rng.uniform(0.5, nu_max, 2)
    t = rng.uniform(0, 2 * math.pi)
    c, s = math.cos(t), math.sin(t)
    mixer = np.block([[c * np.eye(2), s * np.eye(2)], [-s * np.eye(2), c * np.eye(2)]])
    S = np.block([[local(), np.zeros((2, 2))], [np.zeros((2, 2)), local()]]) @ mixer
    return S @ np.diag([nu1, nu1, nu2, nu2]) @ S.T


# ------------------------------------------------------------------
# Fock-space oracle: extract the moment drift W and diffusion D from the
# channel operators by literal operator algebra on a truncated number basis.
# Completely independent of the closed-form builders and of the outer-product
# assembly in the package.
# ------------------------------------------------------------------

def _fock_ops(ncut=6):
    a = np.diag(np.sqrt(np.arange(1, ncut)), 1)
    eye = np.eye(ncut)
    a1 = np.kron(a, eye)
    a2 = np.kron(eye, a)
    return a1, a2, ncut


def fock_generators(p: SystemParams, ncut=6):
    """(W, D) extracted from matrix elements of the adjoint generator."""
    a1, a2, n = _fock_ops(ncut)
    ops = [a1, a1.conj().T, a2, a2.conj().T]
    H = (p.omega1 * a1.conj().T @ a1 + p.omega2 * a2.conj().T @ a2
         + p.g * (a1.conj().T @ a2 + a2.conj().T @ a1))
    c = build_lindblad_ops(p)
    low, rai = c.channel_vectors()
    channels = [v[0] * a1 + v[1] * a2 for v in low]
    channels += [w[0] * a1.conj().T + w[1] * a2.conj().T for w in rai]

    def adjoint(op):
        out = 1j * (H @ op - op @ H)
        for L in channels:
            Ld = L.conj().T
            out += Ld @ op @ L - 0.5 * (Ld @ L @ op + op @ Ld @ L)
        return out

    # isolate the coefficient of each basis operator through matrix elements
    # <vac| . |1_i> and <1_i| . |vac>
    dim = n * n
    vac = np.zeros(dim)
    vac[0] = 1.0
    one1 = np.zeros(dim)
    one1[n] = 1.0   # |1, 0>
    one2 = np.zeros(dim)
    one2[1] = 1.0   # |0, 1>

    def coeffs(op):
        rhs = adjoint(op)
        return np.array([
            vac @ rhs @ one1,      # coefficient of a1
            one1 @ rhs @ vac,      # coefficient of a1†
            vac @ rhs @ one2,      # coefficient of a2
            one2 @ rhs @ vac,      # coefficient of a2†
        ])

    W = np.array([coeffs(op) for op in ops])

    # diffusion from the vacuum drift of the symmetrized quadratics:
    # d theta_ij/dt|vac = (W . I/2 + I/2 . W† + D)_ij with theta_vac = I/2
    D = np.zeros((4, 4), dtype=complex)
    for i in range(4):
        for j in range(4):
            quad = 0.5 * (ops[i] @ ops[j].conj().T + ops[j].conj().T @ ops[i])
            D[i, j] = vac @ adjoint(quad) @ vac
    D -= W @ (0.5 * np.eye(4)) + (0.5 * np.eye(4)) @ W.conj().T
    return W, D
