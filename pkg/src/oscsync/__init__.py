"""Two coupled quantum oscillators dissipating into a correlated common environment.

Gaussian-picture simulation toolkit: dynamical/diffusion matrix construction,
moment and covariance propagation, non-Hermitian spectral analysis of the
synchronization transition, stationary Lyapunov solutions, and Gaussian
information measures (Renyi-2 entropy, mutual information, discord).
"""

__version__ = "0.1.0"

from .dynamics import (
    CovarianceState,
    MomentState,
    Regime,
    SpectralResult,
    SyncDiagnostics,
    Trajectory,
    eigenspectrum,
    propagate_covariance,
    propagate_moments,
    sync_diagnostics,
)
from .gauss_info import (
    InfoReport,
    QuadratureCovariance,
    classical_correlations,
    discord_lower_bound,
    gaussian_discord,
    info_report,
    ladder_to_quadrature,
    mutual_information,
    physicality_check,
    quadrature_to_ladder,
    renyi2_entropy,
    symplectic_eigenvalues,
    symplectic_form,
)
from .model import (
    DiffusionMatrix,
    DynamicalMatrix,
    LindbladCoefficients,
    SystemParams,
    assemble_generators,
    build_diffusion_matrix,
    build_dynamical_matrix,
    build_lindblad_ops,
    critical_xi,
    gamma12,
    validate_params,
)
from .steady import (
    FluxReport,
    SingularXi,
    SteadyMethod,
    SteadyState,
    closed_form_steady,
    flux,
    singular_xi,
    solve_lyapunov,
)

__all__ = [
    "__version__",
    "SystemParams", "validate_params", "gamma12", "critical_xi",
    "DynamicalMatrix", "build_dynamical_matrix",
    "DiffusionMatrix", "build_diffusion_matrix",
    "LindbladCoefficients", "build_lindblad_ops", "assemble_generators",
    "MomentState", "CovarianceState", "Trajectory", "SpectralResult", "Regime",
    "SyncDiagnostics", "eigenspectrum", "propagate_moments",
    "propagate_covariance", "sync_diagnostics",
    "SteadyState", "SteadyMethod", "solve_lyapunov", "closed_form_steady",
    "SingularXi", "singular_xi", "FluxReport", "flux",
    "QuadratureCovariance", "InfoReport", "ladder_to_quadrature",
    "quadrature_to_ladder", "symplectic_form", "symplectic_eigenvalues",
    "physicality_check", "renyi2_entropy", "mutual_information",
    "classical_correlations", "gaussian_discord", "discord_lower_bound",
    "info_report",
]
