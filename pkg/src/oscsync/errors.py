"""Exception types raised across the package."""


class OscSyncError(Exception):
    """Base class for all package errors."""


class OutOfRangeError(OscSyncError):
    """A physical parameter violates its allowed range."""


class NonFiniteError(OscSyncError):
    """An input or result contains NaN or infinity."""


class ZeroDampingError(OscSyncError):
    """Operation requires a nonzero cross-relaxation rate."""


class StepTooLargeError(OscSyncError):
    """Integrator step exceeds the stability guard."""


class PhysicalityLostError(OscSyncError):
    """A covariance sample violates the uncertainty relation beyond tolerance."""


class AmplitudeUnderflowError(OscSyncError):
    """Moment amplitude too small for a well-defined phase."""


class NoUniqueSteadyStateError(OscSyncError):
    """Dynamical matrix has an (almost) undamped mode; stationary state not unique."""


class SingularSolveError(OscSyncError):
    """Stationary linear system is numerically rank-deficient away from the undamped regime."""


class DetuningNotZeroError(OscSyncError):
    """Closed-form steady state requires equal oscillator frequencies."""


class DeltaSingularError(OscSyncError):
    """Closed-form steady state evaluated at the singular correlation strength."""


class NotHermitianError(OscSyncError):
    """Matrix expected to be Hermitian is not, beyond tolerance."""


class NotPositiveDefiniteError(OscSyncError):
    """Matrix expected to be positive definite is not."""


class OptimizationDidNotConvergeError(OscSyncError):
    """Measurement-seed optimization failed to converge."""


class ConfigError(OscSyncError):
    """Invalid run configuration."""
