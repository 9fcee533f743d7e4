"""Exception hierarchy shared across the package."""


class SatcapError(Exception):
    """Base class for all satcap-specific errors."""


class ConfigError(SatcapError):
    """Invalid run configuration (CLI exit code 2)."""


class NumericalError(SatcapError):
    """A numerical routine produced an unusable result (CLI exit code 3)."""


class EigensolverError(NumericalError):
    """Eigendecomposition failed; carries the offending sample index."""

    def __init__(self, message, sample_index=None):
        super().__init__(message)
        self.sample_index = sample_index


class QuadratureError(NumericalError):
    """Requested quadrature tolerance not reached at maximum refinement."""


class ConvergenceError(NumericalError):
    """Series evaluated outside its convergence region in strict mode."""
