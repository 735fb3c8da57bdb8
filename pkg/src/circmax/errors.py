"""Exception types shared across the package."""


class CircmaxError(Exception):
    """Base class for all library errors."""


class DimensionError(CircmaxError, ValueError):
    """Incompatible sizes, e.g. a band too wide for the requested circle."""


class NotPositiveDefiniteError(CircmaxError):
    """A matrix required to be symmetric positive definite is not."""


class ReconstructionError(CircmaxError):
    """Inverse transform of a spectrum that violates conjugate symmetry."""


class InfeasibleBandError(CircmaxError):
    """The block-Toeplitz matrix of the given lags is not positive definite."""


class HorizonExhaustedError(CircmaxError):
    """No circle size up to the search horizon yields a positive wrap.

    Carries ``min_eig_trace``, a dict mapping each scanned N to the smallest
    frequency-block eigenvalue of its wrap.
    """

    def __init__(self, message, min_eig_trace=None):
        super().__init__(message)
        self.min_eig_trace = dict(min_eig_trace or {})


class DegenerateProcessError(CircmaxError):
    """Singular normal equations: the process is not full rank."""


class DegenerateDataError(CircmaxError):
    """Sample statistics too poor to identify a model (T_n not PD)."""


class NotReciprocalError(CircmaxError):
    """Covariance whose inverse carries mass outside the requested band.

    Carries ``residual``, the off-band fraction found.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class InvalidModelError(CircmaxError):
    """Model coefficients whose assembled matrix is not positive definite."""


class ConvergenceError(CircmaxError):
    """Solver hit its iteration limit. Carries the diagnostics record."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class InfeasibleExtensionError(CircmaxError):
    """No positive completion exists at the requested circle size.

    Carries ``certificate`` (a feasibility search record) when available.
    """

    def __init__(self, message, certificate=None, diagnostics=None):
        super().__init__(message)
        self.certificate = certificate
        self.diagnostics = diagnostics
