"""Exception hierarchy shared by all modules."""


class OUKernelsError(Exception):
    """Base class for all library errors."""


class DomainError(OUKernelsError, ValueError):
    """Argument outside the mathematical domain of the function."""


class PoleError(OUKernelsError, ValueError):
    """Evaluation requested at (or within tolerance of) a pole."""


class BranchCutError(OUKernelsError, ValueError):
    """Evaluation requested on a branch cut of a multivalued function."""


class DivergenceError(OUKernelsError, ValueError):
    """Series or integral diverges for the requested parameters."""


class NotSupportedError(OUKernelsError, NotImplementedError):
    """Parameter combination deliberately outside the supported set."""


class QuadratureError(OUKernelsError, RuntimeError):
    """Adaptive quadrature could not reach the requested tolerance."""


class ContourError(OUKernelsError, RuntimeError):
    """Bromwich-line evaluation failed a residual or truncation check."""


class BudgetExceededError(OUKernelsError, RuntimeError):
    """A simulated path exceeded its step budget."""


class InsufficientSamplesError(OUKernelsError, ValueError):
    """Too few Monte Carlo samples for the requested estimator."""
