"""Exception types shared across the package."""


class ParameterDomainError(ValueError):
    """A physical or discretization parameter is outside its admissible range."""


class AdmissibilityError(RuntimeError):
    """Requested parameters fail the existence hypotheses and no override was given."""


class ConvergenceError(RuntimeError):
    """An iterative solve did not reach its tolerance; carries the trace if available."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace if trace is not None else []


class GridResolutionError(ValueError):
    """The mesh cannot resolve the requested concentration scale."""
