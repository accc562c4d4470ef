"""Exception hierarchy."""


class ContourMinError(Exception):
    """Base class for all library errors."""


class ConfigurationError(ContourMinError, ValueError):
    pass


class DomainViolationError(ContourMinError, ValueError):
    """A point lies outside the objective's box."""


class UnknownBenchmarkError(ContourMinError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class BracketInvalidError(ContourMinError):
    """Segment endpoints do not straddle the level."""


class ConvergenceFailureError(ContourMinError):
    """Bisection ran out of iterations; ``best`` holds the closest point found."""

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class InsufficientRootsError(ContourMinError):
    """Fewer than two separated roots could be located on the contour."""

    def __init__(self, message, found: int = 0):
        super().__init__(message)
        self.found = found


class EmptySetError(ContourMinError, ValueError):
    pass


class DescentStalledError(ContourMinError):
    """No subset average fell below the current level after all retries."""

    def __init__(self, message, best_point=None, best_value=None):
        super().__init__(message)
        self.best_point = best_point
        self.best_value = best_value


class InsufficientTraceError(ContourMinError):
    pass


class GridBudgetError(ContourMinError):
    pass


class TraceFormatError(ContourMinError):
    pass
