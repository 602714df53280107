"""Exception hierarchy shared across the package."""


class HomentError(Exception):
    """Base class for all package errors."""


class EdgeListError(HomentError, ValueError):
    """Malformed edge-list input.

    Attributes
    ----------
    line : int or None
        1-based line number of the offending line, when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegreeSequenceError(HomentError):
    """A degree sequence could not be realized as a simple graph."""

    def __init__(self, message, degrees):
        self.degrees = list(degrees)
        super().__init__(f"{message} (degree sequence: {self.degrees})")


class TruncationError(HomentError):
    """A quantity needs a complex built to a higher dimension than available."""


class DomainError(HomentError, ValueError):
    """Parameter point outside the positive-definiteness domain."""


class DegenerateEstimateError(HomentError):
    """Monte Carlo estimate has no usable sample points."""


class NumericalError(HomentError):
    """A kept sample produced a non-finite integrand value."""

    def __init__(self, message, theta=None):
        self.theta = None if theta is None else [float(t) for t in theta]
        if self.theta is not None:
            message = f"{message}; theta={self.theta}"
        super().__init__(message)


class RetryExhaustedError(HomentError):
    """A bounded retry loop ran out of attempts."""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)
