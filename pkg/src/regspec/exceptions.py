"""Exception hierarchy shared by every regspec module."""


class RegspecError(Exception):
    """Base class for all library errors."""


class ParameterError(RegspecError, ValueError):
    """Invalid or inconsistent input parameters."""


class DomainError(ParameterError):
    """Argument lies outside the mathematical domain of an operation."""


class PreconditionError(ParameterError):
    """A documented precondition on the input does not hold."""


class CapacityError(RegspecError):
    """Requested object or computation exceeds a configured size cap."""


class SamplingError(RegspecError):
    """Random graph sampler ran out of its retry/switch budget."""


class SingularityError(RegspecError, ArithmeticError):
    """A denominator or matrix block is numerically singular."""


class ConvergenceError(RegspecError):
    """An iterative numerical routine failed to converge."""


class NotFoundError(RegspecError, LookupError):
    """An expected spectral feature is absent."""


class ParseError(RegspecError, ValueError):
    """Malformed input file; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class InvariantError(RegspecError):
    """Data violates a structural invariant, or a self-check failed."""
