"""Exception hierarchy shared by all loopkit modules."""


class LoopkitError(Exception):
    """Base class for every error raised by loopkit."""


class DegenerateInputError(LoopkitError, ValueError):
    """An algebraic operation received an input it cannot act on (zero divisor, zero gcd)."""


class PoleError(LoopkitError, ZeroDivisionError):
    """A rational function was evaluated at one of its poles."""

    def __init__(self, point):
        super().__init__(f"evaluation at pole z = {point}")
        self.point = point


class DegreeCapError(LoopkitError, OverflowError):
    """A polynomial exceeded the configured degree guard."""


class DomainError(LoopkitError, ValueError):
    """Arguments fall outside an operation's domain (e.g. P_ii, wrong EMP shape)."""


class UnsupportedSizeError(LoopkitError, ValueError):
    """A loop size outside the supported range."""


class DegenerateNetworkError(LoopkitError, ValueError):
    """The loop has 1 - P = 0 or a zero edge, so closed-loop maps do not exist."""


class NonGenericError(LoopkitError, ArithmeticError):
    """The instance lies on the exceptional set where a generic formula divides by zero."""


class NotIdentifiableError(LoopkitError, ValueError):
    """Recovery was requested for an EMP that does not identify the loop."""

    def __init__(self, message, reason=None):
        super().__init__(message)
        self.reason = reason


class FormatError(LoopkitError, ValueError):
    """Malformed serialized input; the message names the offending field."""
