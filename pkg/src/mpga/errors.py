"""Exception hierarchy."""


class MpgaError(Exception):
    """Base class for all package errors."""


class UsageError(MpgaError, ValueError):
    """An operation was called with arguments outside its contract."""


class SignatureMismatch(UsageError):
    pass


class NotInvertible(MpgaError, ArithmeticError):
    pass


class UndefinedMeasure(MpgaError):
    """A distance, angle or area is not defined for the given objects.

    ``reason`` is a short tag such as ``"null"`` or ``"improper"``.
    """

    def __init__(self, reason: str, message: str | None = None):
        self.reason = reason
        super().__init__(message or f"undefined({reason})")


class UndefinedOrientation(UndefinedMeasure):
    pass


class ParametrizationError(MpgaError, ValueError):
    pass


class SuperluminalError(MpgaError, ValueError):
    pass


class ConvergenceError(MpgaError, ArithmeticError):
    pass
