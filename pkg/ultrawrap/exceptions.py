class UltrawrapError(Exception):
    pass


class FieldError(UltrawrapError):
    pass


class DivisionByZero(FieldError):
    pass


class PrecisionLoss(FieldError):
    """Raised when an operation needs more significant digits than are tracked."""

    def __init__(self, message: str, remaining: int = 0):
        super().__init__(message)
        self.remaining = remaining


class ParameterMismatch(FieldError):
    pass


class DomainError(FieldError):
    pass


class ZeroNormElement(UltrawrapError):
    """A nonzero algebra element with vanishing norm: a zero divisor."""

    def __init__(self, message: str, element=None):
        super().__init__(message)
        self.element = element


class NonConvergent(UltrawrapError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class MonoidLawError(UltrawrapError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NonCancellative(MonoidLawError):
    pass


class NonCommutative(MonoidLawError):
    pass


class CapExceeded(UltrawrapError):
    def __init__(self, message: str, size: int = 0, cap: int = 0):
        super().__init__(message)
        self.size = size
        self.cap = cap


class ExpressionSyntaxError(UltrawrapError):
    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class DocumentError(UltrawrapError):
    pass
