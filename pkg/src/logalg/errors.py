"""Exception hierarchy shared by every layer of the package."""


class LogalgError(Exception):
    """Base class for all errors raised by logalg."""


class RingMismatchError(LogalgError):
    pass


class ParseError(LogalgError):
    """Malformed polynomial or form text; ``pos`` is a 0-based offset."""

    def __init__(self, message, text="", pos=0):
        super().__init__(message)
        self.message = message
        self.text = text
        self.pos = pos

    def __str__(self):
        return f"{self.message} (at offset {self.pos})"


class SingularMatrixError(LogalgError):
    pass


class SingularMetricError(SingularMatrixError):
    pass


class DegreeError(LogalgError):
    pass


class DegenerateIdealError(LogalgError):
    pass


class DomainError(LogalgError):
    """An input falls outside the set on which an operation is defined."""


class ArityError(LogalgError):
    pass


class InvalidPoissonError(LogalgError):
    pass


class UnsupportedChartError(LogalgError):
    pass


class InvalidActionError(LogalgError):
    pass


class BasisError(LogalgError):
    pass


class NotFreeError(LogalgError):
    pass
