"""Exception hierarchy shared by all modules."""


class QMKError(Exception):
    """Base class for every error raised by this package."""


class DisconnectedGraph(QMKError):
    pass


class SizeLimitExceeded(QMKError):
    pass


class UnsupportedClass(QMKError):
    pass


class ZeroGraph(QMKError):
    """Raised when a construction needs at least one edge or loop."""


class NotAnEigenvalue(QMKError):
    pass


class OutsideModuliImage(QMKError):
    """Requested trace invariants are not attained by any nondegenerate forms of that size."""


class NotAGeneralizedTree(QMKError):
    pass


class BadParameterCount(QMKError):
    pass


class ArityMismatch(QMKError):
    pass


class UndefinableProjector(QMKError):
    """A Jones-Wenzl projector needs division by a vanishing quantum integer."""


class InvalidSolution(QMKError):
    pass


class NotRootOfUnity(QMKError):
    pass


class ParseError(QMKError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
