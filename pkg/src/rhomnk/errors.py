"""Exception types raised across the package."""


class RhoMnkError(Exception):
    """Base class for all errors raised by :mod:`rhomnk`."""


class InfeasibleCorrelation(RhoMnkError, ValueError):
    """The constant-correlation matrix is not positive semi-definite."""


class InvalidParams(RhoMnkError, ValueError):
    pass


class LengthMismatch(RhoMnkError, ValueError):
    pass


class IndexOutOfRange(RhoMnkError, IndexError):
    pass


class MalformedFile(RhoMnkError, ValueError):
    """An instance file could not be parsed.

    ``line`` is 1-based; ``position`` is the 0-based token index on that
    line, or ``None`` when the problem concerns the whole line.
    """

    def __init__(self, message, line=None, position=None):
        self.line = line
        self.position = position
        where = ""
        if line is not None:
            where = f"line {line}"
            if position is not None:
                where += f", token {position}"
            where += ": "
        super().__init__(where + message)


class DimensionMismatch(RhoMnkError, ValueError):
    pass


class PointBelowReference(RhoMnkError, ValueError):
    pass


class InfeasibleCardinality(RhoMnkError, ValueError):
    pass


class ExhaustedNeighborhood(RhoMnkError, RuntimeError):
    """Every replacement move collides with an existing member."""


class ZeroVariance(RhoMnkError, ValueError):
    pass


class UndefinedLength(RhoMnkError, ValueError):
    """The correlation length needs 0 < r(1) < 1."""


class InvalidConfig(RhoMnkError, ValueError):
    pass
