"""Exception hierarchy shared by all gzlab modules."""


class GzlabError(Exception):
    """Base class for all errors raised by this package."""


class LimitExceeded(GzlabError):
    """A configurable cap (derivative order, series length) was exceeded."""


class MissingJetValue(GzlabError):
    """A jet-polynomial evaluation was given too few derivative values."""


class PoleError(GzlabError):
    """Evaluation requested at (or within tolerance of) a pole."""


class PrecisionUnreachable(GzlabError):
    """Series plus argument shifting cannot meet the requested error target."""


class ExponentOverflow(GzlabError):
    """The magnitude of a result exceeds the floating exponent range."""


class SectorError(GzlabError):
    """Argument lies outside the admissible sector for an asymptotic check."""


class DivisionNearZero(GzlabError):
    """A required divisor is below the precision floor."""


class DomainError(GzlabError):
    """An input is outside the documented domain of an operation."""


class ZeroPolynomial(GzlabError):
    """A candidate polynomial turned out to be identically zero."""


class AllZeroCoefficients(GzlabError):
    """Every rearranged coefficient vanished at all sampled points."""


class ParseError(GzlabError):
    """Rejected input text; carries 1-based line/column of the offense."""

    def __init__(self, message, line, col):
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.line = line
        self.col = col
