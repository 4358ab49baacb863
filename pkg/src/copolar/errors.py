"""Exception types raised across the package."""


class CopolarError(Exception):
    """Base class for all package errors."""


class NumericError(CopolarError):
    """A numerical computation could not produce a trustworthy value."""


class NonFinite(NumericError):
    pass


class Degenerate(NumericError):
    pass


class RankDeficient(NumericError):
    pass


class NoiseBudgetExceeded(NumericError):
    pass


class DegenerateSupport(NumericError):
    pass


class Singular(NumericError):
    pass


class EmptyFootprint(CopolarError, ValueError):
    pass


class OutsideCone(CopolarError, ValueError):
    pass


class NotOnBoundary(CopolarError, ValueError):
    pass


class ParseError(CopolarError, ValueError):
    pass


class UnknownAudit(CopolarError, KeyError):
    pass
