"""Exception types shared across the package."""


class IndexMapError(Exception):
    pass


class PrecisionExhausted(IndexMapError):
    """A decision needed a digit beyond the known precision."""


class DivisionByZero(IndexMapError, ZeroDivisionError):
    pass


class SingularMatrix(IndexMapError):
    pass


class RankDeficient(IndexMapError):
    pass


class NotContained(IndexMapError):
    pass


class IllFormedMap(IndexMapError):
    pass


class NotAPoset(IndexMapError):
    pass


class InvalidMorphism(IndexMapError):
    pass


class NotAdmissible(IndexMapError):
    def __init__(self, message, edge=None):
        super().__init__(message)
        self.edge = edge


class TreeNotCollapsible(IndexMapError):
    pass


class ConditionViolated(IndexMapError):
    def __init__(self, condition, message=""):
        super().__init__(f"condition ({condition}) violated" + (f": {message}" if message else ""))
        self.condition = condition


class TooLarge(IndexMapError):
    pass


class UnknownSuite(IndexMapError):
    pass


class ParseError(IndexMapError, ValueError):
    pass
