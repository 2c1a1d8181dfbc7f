"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI puts in
its JSON error object.
"""


class ThueError(Exception):
    code = "ThueError"

    def __init__(self, detail=""):
        super().__init__(detail)
        self.detail = detail


class NonPositiveDiscriminant(ThueError):
    code = "NonPositiveDiscriminant"


class DegenerateLeadingCoefficient(ThueError):
    code = "DegenerateLeadingCoefficient"


class ReduciblePolynomial(ThueError):
    code = "ReduciblePolynomial"


class ReducibleForm(ReduciblePolynomial):
    code = "ReducibleForm"


class PrecisionExhausted(ThueError):
    code = "PrecisionExhausted"


class DivisionNearZero(PrecisionExhausted):
    code = "DivisionNearZero"


class LogOfNonPositive(PrecisionExhausted):
    code = "LogOfNonPositive"


class NotUnimodular(ThueError):
    code = "NotUnimodular"


class OriginPoint(ThueError):
    code = "OriginPoint"


class NegativeArgument(ThueError):
    code = "NegativeArgument"


class TieUnresolvable(ThueError):
    code = "TieUnresolvable"


class ZeroElement(ThueError):
    code = "ZeroElement"


class EmptySearch(ThueError):
    code = "EmptySearch"


class RankDeficient(ThueError):
    code = "RankDeficient"


class SamePoint(ThueError):
    code = "SamePoint"


class NoCrossing(ThueError):
    code = "NoCrossing"
