"""Exception hierarchy.

Every failure mode that callers are expected to handle gets its own class;
report-style operations (validators) return findings instead of raising.
"""


class WittramError(Exception):
    """Base class for all library errors."""


class NotAPthPower(WittramError):
    pass


class IrreducibleDenominator(WittramError):
    """A denominator factor does not split over the provided field."""


class LengthMismatch(WittramError):
    pass


class BadLevel(WittramError):
    pass


class PoleOutsideSupport(WittramError):
    pass


class NotReduced(WittramError):
    pass


class InvalidDatum(WittramError):
    pass


class InvalidJumps(WittramError):
    pass


class ZeroInput(WittramError):
    pass


class IterationLimit(WittramError):
    """A greedy normalisation loop exceeded its configured bound."""


class HypothesisViolation(WittramError):
    """A numerically checked precondition failed at a sampled place."""


class GridTooCoarse(WittramError):
    """Kink certification failed at the requested grid resolution."""


class BranchOutsideDisc(WittramError):
    pass


class InseparableBranchPoints(WittramError):
    pass


class LevelTooLow(WittramError):
    pass


class NoSuchEdge(WittramError):
    pass


class RecipeDegenerate(WittramError):
    pass


class ModeUnavailable(WittramError):
    pass


class PoleCollision(WittramError):
    pass


class BadShape(WittramError):
    pass


class ShapeMismatch(WittramError):
    pass


class NotExact(WittramError):
    pass


class FieldError(WittramError):
    """A coefficient does not live in the declared field."""


class ExprSyntaxError(WittramError):
    def __init__(self, message, line=1, column=0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class DegreeCapExceeded(WittramError):
    """Diagnostic guard against runaway expression growth."""
