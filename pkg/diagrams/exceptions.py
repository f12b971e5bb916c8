"""
Errors raised across the toolkit.

Every domain error derives from DiagramError so management commands can turn
any of them into an input-error exit code with a single except clause.
"""


class DiagramError(Exception):
    """Base class for every error raised by the diagram toolkit."""


class ArityMismatch(DiagramError):
    pass


class MalformedDiagram(DiagramError):
    pass


class ParseError(MalformedDiagram):
    pass


class CapacityExceeded(DiagramError):
    pass


class StaleRedex(DiagramError):
    pass


class BudgetExhausted(DiagramError):
    def __init__(self, message, steps=0):
        super().__init__(message)
        self.steps = steps


class DimensionMismatch(DiagramError):
    pass


class ShapeMismatch(DiagramError):
    pass


class NotJoinable(DiagramError):
    def __init__(self, message, peak=None):
        super().__init__(message)
        self.peak = peak


class UnknownPeak(DiagramError):
    pass


class NonLinearTerm(DiagramError):
    pass


class UnknownVariable(DiagramError):
    pass


class CompositionMismatch(DiagramError):
    pass


class NotParallel(DiagramError):
    pass


class ExpansionUnavailable(DiagramError):
    pass
