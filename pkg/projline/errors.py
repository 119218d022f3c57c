"""Exceptions raised by projline.

Every error a library operation can raise derives from ``ProjLineError`` so the
command line can report it by class name.
"""


class ProjLineError(ValueError):
    """Base class of all domain errors."""


class DivisionByZero(ProjLineError, ZeroDivisionError):
    pass


class ContextMismatch(ProjLineError):
    pass


class NotEnumerable(ProjLineError):
    pass


class NotPrime(ProjLineError):
    pass


class BoundExceeded(ProjLineError):
    pass


class ZeroScalar(ProjLineError):
    pass


class ZeroVector(ProjLineError):
    pass


class VectorNotInSource(ProjLineError):
    pass


class NotComposable(ProjLineError):
    pass


class UndefinedCrossRatio(ProjLineError):
    pass


class MalformedTable(ProjLineError):
    pass


class UnknownPoint(ProjLineError):
    pass


class PointsNotDistinct(ProjLineError):
    pass


class TriplesNotDistinct(ProjLineError):
    pass


class FieldMismatch(ProjLineError):
    pass


class NoSolution(ProjLineError):
    pass


class PreconditionViolated(ProjLineError):
    pass


class SingularMatrix(ProjLineError):
    pass


class NotAProjectivity(ProjLineError):
    pass


class WeightsNotAffine(ProjLineError):
    pass


class PunctureInTerms(ProjLineError):
    pass


class ZeroEqualsPuncture(ProjLineError):
    pass


class BaseMismatch(ProjLineError):
    pass


class UsageError(ProjLineError):
    pass
