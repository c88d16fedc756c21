"""Exception hierarchy shared by all liftlab modules."""


class LiftLabError(Exception):
    """Base class for every error raised by liftlab."""


class ParseError(LiftLabError, ValueError):
    pass


# expoly
class ParameterDifferentiation(LiftLabError):
    pass


class ContainsFiberVariable(LiftLabError):
    pass


class NonExactEvaluation(LiftLabError):
    pass


# vfield
class SpaceMismatch(LiftLabError):
    pass


class NotProjectable(LiftLabError):
    pass


class NotInvertible(LiftLabError):
    pass


class DegreeTooHigh(LiftLabError):
    pass


# liealg
class NotClosed(LiftLabError):
    def __init__(self, message, pair=None, bracket=None):
        super().__init__(message)
        self.pair = pair
        self.bracket = bracket


class LinearlyDependent(LiftLabError):
    pass


class NotALift(LiftLabError):
    pass


class NotTransitive(LiftLabError):
    pass


class NoTransitivePair(LiftLabError):
    pass


# catalog
class UnknownId(LiftLabError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown id"


class InvalidParameter(LiftLabError, ValueError):
    pass


# cohomology
class DegreeTooSmall(LiftLabError):
    pass


class NotACocycle(LiftLabError):
    pass


# liftsolver
class OutsideRing(LiftLabError):
    pass


class TruncationExhausted(LiftLabError):
    pass


class BranchEnumerationFailed(LiftLabError):
    def __init__(self, message, basis=None):
        super().__init__(message)
        self.basis = basis


class LimitExceeded(LiftLabError):
    pass
