"""Exception hierarchy shared by every module of the package."""


class ShiftFlowError(ValueError):
    """Base class for all domain errors raised by shiftflow."""


# shift-core
class NonBinaryEntry(ShiftFlowError):
    pass


class NotIrreducible(ShiftFlowError):
    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class PermutationMatrix(ShiftFlowError):
    pass


class InvalidPoint(ShiftFlowError):
    pass


# cohomology
class ShiftMismatch(ShiftFlowError):
    pass


class NotIntegerValued(ShiftFlowError):
    pass


class NotOrderUnit(ShiftFlowError):
    pass


# invariants
class OrbitBoundExceeded(ShiftFlowError):
    pass


# zeta
class BadConstantTerm(ShiftFlowError):
    pass


# orbit equivalence
class IncompleteTransition(ShiftFlowError):
    pass


class DepthInconsistency(ShiftFlowError):
    pass


class PeriodMismatch(ShiftFlowError):
    pass


# suspension
class NotIntegerDifference(ShiftFlowError):
    pass


class NegativeCeiling(ShiftFlowError):
    pass


class BelowBase(ShiftFlowError):
    pass


class ReturnCheckFailed(ShiftFlowError):
    pass
