"""Exception types raised by the construction and verification routines."""


class DesignCurveError(Exception):
    """Base class for all errors raised by this package."""


class AntipodalPoints(DesignCurveError, ValueError):
    pass


class CoincidentPoints(DesignCurveError, ValueError):
    pass


class QuadratureNonconvergence(DesignCurveError, ArithmeticError):
    pass


class DegreeViolation(DesignCurveError, ValueError):
    pass


class Disconnected(DesignCurveError, ValueError):
    pass


class UnknownFamily(DesignCurveError, KeyError):
    pass


class DimensionMismatch(DesignCurveError, ValueError):
    pass


class ParseError(DesignCurveError, ValueError):
    pass


class InvariantViolation(DesignCurveError, ValueError):
    pass


class OddSetSize(DesignCurveError, ValueError):
    pass


class WeightInvariantViolation(InvariantViolation):
    pass


class SouthPoleViolation(DesignCurveError, ValueError):
    pass


class PhaseClosureViolation(DesignCurveError, ValueError):
    pass


class PhaseExclusionViolation(DesignCurveError, ValueError):
    pass


class BudgetTooSmall(DesignCurveError, ValueError):
    pass


class OrthogonalFibers(DesignCurveError, ValueError):
    pass


class SameFiber(DesignCurveError, ValueError):
    pass


class DuplicatePoints(DesignCurveError, ValueError):
    pass


class EdgeInteriorPoint(DesignCurveError, ValueError):
    """A third design point lies on the interior of a spanning-tree geodesic."""


class DeltaOutOfRange(DesignCurveError, ValueError):
    pass


class EdgeTooLong(DesignCurveError, ValueError):
    pass


class SimplicityFailure(DesignCurveError, RuntimeError):
    pass


class StrengthViolation(DesignCurveError, ValueError):
    pass


class GonNotSubset(DesignCurveError, ValueError):
    pass
