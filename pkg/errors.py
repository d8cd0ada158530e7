"""Exceptions raised by the aybe modules."""


class AybeError(Exception):
    """Base class for every failure raised by the library."""


class DegeneratePoint(AybeError, ValueError):
    """A spectral point where the requested object is not defined.

    The sampler treats these as forbidden draws and moves on.
    """


class PoleHit(DegeneratePoint):
    pass


class CoincidingPoints(DegeneratePoint):
    pass


class SingularResidue(DegeneratePoint):
    pass


class DimensionDrop(DegeneratePoint):
    pass


class SingularGauge(DegeneratePoint):
    pass


class NoSolution(AybeError):
    pass


class Singular(AybeError):
    pass


class DuplicateNode(AybeError, ValueError):
    pass


class ExhaustedSampling(AybeError):
    pass


class InvalidPair(AybeError, ValueError):
    pass


class Undefined(AybeError, ValueError):
    pass


class SizeMismatch(AybeError, ValueError):
    pass


class DegreeCapExceeded(AybeError):
    pass


class ExponentMismatch(AybeError):
    pass


class HypothesisFailed(AybeError):
    """A solution handed to the condition battery is not a unitary AYBE solution."""
