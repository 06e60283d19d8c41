"""Exception types shared across the package."""


class HalfGuardError(Exception):
    """Base class for all errors raised by this package."""


class PolygonError(HalfGuardError):
    pass


class TooFewVertices(PolygonError):
    pass


class RepeatedVertex(PolygonError):
    pass


class NotSimple(PolygonError):
    pass


class DegenerateStraightVertex(PolygonError):
    pass


class NotOrthogonal(PolygonError):
    pass


class DegenerateRay(HalfGuardError):
    """Ray shooting hit a configuration outside the case analysis; callers retry."""


class InvalidCut(HalfGuardError):
    pass


class DegenerateTriangle(HalfGuardError):
    pass


class OverlapError(HalfGuardError):
    pass


class ReflexVertex(HalfGuardError):
    pass


class ConeNotContained(HalfGuardError):
    pass


class NotOnBoundary(HalfGuardError):
    pass


class PointOutsidePolygon(HalfGuardError):
    pass


class InvalidSize(HalfGuardError):
    pass


class DegenerateConfiguration(HalfGuardError):
    """A landing claim of the construction failed; surfaced instead of guessed around."""


class PreconditionViolated(HalfGuardError):
    pass


class NotEntire(HalfGuardError):
    pass


class AlignmentMissing(HalfGuardError):
    pass


class ConstructionInvariantError(HalfGuardError):
    """An internal invariant of the placement recursion failed (bug indicator)."""


class GenerationFailed(HalfGuardError):
    pass
