"""Exception hierarchy shared by all hyplevel modules."""


class HyplevelError(Exception):
    """Base class for every error raised by this package."""


class DomainError(HyplevelError, ValueError):
    """A point lies outside the open unit disc, or hits a pole."""


class DSLParseError(HyplevelError, ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class BoundaryNotFound(HyplevelError):
    """No sign change of the level function on any scan ray."""


class SingularGradient(HyplevelError):
    pass


class SingularTangent(HyplevelError):
    pass


class OffCurve(HyplevelError):
    pass


class MaxStepsExceeded(HyplevelError):
    pass


class NoConvergence(HyplevelError):
    pass


class NearSingular(HyplevelError):
    pass


class RequirementMismatch(HyplevelError, ValueError):
    """A bound or check was requested outside its hypotheses."""


class OpenCurve(HyplevelError):
    """Measure requested on an arc with endpoints on the unit circle.

    The hyperbolic perimeter of such an arc is infinite.
    """


InfinitePerimeter = OpenCurve
