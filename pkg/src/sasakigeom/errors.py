"""Exception types shared across the toolkit.

Every error derives from GeometryError so the CLI can turn any failure
into a machine-readable error object with a stable ``type`` field.
"""


class GeometryError(Exception):
    """Base class; ``details`` is a JSON-serializable payload."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class NonPositiveDefiniteMetric(GeometryError):
    pass


class EvaluationDomain(GeometryError):
    pass


class RankMismatch(GeometryError):
    pass


class DimensionTooSmall(GeometryError):
    pass


class NonPositiveParameter(GeometryError):
    pass


class DegenerateDirection(GeometryError):
    pass


class ConsistencyFailure(GeometryError):
    pass


class UnsupportedDegree(GeometryError):
    pass


class InconsistentDimensions(GeometryError):
    pass


class NoncompactSpace(GeometryError):
    pass


class RankDeficientDesign(GeometryError):
    pass


class SpanViolation(GeometryError):
    pass


class TailTooLarge(GeometryError):
    pass


class IllConditionedFit(GeometryError):
    pass


class ZeroVolume(GeometryError):
    pass


class SingularSystem(GeometryError):
    pass


class HypothesisViolation(GeometryError):
    pass
