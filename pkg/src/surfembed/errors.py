"""Exception hierarchy.

Every construction failure derives from :class:`EmbeddingError`; the CLI maps
these to exit status 2. Verification failures are results, never exceptions.
"""


class EmbeddingError(Exception):
    """Base class for construction and model errors."""


class ModelError(EmbeddingError, ValueError):
    """A surface model violates one of its invariants."""


class ConfigError(EmbeddingError, ValueError):
    """A job configuration cannot be parsed."""


# holo_core
class DuplicateZero(EmbeddingError):
    pass


class NodeNotZeroOfB(EmbeddingError):
    pass


class ZeroDerivative(EmbeddingError):
    pass


class ContourThroughZero(EmbeddingError):
    pass


class NonIntegerWinding(EmbeddingError):
    pass


# surfaces
class PunctureOffCurve(ModelError):
    pass


class PointOffCurve(ModelError):
    pass


class HypothesisViolation(EmbeddingError):
    """A puncture column has exactly one kept point and it is ramified."""


class CoincidentPoints(ModelError):
    pass


class ZeroInput(ModelError):
    pass


class NotABranchPoint(ModelError):
    pass


# embedder
class HypothesisFailure(EmbeddingError):
    """The interpolant does not pass through the kept point of a shear pole."""


class DuplicatePuncture(ModelError):
    pass
