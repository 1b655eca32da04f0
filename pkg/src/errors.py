"""Error types shared by the classifier modules and their CLI exit codes."""

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_DISAGREEMENT = 3
EXIT_INCONCLUSIVE = 4


class ClassifierError(Exception):
    """Base class for every error raised by the package."""

    exit_code = EXIT_INPUT_ERROR


class MalformedInput(ClassifierError):
    """Input text or JSON could not be parsed."""


class IndexOutOfRange(ClassifierError):
    """A braid letter refers to a generator that does not exist."""


class StrandCountMismatch(ClassifierError):
    """Two braid words with different strand counts were combined."""


class InvalidPair(ClassifierError):
    """A pure generator was requested for an invalid strand pair."""


class InvalidIndex(ClassifierError):
    """A flip was requested for a strand that does not exist."""


class UnsupportedStrandCount(ClassifierError):
    """The operation is only defined for a specific strand count."""


class NotPure(ClassifierError):
    """A pure braid was required but the word permutes its strands."""


class InvalidClass(ClassifierError):
    """A sphere braid class violates its parity invariant."""


class InvalidCertificate(ClassifierError):
    """A certificate move is illegal for the word it is applied to."""


class ZeroAxis(ClassifierError):
    """A rotation segment has a nonzero angle but no usable axis."""


class OutOfRange(ClassifierError):
    """A path parameter lies outside [0, 1]."""


class NotClosed(ClassifierError):
    """A closed rotation path was required."""


class NumericalAmbiguity(ClassifierError):
    """The lifted endpoint is close to neither +1 nor -1."""


class SparseSampling(ClassifierError):
    """Consecutive orientation samples are too far apart to lift."""


class NotNormalizable(ClassifierError):
    """An orientation sample is not a valid rotation."""


class DegenerateTriangle(ClassifierError):
    """Three strand points are collinear."""


class NotAnchored(ClassifierError):
    """A spherical braid does not start and end at the base triangle."""


class NoClearPole(ClassifierError):
    """No projection pole keeps enough distance from the strands."""


class PoleCollision(ClassifierError):
    """A strand sample lies on the projection pole."""


class DegenerateCrossing(ClassifierError):
    """Two strands cross with equal depth."""


class TripleCrossing(ClassifierError):
    """All three strands share the same horizontal coordinate."""


class NotPureResult(ClassifierError):
    """The crossing sweep produced a non-pure word for a closed path."""

    exit_code = EXIT_DISAGREEMENT


class Disagreement(ClassifierError):
    """The braid route and the quaternion route classified a path differently."""

    exit_code = EXIT_DISAGREEMENT

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
