"""Exception hierarchy shared by all modules."""


class LapSepError(Exception):
    """Base class for every error raised by lapsep."""


class ParseError(LapSepError, ValueError):
    pass


class BadGraph6(ParseError):
    pass


class DimensionMismatch(LapSepError, ValueError):
    pass


class OutOfRange(LapSepError, IndexError):
    pass


class ZeroTrace(LapSepError, ValueError):
    """Normalization requested for a matrix whose trace is zero."""


class NonBinaryWeights(LapSepError, ValueError):
    pass


class NotDensityMatrix(LapSepError, ValueError):
    pass


class NotDiagonallyDominant(LapSepError, ValueError):
    pass


class NotBipartiteDims(LapSepError, ValueError):
    pass


class PreconditionUnmet(LapSepError, ValueError):
    pass


class TrivialGraph(PreconditionUnmet):
    pass


class CompleteGraph(PreconditionUnmet):
    pass


class NegativeWeight(LapSepError, ArithmeticError):
    """A separable certificate expansion produced a negative term weight."""


class UnknownName(LapSepError, KeyError):
    pass


class TooLarge(LapSepError, ValueError):
    pass


class ConstructionFailed(LapSepError, RuntimeError):
    """A labeling construction did not produce its promised witness."""
