"""Exception hierarchy shared by all test families."""


class PairDiffError(ValueError):
    """Base class for every error raised by this package."""


class EmptySample(PairDiffError):
    pass


class NonPositiveWeight(PairDiffError):
    pass


class LengthMismatch(PairDiffError):
    pass


class DomainError(PairDiffError):
    """An argument lies outside the domain of the function."""


class NoBracket(PairDiffError):
    """Root bracketing failed; the target is outside the range of the function."""


class ZeroVariance(PairDiffError):
    pass


class TooFewObservations(PairDiffError):
    pass


class DegenerateMean(PairDiffError):
    """Weighted mean of the observations sits on the boundary of its domain."""


class DegenerateV(PairDiffError):
    """Dispersion constant outside the range where the mixture model is defined."""


class InvariantViolation(PairDiffError):
    pass


class MissingColumn(PairDiffError):
    pass


class ParseError(PairDiffError):
    pass
