"""Exception types shared across the package."""


class AlphaPatchError(Exception):
    """Base class for all package errors."""


class DegenerateCurveError(AlphaPatchError):
    """Curve fails a geometric precondition (non-simple, vanishing metric)."""


class InvalidSpecError(AlphaPatchError):
    """Parameter combination outside the supported regime."""


class UnsupportedRegimeError(AlphaPatchError):
    """alpha outside (0, 1/2) or an operation asked outside its validity range."""


class OutOfBandError(AlphaPatchError):
    """Littlewood-Paley block not resolvable at the given grid size."""


class WrongRegimeError(AlphaPatchError):
    """Operation called with a Lebesgue exponent on the wrong side of 2."""


class DisjointnessError(AlphaPatchError):
    """Lacunary assembly received overlapping frequency blocks."""


class StepSizeError(AlphaPatchError):
    """Time step violates the stability constraint."""


class StepRejectedError(AlphaPatchError):
    """A time step was rejected (CFL breach or self-intersection)."""


class AmbiguityError(AlphaPatchError):
    """Nearest boundary point is not unique at sample resolution."""


class BracketError(AlphaPatchError):
    """Root bracket does not contain a sign change."""


class DataFormatError(AlphaPatchError):
    """Malformed curve/field/config file."""
