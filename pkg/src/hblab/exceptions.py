"""Exception types raised across the package."""


class HBLabError(Exception):
    """Base class for all errors raised by hblab."""


class AmplificationError(HBLabError):
    """Coefficient extraction inside the disk would amplify roundoff too much."""


class NonRealInput(HBLabError):
    """A modulus grid carries a non-negligible imaginary part."""


class NotInUnitBall(HBLabError):
    """A function exceeds modulus one on the circle."""


class OutsideDisk(HBLabError):
    """A point that must lie in the open unit disk does not."""


class IllConditioned(HBLabError):
    """A finite Toeplitz section is too ill-conditioned to solve."""


class DegenerateOnCircle(HBLabError):
    """A Laurent symbol has a root on (or numerically on) the unit circle."""


class ParameterOutOfRange(HBLabError):
    """A construction parameter lies outside its admissible range."""


class ResolutionError(HBLabError):
    """The truncation degree is too small to resolve the requested object."""


class InvalidPair(HBLabError):
    """A (b, a) pair violates the Pythagorean-pair invariants."""


class ParseError(HBLabError):
    """Malformed series text; ``offset`` points at the offending character."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset
