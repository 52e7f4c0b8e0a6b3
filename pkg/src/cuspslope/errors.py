"""Exception hierarchy shared by every cuspslope module."""


class CuspSlopeError(Exception):
    """Base class for all errors raised by this package."""


class ZeroSlope(CuspSlopeError, ValueError):
    """(0, 0) does not name a curve."""


class NonPrimitive(CuspSlopeError, ValueError):
    """The pair names a multiple curve rather than a slope.

    Attributes
    ----------
    gcd : int
        The common divisor of the offending pair.
    """

    def __init__(self, p, q, gcd):
        super().__init__(f"({p}, {q}) is not primitive (gcd {gcd})")
        self.gcd = gcd


class DegenerateLattice(CuspSlopeError, ValueError):
    """Meridian and longitude are not certifiably independent."""


class IndeterminateEnclosure(CuspSlopeError, ArithmeticError):
    """An interval comparison straddles its threshold at the working precision."""


class SamplerExhausted(CuspSlopeError, RuntimeError):
    """Rejection sampling ran out of attempts."""
