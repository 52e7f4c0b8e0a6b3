"""Exact rationals and rigorous rational-endpoint intervals.

Every real quantity in the package is a :class:`Scalar`: a closed interval
``[lo, hi]`` with :class:`fractions.Fraction` endpoints.  A degenerate interval
(``lo == hi``) *is* the exact rational and arithmetic between exact values
stays exact.  Anything irrational (square roots, trigonometric values, pi) is
an outward-rounded enclosure whose endpoint denominators are powers of two
bounded by the working precision.

The working precision is a context variable so it is safe under threads and
asyncio alike::

    >>> with working_precision(256):
    ...     r2 = sqrt(2)
"""

from __future__ import annotations

import contextlib
import contextvars
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterator, Union

from .errors import IndeterminateEnclosure

__all__ = [
    "DEFAULT_BITS",
    "MAX_BITS",
    "Scalar",
    "as_scalar",
    "cos",
    "decide_le",
    "decide_lt",
    "fourth_root",
    "get_precision",
    "hull",
    "pi",
    "sin",
    "sqrt",
    "working_precision",
]

DEFAULT_BITS = 128
MAX_BITS = 512

_BITS: contextvars.ContextVar[int] = contextvars.ContextVar("cuspslope_bits", default=DEFAULT_BITS)

Number = Union[int, Fraction, "Scalar"]


def get_precision() -> int:
    """Return the current working precision in bits."""
    return _BITS.get()


@contextlib.contextmanager
def working_precision(bits: int) -> Iterator[int]:
    """Temporarily set the number of fractional bits kept on interval endpoints."""
    if bits < 16:
        raise ValueError(f"precision must be at least 16 bits, got {bits}")
    token = _BITS.set(bits)
    try:
        yield bits
    finally:
        _BITS.reset(token)


def _floor_dyadic(x: Fraction, bits: int) -> Fraction:
    if x.denominator <= 1 << bits:
        return x
    return Fraction(math.floor(x * (1 << bits)), 1 << bits)


def _ceil_dyadic(x: Fraction, bits: int) -> Fraction:
    if x.denominator <= 1 << bits:
        return x
    return Fraction(math.ceil(x * (1 << bits)), 1 << bits)


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational; "
                    "binary floats are not accepted")


@dataclass(frozen=True, slots=True)
class Scalar:
    """Closed interval ``[lo, hi]`` of rationals; exact when ``lo == hi``."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = _to_fraction(self.lo), _to_fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    # -- construction ---------------------------------------------------

    @classmethod
    def exact(cls, value) -> Scalar:
        v = _to_fraction(value)
        return cls(v, v)

    @classmethod
    def interval(cls, lo, hi) -> Scalar:
        return cls(_to_fraction(lo), _to_fraction(hi))

    @classmethod
    def _rounded(cls, lo: Fraction, hi: Fraction) -> Scalar:
        """Outward-round a computed enclosure to the working precision."""
        if lo == hi:
            return cls(lo, hi)
        bits = _BITS.get()
        return cls(_floor_dyadic(lo, bits), _ceil_dyadic(hi, bits))

    # -- inspection ------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> Fraction:
        """The exact value; only defined for exact scalars."""
        if not self.is_exact:
            raise ValueError("scalar is an interval, not an exact rational")
        return self.lo

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        if isinstance(x, Scalar):
            return self.lo <= x.lo and x.hi <= self.hi
        x = _to_fraction(x)
        return self.lo <= x <= self.hi

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        if self.is_exact:
            return f"Scalar({self.lo})"
        return f"Scalar([{float(self.lo):.12g}, {float(self.hi):.12g}])"

    def __str__(self) -> str:
        if self.is_exact:
            return str(self.lo)
        return f"[{float(self.lo):.10f}, {float(self.hi):.10f}]"

    # -- arithmetic ------------------------------------------------------

    def __neg__(self) -> Scalar:
        return Scalar(-self.hi, -self.lo)

    def __pos__(self) -> Scalar:
        return self

    def __add__(self, other: Number) -> Scalar:
        o = as_scalar(other)
        return Scalar._rounded(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __sub__(self, other: Number) -> Scalar:
        o = as_scalar(other)
        return Scalar._rounded(self.lo - o.hi, self.hi - o.lo)

    def __rsub__(self, other: Number) -> Scalar:
        return as_scalar(other) - self

    def __mul__(self, other: Number) -> Scalar:
        o = as_scalar(other)
        if self.is_exact and o.is_exact:
            return Scalar.exact(self.lo * o.lo)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Scalar._rounded(min(products), max(products))

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> Scalar:
        o = as_scalar(other)
        if o.contains_zero():
            raise ZeroDivisionError(f"division by an interval containing zero: {o!r}")
        return self * Scalar._rounded(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, other: Number) -> Scalar:
        return as_scalar(other) / self

    def __pow__(self, n: int) -> Scalar:
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        if n == 0:
            return Scalar.exact(1)
        if n % 2 == 0:
            a = abs(self)
            return Scalar._rounded(a.lo ** n, a.hi ** n)
        return Scalar._rounded(self.lo ** n, self.hi ** n)

    def square(self) -> Scalar:
        return self ** 2

    def __abs__(self) -> Scalar:
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return Scalar(Fraction(0), max(-self.lo, self.hi))

    def clamp_below(self, floor=0) -> Scalar:
        """Enclosure of ``max(floor, x)``."""
        f = _to_fraction(floor)
        return Scalar(max(f, self.lo), max(f, self.hi))

    # Equality is structural (same endpoints); order comparisons go through
    # decide_lt / decide_le so that undecidable cases are loud.


def as_scalar(x: Number) -> Scalar:
    if isinstance(x, Scalar):
        return x
    return Scalar.exact(x)


def hull(*xs: Number) -> Scalar:
    ss = [as_scalar(x) for x in xs]
    return Scalar(min(s.lo for s in ss), max(s.hi for s in ss))


def decide_lt(a: Number, b: Number) -> bool:
    """Certified ``a < b``.

    Returns True when every point of ``a`` is below every point of ``b`` and
    False when no point of ``a`` is below any point of ``b``; raises
    :class:`IndeterminateEnclosure` otherwise.
    """
    a, b = as_scalar(a), as_scalar(b)
    if a.hi < b.lo:
        return True
    if a.lo >= b.hi:
        return False
    raise IndeterminateEnclosure(f"cannot decide {a!r} < {b!r} at {get_precision()} bits")


def decide_le(a: Number, b: Number) -> bool:
    """Certified ``a <= b``; see :func:`decide_lt`."""
    a, b = as_scalar(a), as_scalar(b)
    if a.hi <= b.lo:
        return True
    if a.lo > b.hi:
        return False
    raise IndeterminateEnclosure(f"cannot decide {a!r} <= {b!r} at {get_precision()} bits")


# -- roots ---------------------------------------------------------------


def _exact_root(x: Fraction, k: int) -> Fraction | None:
    """Return the exact rational k-th root of a non-negative x, if it exists."""
    num = _int_root_floor(x.numerator, k)
    den = _int_root_floor(x.denominator, k)
    if num ** k == x.numerator and den ** k == x.denominator:
        return Fraction(num, den)
    return None


def _int_root_floor(n: int, k: int) -> int:
    if k == 2:
        return math.isqrt(n)
    if k == 4:
        # floor(sqrt(floor(sqrt(n)))) == floor(n ** (1/4)) for integer n.
        return math.isqrt(math.isqrt(n))
    raise ValueError(k)


def _root_lower(x: Fraction, k: int, bits: int) -> Fraction:
    exact = _exact_root(x, k)
    if exact is not None:
        return exact
    scale = 1 << bits
    return Fraction(_int_root_floor(math.floor(x * scale ** k), k), scale)


def _root_upper(x: Fraction, k: int, bits: int) -> Fraction:
    exact = _exact_root(x, k)
    if exact is not None:
        return exact
    scale = 1 << bits
    r = _int_root_floor(math.ceil(x * scale ** k), k)
    if r ** k < x * scale ** k:
        r += 1
    return Fraction(r, scale)


def _root(x: Number, k: int) -> Scalar:
    s = as_scalar(x)
    if s.hi < 0:
        raise ValueError(f"root of a negative quantity {s!r}")
    lo = max(s.lo, Fraction(0))
    bits = _BITS.get()
    return Scalar(_root_lower(lo, k, bits), _root_upper(s.hi, k, bits))


def sqrt(x: Number) -> Scalar:
    """Enclosure of the square root; exact when ``x`` is an exact rational square."""
    return _root(x, 2)


def fourth_root(x: Number) -> Scalar:
    """Enclosure of the fourth root; exact for exact rational fourth powers."""
    return _root(x, 4)


# -- pi and trigonometry -------------------------------------------------


@lru_cache(maxsize=None)
def _pi_at(bits: int) -> Scalar:
    # Machin: pi = 16 atan(1/5) - 4 atan(1/239), fixed point with 32 guard bits.
    guard = bits + 32
    one = 1 << guard

    def atan_inv(n: int) -> tuple[int, int]:
        total, power, k, sign, nterms = 0, one // n, 0, 1, 0
        n2 = n * n
        while power:
            total += sign * (power // (2 * k + 1))
            power //= n2
            k += 1
            sign = -sign
            nterms += 1
        return total, nterms

    a5, n5 = atan_inv(5)
    a239, n239 = atan_inv(239)
    approx = 16 * a5 - 4 * a239
    # each truncated term is off by < 2 units; the untaken tail is below one unit
    err = 16 * (2 * n5 + 1) + 4 * (2 * n239 + 1)
    lo = Fraction(approx - err, one)
    hi = Fraction(approx + err, one)
    return Scalar(_floor_dyadic(lo, bits), _ceil_dyadic(hi, bits))


def pi() -> Scalar:
    """Enclosure of pi at the working precision."""
    return _pi_at(_BITS.get())


def _series_point(x: Fraction, odd: bool, bits: int) -> Scalar:
    """Enclosure of sin(x) (odd=True) or cos(x) from the alternating Taylor series."""
    target = Fraction(1, 1 << (bits + 4))
    x2 = x * x
    term = x if odd else Fraction(1)
    k = 1 if odd else 0
    total = Fraction(0)
    sign = 1
    while True:
        total += sign * term
        nxt = term * x2 / ((k + 1) * (k + 2))
        k += 2
        sign = -sign
        # the remainder of an alternating series with decreasing terms is
        # bounded by the first omitted term
        if k > abs(x) and abs(nxt) < target:
            bound = abs(nxt)
            break
        term = nxt
    lo, hi = total - bound, total + bound
    return Scalar(max(_floor_dyadic(lo, bits), Fraction(-1)), min(_ceil_dyadic(hi, bits), Fraction(1)))


def _possibly_contains_critical(s: Scalar, offset: Fraction) -> bool:
    """Whether [lo, hi] may contain offset*pi + 2*k*pi for some integer k."""
    p = pi()
    two_pi = p * 2
    base = p * offset
    # range of k for which base + k*two_pi may land in s
    k_lo = math.floor((s.lo - base.hi) / two_pi.hi) - 1
    k_hi = math.ceil((s.hi - base.lo) / two_pi.lo) + 1
    for k in range(k_lo, k_hi + 1):
        c = base + two_pi * k
        if c.hi >= s.lo and c.lo <= s.hi:
            return True
    return False


def sin(x: Number) -> Scalar:
    """Enclosure of sin over the interval ``x``."""
    s = as_scalar(x)
    bits = _BITS.get()
    if s.is_exact:
        if s.lo == 0:
            return Scalar.exact(0)
        return _series_point(s.lo, True, bits)
    out = hull(_series_point(s.lo, True, bits), _series_point(s.hi, True, bits))
    lo, hi = out.lo, out.hi
    if _possibly_contains_critical(s, Fraction(1, 2)):
        hi = Fraction(1)
    if _possibly_contains_critical(s, Fraction(-1, 2)):
        lo = Fraction(-1)
    return Scalar(lo, hi)


def cos(x: Number) -> Scalar:
    """Enclosure of cos over the interval ``x``."""
    s = as_scalar(x)
    bits = _BITS.get()
    if s.is_exact:
        if s.lo == 0:
            return Scalar.exact(1)
        return _series_point(s.lo, False, bits)
    out = hull(_series_point(s.lo, False, bits), _series_point(s.hi, False, bits))
    lo, hi = out.lo, out.hi
    if _possibly_contains_critical(s, Fraction(0)):
        hi = Fraction(1)
    if _possibly_contains_critical(s, Fraction(1)):
        lo = Fraction(-1)
    return Scalar(lo, hi)
