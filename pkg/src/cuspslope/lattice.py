"""Euclidean geometry of the cusp-torus lattice.

A maximal cusp torus is modelled by its two translation vectors, the
meridian ``m`` and longitude ``l``.  The slope ``p/q`` is the primitive
lattice vector ``p*m + q*l``; its length is the length of the geodesic
representative and the distance between two slopes is ``|p1*q2 - p2*q1|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DegenerateLattice, NonPrimitive, ZeroSlope
from .scalar import Number, Scalar, as_scalar, decide_le, sqrt

__all__ = [
    "CuspShape",
    "Slope",
    "SlopeReport",
    "Vec2",
    "coefficient_box",
    "cusp_area",
    "enumerate_short_slopes",
    "integral_slope_reports",
    "is_short",
    "normalize_slope",
    "reduce_slope",
    "shortest_slope",
    "slope_distance",
    "slope_length",
    "slope_length_squared",
    "slope_vector",
    "triangle_area_identity",
]

DEFAULT_CUTOFF = 6


@dataclass(frozen=True, slots=True)
class Vec2:
    x: Scalar
    y: Scalar

    def __post_init__(self):
        object.__setattr__(self, "x", as_scalar(self.x))
        object.__setattr__(self, "y", as_scalar(self.y))

    def __add__(self, other: Vec2) -> Vec2:
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: Vec2) -> Vec2:
        return Vec2(self.x - other.x, self.y - other.y)

    def scale(self, k: Number) -> Vec2:
        return Vec2(self.x * k, self.y * k)

    def dot(self, other: Vec2) -> Scalar:
        return self.x * other.x + self.y * other.y

    def cross(self, other: Vec2) -> Scalar:
        """The determinant ``det(self, other)``."""
        return self.x * other.y - self.y * other.x

    def norm_squared(self) -> Scalar:
        return self.x.square() + self.y.square()

    def norm(self) -> Scalar:
        return sqrt(self.norm_squared())

    @property
    def is_exact(self) -> bool:
        return self.x.is_exact and self.y.is_exact


@dataclass(frozen=True, slots=True)
class CuspShape:
    """Meridian and longitude translations of a cusp torus.

    Raises :class:`DegenerateLattice` when the two vectors are not
    certifiably independent.
    """

    meridian: Vec2
    longitude: Vec2
    name: Optional[str] = None

    def __post_init__(self):
        if self.meridian.cross(self.longitude).contains_zero():
            raise DegenerateLattice(
                f"meridian {self.meridian} and longitude {self.longitude} "
                "do not span a lattice")

    @classmethod
    def from_components(cls, mx, my, lx, ly, name=None) -> CuspShape:
        return cls(Vec2(mx, my), Vec2(lx, ly), name)

    @property
    def is_exact(self) -> bool:
        return self.meridian.is_exact and self.longitude.is_exact

    def shifted(self, k: int) -> CuspShape:
        """Same lattice with the longitude replaced by ``longitude + k*meridian``."""
        return CuspShape(self.meridian, self.longitude + self.meridian.scale(k), self.name)

    def normalized(self) -> CuspShape:
        """Rotate so the meridian is ``(|m|, 0)`` and reflect so ``longitude.y > 0``.

        Only exact shapes whose meridian length is rational can be normalized
        without leaving the rationals; others raise ``ValueError``.
        """
        m2 = self.meridian.norm_squared()
        mlen = sqrt(m2)
        if not (self.is_exact and mlen.is_exact):
            raise ValueError("normalization needs an exact shape with rational meridian length")
        mx, my = self.meridian.x.value, self.meridian.y.value
        length = mlen.value
        c, s = mx / length, my / length
        lx, ly = self.longitude.x.value, self.longitude.y.value
        nx, ny = c * lx + s * ly, -s * lx + c * ly
        if ny < 0:
            ny = -ny
        return CuspShape.from_components(length, 0, nx, ny, self.name)


@dataclass(frozen=True, slots=True, order=True)
class Slope:
    """Canonical primitive pair: ``q > 0``, or ``(p, q) == (1, 0)``."""

    p: int
    q: int

    def __post_init__(self):
        if (self.p, self.q) == (0, 0):
            raise ZeroSlope("(0, 0) is not a slope")
        g = math.gcd(self.p, self.q)
        if g != 1:
            raise NonPrimitive(self.p, self.q, g)
        if not (self.q > 0 or (self.q == 0 and self.p == 1)):
            raise ValueError(f"({self.p}, {self.q}) is not in canonical sign; use normalize_slope")

    @property
    def is_integral(self) -> bool:
        return self.q == 1

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


@dataclass(frozen=True, slots=True)
class SlopeReport:
    slope: Slope
    length: Scalar
    length_squared: Scalar
    boundary_uncertain: bool = False


def normalize_slope(p: int, q: int) -> Slope:
    """Canonical representative of the unoriented class of ``±(p, q)``.

    >>> normalize_slope(-3, -1)
    Slope(p=3, q=1)
    """
    if (p, q) == (0, 0):
        raise ZeroSlope("(0, 0) is not a slope")
    g = math.gcd(p, q)
    if g != 1:
        raise NonPrimitive(p, q, g)
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return Slope(p, q)


def reduce_slope(p: int, q: int) -> tuple[Slope, int]:
    """Divide out the common factor; return the slope and the multiplicity removed."""
    if (p, q) == (0, 0):
        raise ZeroSlope("(0, 0) is not a slope")
    g = math.gcd(p, q)
    return normalize_slope(p // g, q // g), g


def slope_vector(shape: CuspShape, s: Slope) -> Vec2:
    return shape.meridian.scale(s.p) + shape.longitude.scale(s.q)


def slope_length_squared(shape: CuspShape, s: Slope) -> Scalar:
    """Squared length; exact whenever the shape is."""
    return slope_vector(shape, s).norm_squared()


def slope_length(shape: CuspShape, s: Slope) -> Scalar:
    """Length of the geodesic representative of ``s``."""
    return sqrt(slope_length_squared(shape, s))


def slope_distance(s1: Slope, s2: Slope) -> int:
    """Minimal geometric intersection number, ``|p1*q2 - p2*q1|``."""
    return abs(s1.p * s2.q - s2.p * s1.q)


def cusp_area(shape: CuspShape) -> Scalar:
    """Area of the torus, ``|det(meridian, longitude)|``."""
    det = shape.meridian.cross(shape.longitude)
    if det.contains_zero():
        raise DegenerateLattice("determinant enclosure contains zero")
    return abs(det)


def triangle_area_identity(shape: CuspShape, s1: Slope, s2: Slope) -> tuple[Scalar, Scalar]:
    """Area of the triangle on ``v1, v2`` computed two ways.

    The parallelogram on the two slope vectors covers the torus
    ``slope_distance(s1, s2)`` times, so both components agree.
    """
    if s1 == s2:
        raise ValueError("the two slopes must differ")
    direct = abs(slope_vector(shape, s1).cross(slope_vector(shape, s2))) * Fraction(1, 2)
    via_distance = cusp_area(shape) * Fraction(slope_distance(s1, s2), 2)
    return direct, via_distance


def _isqrt_floor(x: Fraction) -> int:
    """floor(sqrt(x)) for a non-negative rational."""
    return math.isqrt(math.floor(x)) if x > 0 else 0


def coefficient_box(shape: CuspShape, cutoff_squared: Number) -> tuple[int, int]:
    """Bounds ``(P, Q)`` with ``|p| <= P`` and ``|q| <= Q`` for every lattice
    vector ``p*m + q*l`` of squared length at most ``cutoff_squared``.

    From ``q * det(l, m) = det(v, m)`` we get ``|q| * area <= |v| * |m|``,
    and symmetrically ``|p| * area <= |v| * |l|``.
    """
    c2 = as_scalar(cutoff_squared)
    area = cusp_area(shape)
    a2_lo = area.lo * area.lo
    m2 = shape.meridian.norm_squared()
    l2 = shape.longitude.norm_squared()
    p_bound = _isqrt_floor(c2.hi * l2.hi / a2_lo)
    q_bound = _isqrt_floor(c2.hi * m2.hi / a2_lo)
    return p_bound, q_bound


def _scan(shape: CuspShape, cutoff_squared: Scalar, q_values=None) -> list[SlopeReport]:
    p_bound, q_bound = coefficient_box(shape, cutoff_squared)
    qs = range(0, q_bound + 1) if q_values is None else [q for q in q_values if q <= q_bound]
    m, l = shape.meridian, shape.longitude
    mm, ml, ll = m.norm_squared(), m.dot(l), l.norm_squared()
    found = []
    for q in qs:
        ps = [1] if q == 0 else range(-p_bound, p_bound + 1)
        for p in ps:
            if math.gcd(p, q) != 1:
                continue
            n2 = mm * (p * p) + ml * (2 * p * q) + ll * (q * q)
            if n2.lo > cutoff_squared.hi:
                continue
            uncertain = n2.hi > cutoff_squared.lo
            found.append(SlopeReport(Slope(p, q), sqrt(n2), n2, uncertain))
    found.sort(key=lambda r: (r.length_squared.lo, r.length_squared.hi, r.slope.p, r.slope.q))
    return found


def enumerate_short_slopes(shape: CuspShape, cutoff: Number = DEFAULT_CUTOFF) -> list[SlopeReport]:
    """All slopes of length at most ``cutoff``, sorted by (length, p, q).

    Slopes whose length enclosure straddles the cutoff are kept and flagged
    ``boundary_uncertain``.  Length exactly equal to the cutoff counts as short.
    """
    c = as_scalar(cutoff)
    if c.hi <= 0:
        raise ValueError("cutoff must be positive")
    return _scan(shape, c.clamp_below(0).square())


def integral_slope_reports(shape: CuspShape, cutoff: Number = DEFAULT_CUTOFF) -> list[SlopeReport]:
    """Short slopes of the form ``n/1``, sorted by ``n``."""
    c = as_scalar(cutoff)
    found = _scan(shape, c.clamp_below(0).square(), q_values=[1])
    return sorted(found, key=lambda r: r.slope.p)


def shortest_slope(shape: CuspShape) -> SlopeReport:
    """A slope of minimal length.

    The reported length encloses the true minimum over all slopes.  Among
    possible minimizers the smallest ``(|p|, |q|, p, q)`` wins; when interval
    width leaves the minimizer ambiguous, ``boundary_uncertain`` is set.
    """
    cusp_area(shape)  # raises on degenerate input
    # the meridian and longitude are both candidates, so the minimum is no longer
    cutoff2 = min((shape.meridian.norm_squared(), shape.longitude.norm_squared()),
                  key=lambda s: s.hi)
    candidates = _scan(shape, cutoff2)
    best_hi = min(r.length_squared.hi for r in candidates)
    possible = [r for r in candidates if r.length_squared.lo <= best_hi]
    best_lo = min(r.length_squared.lo for r in possible)
    choice = min(possible, key=lambda r: (abs(r.slope.p), abs(r.slope.q), r.slope.p, r.slope.q))
    enclosure = Scalar(best_lo, best_hi)
    ambiguous = any(r.length_squared != choice.length_squared for r in possible)
    return SlopeReport(choice.slope, sqrt(enclosure), enclosure, ambiguous)


def is_short(shape: CuspShape, s: Slope, cutoff: Number = DEFAULT_CUTOFF) -> bool:
    """Certified ``length(s) <= cutoff``."""
    return decide_le(slope_length_squared(shape, s), as_scalar(cutoff).square())
