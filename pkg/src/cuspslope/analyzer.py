"""Per-shape checks of the integral short-slope bound.

Everything here works at the level of the cusp lattice: a report lists the
integral slopes ``n/1`` of length at most 6 (candidates for non-hyperbolike
filling), never a claim that any particular filling is exceptional.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .errors import SamplerExhausted
from .lattice import (
    DEFAULT_CUTOFF,
    CuspShape,
    Slope,
    Vec2,
    cusp_area,
    enumerate_short_slopes,
    integral_slope_reports,
    shortest_slope,
    slope_distance,
    slope_length,
    slope_length_squared,
)
from .scalar import Number, Scalar, as_scalar, sqrt

__all__ = [
    "FIGURE_EIGHT_PROVENANCE",
    "Fig8Demo",
    "SamplerConfig",
    "VerifyReport",
    "figure8_demo",
    "figure8_shape",
    "integral_short_slopes",
    "sample_constrained_shapes",
    "verify_many",
    "verify_shape",
]

MIN_AREA = Fraction(67, 20)
MAX_DISTANCE = 8
MAX_COUNT = 9

FIGURE_EIGHT_PROVENANCE = {
    "source": "external: maximal cusp of the figure-eight complement from its "
              "two regular ideal tetrahedra",
    "meridian": "(1, 0)",
    "longitude": "(0, 2*sqrt(3))",
    "expected_integral_short_slopes": list(range(-4, 5)),
}


def figure8_shape() -> CuspShape:
    """Maximal cusp of the figure-eight knot: meridian 1, longitude ``2*sqrt(3)*i``.

    The longitude height is an enclosure at the working precision.
    """
    return CuspShape(Vec2(1, 0), Vec2(0, sqrt(12)), "fig8")


@dataclass(frozen=True)
class VerifyReport:
    shape_name: str
    satisfies_min_slope: bool
    satisfies_min_area: bool
    integral_short_slopes: tuple[tuple[int, Scalar], ...]
    meridian_short: bool
    max_pairwise_distance: int
    count: int
    bound_holds: bool
    uncertain: bool
    shortest_length: Scalar = field(default=None, compare=False)
    area: Scalar = field(default=None, compare=False)

    @property
    def hypotheses_hold(self) -> bool:
        return self.satisfies_min_slope and self.satisfies_min_area


def integral_short_slopes(shape: CuspShape, cutoff: Number = DEFAULT_CUTOFF) -> list[tuple[int, Scalar]]:
    """All ``n`` with ``|n*meridian + longitude| <= cutoff``, ascending."""
    return [(r.slope.p, r.length) for r in integral_slope_reports(shape, cutoff)]


def _at_least(value: Scalar, threshold: Scalar) -> tuple[bool, bool]:
    """(certainly >= threshold, undecided)."""
    if value.lo >= threshold.hi:
        return True, False
    if value.hi < threshold.lo:
        return False, False
    return False, True


def verify_shape(shape: CuspShape, cutoff: Number = DEFAULT_CUTOFF) -> VerifyReport:
    """Apply both hypothesis filters and the distance/count bound to one shape.

    A hypothesis flag is True only when it holds certifiably; any comparison
    that the enclosures cannot decide sets ``uncertain``.
    """
    shortest = shortest_slope(shape)
    area = cusp_area(shape)
    # length >= 2**(1/4)  <=>  length**2 >= sqrt(2)
    min_slope, u1 = _at_least(shortest.length_squared, sqrt(2))
    min_area, u2 = _at_least(area, Scalar.exact(MIN_AREA))

    reports = integral_slope_reports(shape, cutoff)
    ns = [r.slope.p for r in reports]
    max_dist = max(ns) - min(ns) if len(ns) >= 2 else 0

    cutoff_sq = as_scalar(cutoff).square()
    mer_sq = slope_length_squared(shape, Slope(1, 0))
    meridian_short = mer_sq.hi <= cutoff_sq.lo
    u3 = not meridian_short and mer_sq.lo <= cutoff_sq.hi

    uncertain = u1 or u2 or u3 or shortest.boundary_uncertain or any(r.boundary_uncertain for r in reports)
    return VerifyReport(
        shape_name=shape.name or "",
        satisfies_min_slope=min_slope,
        satisfies_min_area=min_area,
        integral_short_slopes=tuple((r.slope.p, r.length) for r in reports),
        meridian_short=meridian_short,
        max_pairwise_distance=max_dist,
        count=len(ns),
        bound_holds=max_dist <= MAX_DISTANCE and len(ns) <= MAX_COUNT,
        uncertain=uncertain,
        shortest_length=shortest.length,
        area=area,
    )


@dataclass(frozen=True)
class SamplerConfig:
    """Rejection-sampler settings.

    Ranges are closed rational intervals; the meridian range must lie inside
    ``[2**(1/4), 6]`` and the area range must start at or above 67/20.
    """

    seed: int = 42
    count: int = 1000
    meridian_length_range: tuple[Fraction, Fraction] = (Fraction(119, 100), Fraction(6))
    area_range: tuple[Fraction, Fraction] = (MIN_AREA, Fraction(12))
    resolution_bits: int = 20
    max_attempts_per_shape: int = 200

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be positive")
        m_lo, m_hi = (Fraction(x) for x in self.meridian_length_range)
        a_lo, a_hi = (Fraction(x) for x in self.area_range)
        if not m_lo <= m_hi or not a_lo <= a_hi:
            raise ValueError("ranges must be nonempty")
        # 2**(1/4) <= m_lo  <=>  m_lo**4 >= 2
        if m_lo <= 0 or m_lo ** 4 < 2 or m_hi > 6:
            raise ValueError("meridian_length_range must lie inside [2**(1/4), 6]")
        if a_lo < MIN_AREA:
            raise ValueError("area_range must start at or above 67/20")


def _uniform_grid(rng: random.Random, lo: Fraction, hi: Fraction, bits: int) -> Fraction:
    """Uniform draw from the grid ``lo + k*(hi - lo)/2**bits``."""
    steps = 1 << bits
    return lo + (hi - lo) * Fraction(rng.randrange(steps + 1), steps)


def sample_constrained_shapes(config: SamplerConfig) -> Iterator[CuspShape]:
    """Deterministic stream of exact shapes satisfying both hypotheses.

    Meridian ``(m, 0)`` with ``m`` on a dyadic grid in the configured range,
    longitude ``(x, area/m)`` with ``x`` in ``[-m/2, m/2]`` and ``area`` on a
    grid in the area range; draws whose shortest slope falls below
    ``2**(1/4)`` are rejected.
    """
    rng = random.Random(config.seed)
    m_lo, m_hi = (Fraction(x) for x in config.meridian_length_range)
    a_lo, a_hi = (Fraction(x) for x in config.area_range)
    bits = config.resolution_bits
    root2 = sqrt(2)
    budget = config.max_attempts_per_shape * config.count
    attempts = 0
    emitted = 0
    while emitted < config.count:
        if attempts >= budget:
            raise SamplerExhausted(
                f"{attempts} draws produced only {emitted} of {config.count} shapes")
        attempts += 1
        m = _uniform_grid(rng, m_lo, m_hi, bits)
        x = _uniform_grid(rng, -m / 2, m / 2, bits)
        area = _uniform_grid(rng, a_lo, a_hi, bits)
        shape = CuspShape.from_components(m, 0, x, area / m, name=f"sample-{config.seed}-{emitted}")
        if shortest_slope(shape).length_squared.lo < root2.hi:
            continue
        emitted += 1
        yield shape


@dataclass(frozen=True)
class Fig8Demo:
    report: VerifyReport
    short_slopes: tuple[str, ...]
    extreme_distance: int
    excluded_length: Scalar
    checks: tuple[tuple[str, bool], ...]
    narrative: str

    @property
    def ok(self) -> bool:
        return all(ok for _, ok in self.checks)


def figure8_demo() -> Fig8Demo:
    """Reproduce the sharpness example: nine integral candidates, extremes at distance 8."""
    shape = figure8_shape()
    report = verify_shape(shape)
    short = enumerate_short_slopes(shape)
    ns = [n for n, _ in report.integral_short_slopes]
    extreme = slope_distance(Slope(-4, 1), Slope(4, 1))
    five = slope_length(shape, Slope(5, 1))
    checks = (
        ("integral short slopes are -4..4", ns == FIGURE_EIGHT_PROVENANCE["expected_integral_short_slopes"]),
        ("count is 9", report.count == 9),
        ("max pairwise distance is 8", report.max_pairwise_distance == 8),
        ("distance(-4/1, 4/1) is 8", extreme == 8),
        ("meridian 1/0 is short", report.meridian_short),
        ("ten short slopes including 1/0", len(short) == 10 and short[0].slope == Slope(1, 0)),
        ("slope 5/1 is longer than 6", five.lo > 6),
        ("meridian length is 1", slope_length(shape, Slope(1, 0)) == Scalar.exact(1)),
        ("area is at least 3.35", report.satisfies_min_area),
        ("shortest slope is below 2**(1/4)", not report.satisfies_min_slope),
    )
    names = ", ".join(str(r.slope) for r in sorted(short, key=lambda r: (r.slope.q, r.slope.p)))
    narrative = "\n".join([
        "figure-eight knot, maximal cusp: meridian (1, 0), longitude (0, 2*sqrt(3))",
        f"area {report.area} (>= 3.35), meridian length 1 (< 2**(1/4))",
        f"slopes of length <= 6: {names}",
        f"integral candidates: {ns} ({report.count} of them)",
        f"distance(-4/1, 4/1) = {extreme}",
        f"slope 5/1 has length {five} > 6",
        "the bound of distance 8 and nine integral slopes is attained",
    ])
    return Fig8Demo(report, tuple(str(r.slope) for r in short), extreme, five, checks, narrative)


def verify_many(shapes, cutoff: Number = DEFAULT_CUTOFF) -> list[VerifyReport]:
    """verify_shape over an iterable, preserving order."""
    return [verify_shape(s, cutoff) for s in shapes]

