"""Interval certification of the distance bound for integral short slopes.

Two integral slopes at distance ``delta`` give a triangle ``OAB`` in the
cusp lattice with

* ``|OA|, |OB| <= 6``                  (both slopes short),
* ``|AB| >= 2**(1/4) * delta``         (AB is delta times the meridian),
* ``area(OAB) > (67/20) * delta / 2``  (delta copies of the cusp torus).

Writing ``theta`` for the angle at ``O``, the cosine law and the area formula
force ``36*|cos(theta)| > delta**2/sqrt(2) - 36`` and ``36*sin(theta) >
(67/20)*delta``.  Squaring and adding gives a quartic in ``delta`` that fails
for every ``delta >= 9``.  This module evaluates each of those steps with
rational interval arithmetic and, for ``delta <= 8``, exhibits an explicit
triangle satisfying the relaxed constraints.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, TypeVar

import numpy as np

from .errors import IndeterminateEnclosure
from .scalar import (
    DEFAULT_BITS,
    MAX_BITS,
    Scalar,
    as_scalar,
    cos,
    fourth_root,
    get_precision,
    pi,
    sin,
    sqrt,
    working_precision,
)

__all__ = [
    "CertReport",
    "Check",
    "Constraints",
    "QuarticBound",
    "TraceStep",
    "TriangleWitness",
    "Verdict",
    "certify_delta",
    "certify_theorem",
    "check_witness",
    "combined_feasibility",
    "combined_lhs",
    "delta_max",
    "find_witness",
    "min_area",
    "min_slope_length",
    "obtuse_step",
    "quartic_bound",
    "required_cos_lower",
    "required_sin_lower",
    "with_refinement",
]

SIDE_MAX = Fraction(6)
MIN_AREA = Fraction(67, 20)
DEFAULT_MAX_DELTA = 12

GRID_SIDES = 64
GRID_ANGLES = 256
EVAL_BUDGET = 10**6
# rational lower bound for pi; keeps every grid angle strictly inside (0, pi)
_PI_BELOW = Fraction(314159265358979, 10**14)


def min_slope_length() -> Scalar:
    """Enclosure of 2**(1/4)."""
    return fourth_root(2)


def min_area() -> Scalar:
    return Scalar.exact(MIN_AREA)


@dataclass(frozen=True)
class Constraints:
    delta: int
    side_max: Scalar = field(default_factory=lambda: Scalar.exact(SIDE_MAX))
    min_slope_length: Scalar = field(default_factory=min_slope_length)
    min_area: Scalar = field(default_factory=min_area)

    def __post_init__(self):
        if self.delta < 1:
            raise ValueError("delta must be a positive integer")

    @property
    def min_side_squared(self) -> Scalar:
        """Lower bound for ``|AB|**2``: ``sqrt(2) * delta**2``."""
        return sqrt(2) * (self.delta * self.delta)

    @property
    def min_triangle_area(self) -> Scalar:
        return self.min_area * Fraction(self.delta, 2)


class Verdict(str, enum.Enum):
    INFEASIBLE = "Infeasible"
    WITNESS_FOUND = "WitnessFound"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class TraceStep:
    """One interval comparison ``value <relation> threshold``."""

    name: str
    value: Scalar
    relation: str
    threshold: Scalar
    passed: bool


@dataclass(frozen=True)
class Check:
    passed: bool
    step: TraceStep

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class TriangleWitness:
    a: Scalar
    b: Scalar
    theta: Scalar

    def side_c_squared(self) -> Scalar:
        return self.a.square() + self.b.square() - self.a * self.b * cos(self.theta) * 2

    def area(self) -> Scalar:
        return self.a * self.b * sin(self.theta) * Fraction(1, 2)


@dataclass(frozen=True)
class CertReport:
    delta: int
    verdict: Verdict
    trace: tuple[TraceStep, ...]
    witness: Optional[TriangleWitness] = None
    precision: int = DEFAULT_BITS


@dataclass(frozen=True)
class QuarticBound:
    """``delta**2 < 2*(36*sqrt(2) - (67/20)**2)`` and its square root."""

    delta_squared: Scalar
    delta: Scalar
    floor: int


def _strict(name, value, relation, threshold) -> TraceStep:
    """Evaluate ``value < threshold`` (or ``>``) with strict separation."""
    value, threshold = as_scalar(value), as_scalar(threshold)
    if relation == "<":
        if value.hi < threshold.lo:
            ok = True
        elif value.lo >= threshold.hi:
            ok = False
        else:
            raise IndeterminateEnclosure(f"{name}: {value!r} vs {threshold!r}")
    elif relation == ">":
        if value.lo > threshold.hi:
            ok = True
        elif value.hi <= threshold.lo:
            ok = False
        else:
            raise IndeterminateEnclosure(f"{name}: {value!r} vs {threshold!r}")
    else:
        raise ValueError(relation)
    return TraceStep(name, value, relation, threshold, ok)


def required_sin_lower(delta: int) -> Scalar:
    """``sin(theta)`` must exceed ``(67/20) * delta / 36``."""
    if delta < 0:
        raise ValueError("delta must be non-negative")
    return Scalar.exact(MIN_AREA * delta / 36)


def required_cos_lower(delta: int) -> Scalar:
    """``|cos(theta)|`` must exceed ``max(0, (delta**2/sqrt(2) - 36) / 36)``."""
    if delta < 0:
        raise ValueError("delta must be non-negative")
    raw = (sqrt(2) * Fraction(delta * delta, 2) - 36) / 36
    return raw.clamp_below(0)


def obtuse_step(delta: int) -> Check:
    """Whether ``6**2 + 6**2 = 72 < sqrt(2) * delta**2``.

    When it holds, ``|OA|**2 + |OB|**2 < |AB|**2`` and the angle at ``O`` is
    obtuse.  The raw comparison is reported for every delta.
    """
    step = _strict("obtuse: 72 < sqrt(2)*delta^2", Scalar.exact(2 * SIDE_MAX ** 2), "<",
                   Constraints(delta).min_side_squared)
    return Check(step.passed, step)


def combined_lhs(delta: int) -> Scalar:
    """``(36 * cos_req)**2 + (36 * sin_req)**2``; must stay below ``36**2``."""
    return (required_cos_lower(delta) * 36).square() + (required_sin_lower(delta) * 36).square()


def combined_feasibility(delta: int) -> Check:
    """Necessary condition from ``sin**2 + cos**2 = 1``.

    Passes when the left side is certainly below 1296, fails when its lower
    bound reaches 1296, and raises :class:`IndeterminateEnclosure` in between.
    """
    lhs = combined_lhs(delta)
    limit = Scalar.exact(1296)
    if lhs.hi < limit.lo:
        passed = True
    elif lhs.lo >= limit.hi:
        passed = False
    else:
        raise IndeterminateEnclosure(f"combined inequality straddles 1296 at delta={delta}: {lhs!r}")
    return Check(passed, TraceStep("combined: (36c)^2 + (36s)^2 < 1296", lhs, "<", limit, passed))


def quartic_bound() -> QuarticBound:
    """Enclosure of ``sqrt(2*(36*sqrt(2) - 4489/400))`` and its integer floor."""
    d2 = (sqrt(2) * 36 - MIN_AREA ** 2) * 2
    d = sqrt(d2)
    fl = math.floor(d.lo)
    if math.floor(d.hi) != fl or d.hi == fl + 1:
        raise IndeterminateEnclosure(f"floor of {d!r} is not determined")
    return QuarticBound(d2, d, fl)


def check_witness(witness: TriangleWitness, delta: int) -> list[TraceStep]:
    """Re-check a witness against every constraint with strict separation.

    Steps that cannot be decided at the working precision are reported as
    failed rather than raised: a witness either certifies or it does not.
    """
    cons = Constraints(delta)
    w = witness
    out = [
        # side bounds are not strict: length exactly 6 is still short
        TraceStep("a <= 6", w.a, "<=", cons.side_max, w.a.hi <= cons.side_max.lo),
        TraceStep("b <= 6", w.b, "<=", cons.side_max, w.b.hi <= cons.side_max.lo),
    ]
    checks = [
        ("a > 0", w.a, ">", Scalar.exact(0)),
        ("b > 0", w.b, ">", Scalar.exact(0)),
        ("theta > 0", w.theta, ">", Scalar.exact(0)),
        ("theta < pi", w.theta, "<", pi()),
        ("c^2 > sqrt(2)*delta^2", w.side_c_squared(), ">", cons.min_side_squared),
        ("area > (67/20)*delta/2", w.area(), ">", cons.min_triangle_area),
    ]
    for name, value, rel, thr in checks:
        try:
            out.append(_strict(name, value, rel, thr))
        except IndeterminateEnclosure:
            out.append(TraceStep(name, value, rel, thr, False))
    return out


def _float_margins(a, b, t, delta: int) -> np.ndarray:
    """Normalised slack of both geometric constraints; positive means satisfied."""
    c2 = a * a + b * b - 2 * a * b * np.cos(t)
    area = 0.5 * a * b * np.sin(t)
    need_c2 = math.sqrt(2) * delta * delta
    need_area = float(MIN_AREA) * delta / 2
    return np.minimum((c2 - need_c2) / need_c2, (area - need_area) / need_area)


def _grid_axes():
    sides = [SIDE_MAX * (GRID_SIDES - i) / GRID_SIDES for i in range(GRID_SIDES)]
    angles = [_PI_BELOW * (2 * k + 1) / (2 * GRID_ANGLES) for k in range(GRID_ANGLES)]
    return sides, angles


def _try(a: Fraction, b: Fraction, t: Fraction, delta: int) -> Optional[TriangleWitness]:
    w = TriangleWitness(Scalar.exact(a), Scalar.exact(b), Scalar.exact(t))
    if all(step.passed for step in check_witness(w, delta)):
        return w
    return None


def find_witness(delta: int, budget: int = EVAL_BUDGET) -> Optional[TriangleWitness]:
    """Search ``(a, b, theta)`` for a triangle satisfying the relaxed constraints.

    Sides run down from 6 in 64 steps and angles over 256 cell centres in
    ``(0, pi)``; the scan is row-major in ``(a, b, theta)`` and the first
    cell that passes the rigorous check is returned.  A float screen only
    decides which cells are worth the rigorous check.  When no grid cell
    qualifies, the best cell is refined by bisection until the evaluation
    budget runs out.  Returns None when nothing is found, which is immediate
    whenever the combined necessary condition already fails.
    """
    if delta < 1:
        raise ValueError("delta must be a positive integer")
    if not combined_feasibility(delta):
        return None

    sides, angles = _grid_axes()
    fa = np.array([float(s) for s in sides])
    ft = np.array([float(t) for t in angles])
    A, B, T = np.meshgrid(fa, fa, ft, indexing="ij")
    margins = _float_margins(A, B, T, delta)
    used = margins.size

    for flat in np.flatnonzero((margins > 1e-9).ravel()):
        i, j, k = np.unravel_index(flat, margins.shape)
        w = _try(sides[i], sides[j], angles[k], delta)
        used += 1
        if w is not None:
            return w
        if used >= budget:
            return None

    # bisection refinement around the best grid cell
    i, j, k = np.unravel_index(int(np.argmax(margins)), margins.shape)
    half_side = SIDE_MAX / (2 * GRID_SIDES)
    half_angle = _PI_BELOW / (2 * GRID_ANGLES)
    centre = [sides[i], sides[j], angles[k]]
    radius = [half_side, half_side, half_angle]
    upper = [SIDE_MAX, SIDE_MAX, _PI_BELOW]
    while used < budget and radius[2] > Fraction(1, 2 ** 60):
        radius = [r / 2 for r in radius]
        best, best_margin = None, -math.inf
        for da in (-1, 1):
            for db in (-1, 1):
                for dt in (-1, 1):
                    cand = [min(max(c + d * r, r), u)
                            for c, d, r, u in zip(centre, (da, db, dt), radius, upper)]
                    m = float(_float_margins(*(np.float64(float(x)) for x in cand), delta))
                    used += 1
                    if m > best_margin:
                        best, best_margin = cand, m
        centre = best
        if best_margin > 0:
            w = _try(*centre, delta)
            used += 1
            if w is not None:
                return w
    return None


def certify_delta(delta: int) -> CertReport:
    """Decide whether two integral short slopes can sit at distance ``delta``.

    Infeasible when the combined condition (and, independently, the quartic
    bound) rules ``delta`` out; WitnessFound when an explicit triangle
    satisfies the relaxed system; Indeterminate when neither happens.
    """
    trace = [obtuse_step(delta).step]
    sin_req = required_sin_lower(delta)
    trace.append(_strict("sin requirement: (67/20)*delta/36 < 1", sin_req, "<", Scalar.exact(1)))
    trace.append(TraceStep("cos requirement: max(0, (delta^2/sqrt(2) - 36)/36)",
                           required_cos_lower(delta), "<", Scalar.exact(1),
                           required_cos_lower(delta).hi < 1))
    combined = combined_feasibility(delta)
    trace.append(combined.step)
    quartic = quartic_bound()
    trace.append(_strict("quartic: delta^2 < 2*(36*sqrt(2) - 11.2225)", Scalar.exact(delta * delta),
                         "<", quartic.delta_squared))
    bits = get_precision()

    if not combined.passed:
        return CertReport(delta, Verdict.INFEASIBLE, tuple(trace), None, bits)
    witness = find_witness(delta)
    if witness is None:
        return CertReport(delta, Verdict.INDETERMINATE, tuple(trace), None, bits)
    trace.extend(check_witness(witness, delta))
    return CertReport(delta, Verdict.WITNESS_FOUND, tuple(trace), witness, bits)


T = TypeVar("T")


def with_refinement(fn: Callable[[], T], start_bits: int | None = None,
                    max_bits: int = MAX_BITS) -> T:
    """Run ``fn`` and double the precision on IndeterminateEnclosure."""
    bits = start_bits or get_precision()
    while True:
        try:
            with working_precision(bits):
                return fn()
        except IndeterminateEnclosure:
            if bits * 2 > max_bits:
                raise
            bits *= 2


def certify_theorem(max_delta: int = DEFAULT_MAX_DELTA, bits: int | None = None) -> list[CertReport]:
    """Certify every delta in ``1..max_delta``."""
    return [with_refinement(lambda d=d: certify_delta(d), bits) for d in range(1, max_delta + 1)]


def delta_max(reports: list[CertReport]) -> int:
    """Largest delta with a witness, checked to lie below the first infeasible one."""
    found = [r.delta for r in reports if r.verdict is Verdict.WITNESS_FOUND]
    blocked = [r.delta for r in reports if r.verdict is Verdict.INFEASIBLE]
    if any(r.verdict is Verdict.INDETERMINATE for r in reports):
        raise IndeterminateEnclosure("some delta could be neither certified nor excluded")
    best = max(found, default=0)
    if blocked and min(blocked) <= best:
        raise AssertionError("an infeasible delta lies below a witnessed one")
    return best
