import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuspslope.analyzer import figure8_shape
from cuspslope.errors import DegenerateLattice, NonPrimitive, ZeroSlope
from cuspslope.lattice import (
    CuspShape,
    Slope,
    Vec2,
    coefficient_box,
    cusp_area,
    enumerate_short_slopes,
    integral_slope_reports,
    normalize_slope,
    reduce_slope,
    shortest_slope,
    slope_distance,
    slope_length,
    slope_length_squared,
    slope_vector,
    triangle_area_identity,
)
from cuspslope.scalar import Scalar

from .strategies import primitive_pairs, rational_shapes
from .oracles import brute_intersections, brute_short_slopes

R = Fraction


def shape(mx, my, lx, ly):
    return CuspShape.from_components(mx, my, lx, ly)


# -- normalize_slope ---------------------------------------------------------

@pytest.mark.parametrize("pq, expected", [((-3, -1), (3, 1)), ((1, 0), (1, 0)), ((-1, 0), (1, 0)),
                                          ((5, -2), (-5, 2)), ((0, -1), (0, 1))])
def test_normalize(pq, expected):
    s = normalize_slope(*pq)
    assert (s.p, s.q) == expected


def test_normalize_errors():
    with pytest.raises(ZeroSlope):
        normalize_slope(0, 0)
    with pytest.raises(NonPrimitive) as info:
        normalize_slope(2, 4)
    assert info.value.gcd == 2


def test_reduce_slope_reports_multiplicity():
    assert reduce_slope(-6, -2) == (Slope(3, 1), 2)


def test_slope_rejects_noncanonical_sign():
    with pytest.raises(ValueError):
        Slope(-3, -1)


# -- vectors, lengths, areas -------------------------------------------------

def test_slope_vector_examples(rect4):
    assert slope_vector(rect4, Slope(1, 1)) == Vec2(1, 4)
    assert slope_vector(rect4, Slope(1, 0)) == Vec2(1, 0)
    assert slope_vector(shape(2, 1, 1, 3), Slope(3, 1)) == Vec2(7, 6)


def test_slope_length_examples(rect4):
    length = slope_length(rect4, Slope(1, 1))
    assert slope_length_squared(rect4, Slope(1, 1)) == Scalar.exact(17)
    assert mpmath.mpf(length.lo.numerator) / length.lo.denominator <= mpmath.sqrt(17)
    assert abs(float(length) - 4.1231) < 1e-4
    assert slope_length(rect4, Slope(1, 0)) == Scalar.exact(1)


def test_figure_eight_length_of_four():
    f8 = figure8_shape()
    length = slope_length(f8, Slope(4, 1))
    assert mpmath.mpf(length.lo.numerator) / length.lo.denominator <= mpmath.sqrt(28)
    assert mpmath.sqrt(28) <= mpmath.mpf(length.hi.numerator) / length.hi.denominator
    assert abs(float(length) - 5.2915) < 1e-4
    assert slope_length_squared(f8, Slope(4, 1)).contains(28)


def test_distance_examples():
    assert slope_distance(Slope(-4, 1), Slope(4, 1)) == 8
    assert slope_distance(Slope(2, 3), Slope(2, 3)) == 0
    for n1 in range(-5, 6):
        for n2 in range(-5, 6):
            assert slope_distance(Slope(n1, 1), Slope(n2, 1)) == abs(n1 - n2)


def test_cusp_area_examples(rect4):
    assert cusp_area(rect4) == Scalar.exact(4)
    assert cusp_area(shape(2, 1, 1, 3)) == Scalar.exact(5)
    a = cusp_area(figure8_shape())
    assert a.lo > R(335, 100)
    assert abs(float(a) - 2 * math.sqrt(3)) < 1e-12


def test_degenerate_lattice():
    with pytest.raises(DegenerateLattice):
        shape(1, 0, 2, 0)
    with pytest.raises(DegenerateLattice):
        CuspShape(Vec2(1, 0), Vec2(Scalar.interval(0, 1), Scalar.interval(-R(1, 10), R(1, 10))))


def test_triangle_area_examples(rect4):
    assert triangle_area_identity(rect4, Slope(0, 1), Slope(1, 1)) == (Scalar.exact(2), Scalar.exact(2))
    assert triangle_area_identity(rect4, Slope(-1, 1), Slope(1, 1)) == (Scalar.exact(4), Scalar.exact(4))
    with pytest.raises(ValueError):
        triangle_area_identity(rect4, Slope(1, 1), Slope(1, 1))


# -- shortest slope and enumeration -----------------------------------------

def test_shortest_examples(rect4):
    r = shortest_slope(rect4)
    assert r.slope == Slope(1, 0) and r.length == Scalar.exact(1)
    r = shortest_slope(shape(2, 0, 1, 2))
    assert r.slope == Slope(1, 0) and r.length == Scalar.exact(2)
    r = shortest_slope(figure8_shape())
    assert r.slope == Slope(1, 0) and r.length == Scalar.exact(1)


def test_shortest_tie_break():
    # square lattice: (1,0) and (0,1) tie; (|p|, |q|) = (0, 1) sorts first
    r = shortest_slope(shape(0, 1, 1, 0))
    assert r.slope == Slope(0, 1)
    assert not r.boundary_uncertain
    # (0,1) and (-1,1) tie at squared length 2
    r = shortest_slope(shape(2, 0, 1, 1))
    assert r.length_squared == Scalar.exact(2)
    assert r.slope == Slope(0, 1)


def test_enumerate_rect4(rect4):
    got = enumerate_short_slopes(rect4, 6)
    pairs = [(r.slope.p, r.slope.q) for r in got]
    assert len(pairs) == 10
    assert set(pairs) == {(1, 0), (0, 1)} | {(n, 1) for n in (-4, -3, -2, -1, 1, 2, 3, 4)}
    assert pairs == [(p, q) for p, q, _ in brute_short_slopes(rect4, 6)]
    assert all(not r.boundary_uncertain for r in got)


def test_enumerate_figure_eight():
    got = enumerate_short_slopes(figure8_shape())
    assert {(r.slope.p, r.slope.q) for r in got} == {(1, 0)} | {(n, 1) for n in range(-4, 5)}


def test_enumerate_below_shortest_is_empty(rect4):
    assert enumerate_short_slopes(rect4, R(1, 2)) == []


def test_enumerate_includes_boundary_length():
    # slope (0,1) has length exactly 6
    got = enumerate_short_slopes(shape(1, 0, 0, 6), 6)
    assert Slope(0, 1) in [r.slope for r in got]


def test_boundary_uncertain_flag():
    # longitude height straddles 6
    s = CuspShape(Vec2(1, 0), Vec2(0, Scalar.interval(R(599, 100), R(601, 100))))
    got = {r.slope: r for r in enumerate_short_slopes(s, 6)}
    assert got[Slope(0, 1)].boundary_uncertain
    assert not got[Slope(1, 0)].boundary_uncertain


@settings(max_examples=60, deadline=None)
@given(rational_shapes(), st.fractions(min_value=R(1, 2), max_value=7, max_denominator=20))
def test_enumeration_matches_brute_force(s, cutoff):
    got = [(r.slope.p, r.slope.q, r.length_squared.value) for r in enumerate_short_slopes(s, cutoff)]
    assert got == brute_short_slopes(s, cutoff)


@settings(max_examples=60, deadline=None)
@given(rational_shapes())
def test_coefficient_box_is_sound(s):
    P, Q = coefficient_box(s, 36)
    for p, q, _ in brute_short_slopes(s, 6):
        assert abs(p) <= P and abs(q) <= Q


@settings(max_examples=60, deadline=None)
@given(rational_shapes())
def test_shortest_matches_brute_force(s):
    r = shortest_slope(s)
    # any cutoff at least the meridian length sees the minimiser
    cutoff = math.ceil(math.sqrt(float(slope_length_squared(s, Slope(1, 0)).value))) + 1
    brute = brute_short_slopes(s, cutoff)
    best = min(d2 for _, _, d2 in brute)
    ties = [(p, q) for p, q, d2 in brute if d2 == best]
    expected = min(ties, key=lambda t: (abs(t[0]), abs(t[1]), t[0], t[1]))
    assert r.length_squared == Scalar.exact(best)
    assert (r.slope.p, r.slope.q) == expected


# -- invariants ------------------------------------------------------------------

@given(primitive_pairs(), primitive_pairs())
def test_distance_symmetry(a, b):
    s1, s2 = normalize_slope(*a), normalize_slope(*b)
    assert slope_distance(s1, s2) == slope_distance(s2, s1)
    assert slope_distance(s1, s1) == 0
    assert (slope_distance(s1, s2) == 0) == (s1 == s2)


@settings(deadline=None)
@given(rational_shapes(), primitive_pairs())
def test_sign_invariance(s, pq):
    p, q = pq
    assert slope_length(s, normalize_slope(-p, -q)) == slope_length(s, normalize_slope(p, q))


@settings(max_examples=80, deadline=None)
@given(rational_shapes(), primitive_pairs(), primitive_pairs())
def test_determinant_identity_exact(s, a, b):
    s1, s2 = normalize_slope(*a), normalize_slope(*b)
    if s1 == s2:
        return
    direct, via = triangle_area_identity(s, s1, s2)
    assert direct.is_exact and direct == via


@settings(max_examples=30, deadline=None)
@given(rational_shapes(max_coord=3), primitive_pairs(bound=3), primitive_pairs(bound=3))
def test_distance_equals_crossing_count(s, a, b):
    s1, s2 = normalize_slope(*a), normalize_slope(*b)
    assert slope_distance(s1, s2) == brute_intersections(s, (s1.p, s1.q), (s2.p, s2.q))


@settings(max_examples=40, deadline=None)
@given(rational_shapes(), st.integers(-4, 4))
def test_basis_shift_permutes_integral_slopes(s, k):
    before = {r.slope.p: r.length_squared for r in integral_slope_reports(s, 6)}
    after = {r.slope.p: r.length_squared for r in integral_slope_reports(s.shifted(k), 6)}
    assert after == {n - k: v for n, v in before.items()}


def test_enclosure_soundness_under_refinement():
    rng = random.Random(7)
    base = [R(13, 10), R(1, 5), R(-2, 5), R(31, 10)]
    radius = R(1, 1000)
    widened = CuspShape.from_components(*(Scalar.interval(c - radius, c + radius) for c in base))
    reports = {r.slope: r for r in enumerate_short_slopes(widened, 6)}
    for _ in range(25):
        point = [c + radius * R(rng.randint(-1000, 1000), 1000) for c in base]
        exact = CuspShape.from_components(*point)
        for r in enumerate_short_slopes(exact, 6):
            assert r.slope in reports
            assert reports[r.slope].length.contains(r.length)
            assert reports[r.slope].length_squared.contains(r.length_squared)
        assert cusp_area(widened).contains(cusp_area(exact))


def test_normalized_shape():
    s = shape(3, 4, 1, -2).normalized()
    assert s.meridian == Vec2(5, 0)
    assert s.longitude.y.value > 0
    assert cusp_area(s) == cusp_area(shape(3, 4, 1, -2))
