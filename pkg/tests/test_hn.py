import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaugehn import (
    Flag,
    NotComparableError,
    Polygon,
    SlopePoint,
    SplitBundle,
    compare_concave_energy,
    dominates,
    energy,
    hn_filtration,
    is_concave,
    is_semistable,
    normalize_flag,
    polygon_of,
    quotient_data,
    topsum,
)
from gaugehn.oracle import bundles, concave_split_flags, split_flags

from .strategies import split_flags as flag_strategy


@pytest.mark.parametrize(
    "twists, points, slopes",
    [
        ([2, 0], [(1, 2), (2, 2)], [2, 0]),
        ([1, 1], [(2, 2)], [1]),
        ([3, 1, 0], [(1, 3), (2, 4), (3, 4)], [3, 1, 0]),
    ],
)
def test_hn_filtration(twists, points, slopes):
    f = hn_filtration(SplitBundle(twists))
    assert f.points == points
    assert [m for _, m in quotient_data(f)] == slopes
    assert f.is_split


def _characterized(b, f):
    data = quotient_data(f)
    blocks_ok = all(len({b.twists[i] for i in blk}) == 1 for blk in f.blocks())
    return blocks_ok and all(x[1] > y[1] for x, y in zip(data, data[1:]))


@pytest.mark.parametrize("twists", [[2, 0], [1, 1], [3, 1, 0], [2, 2, -1, -1]])
def test_hn_characterization_small(twists):
    # all labelled split flags, so witnesses of equal twists are distinguished
    b = SplitBundle(twists)
    hits = {tuple(f.points) for f in split_flags(b) if _characterized(b, f)}
    assert hits == {tuple(hn_filtration(b).points)}


def test_hn_characterization_exhaustive():
    # the characterization forces strictly decreasing slopes, so the pruned
    # enumerator already contains every candidate
    for b in bundles(6, (-3, 3)):
        hits = [f.points for f in concave_split_flags(b) if _characterized(b, f)]
        assert hits == [hn_filtration(b).points], b


@pytest.mark.parametrize(
    "twists, expected", [([1, 1], True), ([2, 0], False), ([0, 0, 0], True), ([5], True)]
)
def test_is_semistable(twists, expected):
    assert is_semistable(SplitBundle(twists)) is expected


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=6))
def test_semistable_iff_equal_twists(tw):
    assert is_semistable(SplitBundle(tw)) == (len(set(tw)) == 1)


@pytest.mark.parametrize(
    "points, vertices",
    [
        ([(1, 2), (2, 2)], [(0, 0), (1, 2), (2, 2)]),
        ([(3, 4)], [(0, 0), (3, 4)]),
    ],
)
def test_polygon_of(points, vertices):
    assert list(polygon_of(Flag.from_points(points)).vertices) == vertices


def test_polygon_of_hn():
    poly = polygon_of(hn_filtration(SplitBundle([3, 1, 0])))
    assert list(poly.vertices) == [(0, 0), (1, 3), (2, 4), (3, 4)]


class TestPolygon:
    def test_validation(self):
        with pytest.raises(ValueError):
            Polygon([(0, 0)])
        with pytest.raises(ValueError):
            Polygon([(1, 0), (2, 1)])
        with pytest.raises(ValueError):
            Polygon([(0, 0), (2, 1), (2, 3)])

    def test_evaluation(self):
        poly = Polygon([(0, 0), (1, 3), (3, 4)])
        assert poly(Fraction(1, 2)) == Fraction(3, 2)
        assert poly(2) == Fraction(7, 2)
        with pytest.raises(ValueError):
            poly(4)

    def test_normalized(self):
        poly = Polygon([(0, 0), (1, 1), (2, 2), (3, 2)])
        assert poly.normalized().vertices == ((0, 0), (2, 2), (3, 2))

    def test_concavity(self):
        assert Polygon([(0, 0), (1, 2), (2, 2)]).is_concave(strict=True)
        assert Polygon([(0, 0), (1, 1), (2, 2)]).is_concave()
        assert not Polygon([(0, 0), (1, 1), (2, 2)]).is_concave(strict=True)


@pytest.mark.parametrize(
    "twists, point, expected",
    [([2, 0], (1, 2), True), ([3, 1, 0], (2, 3), True), ([3, 1, 0], (1, -5), True)],
)
def test_dominates(twists, point, expected):
    assert dominates(SplitBundle(twists), SlopePoint(*point)) is expected


def test_dominates_rejects_unrealisable_point():
    b = SplitBundle([2, 0])
    with pytest.raises(ValueError):
        dominates(b, SlopePoint(1, 3))
    assert dominates(b, SlopePoint(1, 3), validate=False) is False


def test_dominance_exhaustive():
    for b in bundles(6, (-3, 3)):
        for k in range(1, b.rank + 1):
            for d in range(topsum(b, k) - 3, topsum(b, k) + 1):
                assert dominates(b, SlopePoint(k, d))


@pytest.mark.parametrize(
    "points, expected", [([(1, 2), (2, 2)], True), ([(1, 0), (2, 2)], False), ([(3, 4)], True)]
)
def test_is_concave(points, expected):
    assert is_concave(Flag.from_points(points)) is expected


def _integral_energy(poly, baseline):
    """Midpoint rule for the integral of (f' - baseline)^2; exact for step derivatives."""
    total = 0.0
    for (x0, y0), (x1, y1) in zip(poly.vertices, poly.vertices[1:]):
        xs = np.linspace(x0, x1, 9)
        ys = np.array([float(poly(Fraction(x).limit_denominator(10**6))) for x in xs])
        deriv = np.diff(ys) / np.diff(xs)
        total += float(np.sum((deriv - float(baseline)) ** 2 * np.diff(xs)))
    return total


@pytest.mark.parametrize(
    "points, baseline, expected",
    [
        ([(1, 2), (2, 2)], 1, 2),
        ([(1, 3), (2, 4), (3, 4)], Fraction(4, 3), Fraction(14, 3)),
        ([(1, 1), (3, 3)], 1, 0),
    ],
)
def test_energy(points, baseline, expected):
    f = Flag.from_points(points)
    assert energy(f, baseline) == expected
    assert abs(_integral_energy(polygon_of(f), baseline) - float(expected)) < 1e-9


@given(flag_strategy())
def test_energy_invariant_under_collinear_refinement(bf):
    b, f = bf
    assert energy(normalize_flag(f), b.slope) == energy(f, b.slope)


def test_normalize_merges_equal_slopes():
    b = SplitBundle([1, 1, 0])
    f = Flag.from_witnesses(b, [{0}, {0, 1}, {0, 1, 2}])
    g = normalize_flag(f)
    assert g.points == [(2, 2), (3, 2)]
    assert g.witnesses == (frozenset({0, 1}), frozenset({0, 1, 2}))


class TestConaff:
    def test_hn_against_chord(self):
        f = Polygon([(0, 0), (1, 2), (2, 2)])
        g = Polygon([(0, 0), (2, 2)])
        res = compare_concave_energy(f, g, 1)
        assert res.difference == 2 and res.distinct

    def test_equal(self):
        f = Polygon([(0, 0), (1, 2), (2, 2)])
        res = compare_concave_energy(f, f, 1)
        assert res.difference == 0 and not res.distinct

    def test_collinear_vertex_is_same_map(self):
        f = Polygon([(0, 0), (2, 2)])
        g = Polygon([(0, 0), (1, 1), (2, 2)])
        res = compare_concave_energy(f, g, 1)
        assert res.difference == 0 and not res.distinct

    def test_three_segments(self):
        f = polygon_of(hn_filtration(SplitBundle([3, 1, 0])))
        g = polygon_of(Flag.from_points([(2, 4), (3, 4)]))
        assert compare_concave_energy(f, g, Fraction(4, 3)).difference == 2

    @pytest.mark.parametrize(
        "f, g",
        [
            ([(0, 0), (2, 2)], [(0, 0), (3, 3)]),
            ([(0, 0), (2, 2)], [(0, 0), (2, 3)]),
            ([(0, 0), (1, 0), (2, 2)], [(0, 0), (2, 2)]),
            ([(0, 0), (2, 2)], [(0, 0), (1, 2), (2, 2)]),
        ],
    )
    def test_not_comparable(self, f, g):
        with pytest.raises(NotComparableError):
            compare_concave_energy(Polygon(f), Polygon(g), 1)


def test_energy_maximal_at_hn_small():
    b = SplitBundle([3, 1, 0])
    hn_flag = hn_filtration(b)
    for f in split_flags(b):
        g = normalize_flag(f)
        if is_concave(g) and g != hn_flag:
            assert energy(hn_flag, b.slope) > energy(g, b.slope)


def test_split_flag_points_below_hn():
    b = SplitBundle([2, 1, -1])
    poly = polygon_of(hn_filtration(b))
    for k in range(1, b.rank + 1):
        for S in itertools.combinations(range(b.rank), k):
            assert b.twistsum(S) <= poly(k)
