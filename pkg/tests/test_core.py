from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaugehn import (
    Flag,
    PairModel,
    SlopePoint,
    Spectrum,
    SplitBundle,
    as_rat,
    flag_from_quotients,
    quotient_data,
    slope,
    topsum,
)

from .strategies import bundles, split_flags


class TestRationals:
    @pytest.mark.parametrize(
        "text, value",
        [("3", Fraction(3)), ("-1/2", Fraction(-1, 2)), (" 6/4 ", Fraction(3, 2)), ("+2", Fraction(2))],
    )
    def test_parses_literals(self, text, value):
        q = as_rat(text)
        assert q == value
        assert q.denominator > 0

    def test_reduced(self):
        q = as_rat("-10/4")
        assert (q.numerator, q.denominator) == (-5, 2)

    @pytest.mark.parametrize("bad", ["1.5", "x", "1/", "", "1//2"])
    def test_rejects_garbage(self, bad):
        with pytest.raises(ValueError):
            as_rat(bad)

    def test_rejects_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            as_rat("1/0")

    @pytest.mark.parametrize("bad", [0.5, True, None])
    def test_refuses_inexact_types(self, bad):
        with pytest.raises(TypeError):
            as_rat(bad)


class TestSplitBundle:
    def test_sorted_descending(self):
        b = SplitBundle([0, 3, 1])
        assert b.twists == (3, 1, 0)
        assert (b.rank, b.degree, b.slope) == (3, 4, Fraction(4, 3))

    def test_empty(self):
        with pytest.raises(ValueError, match="twists must be non-empty"):
            SplitBundle([])

    def test_non_integer_twist(self):
        with pytest.raises(TypeError):
            SplitBundle([1, 0.5])

    def test_equality_ignores_input_order(self):
        assert SplitBundle([1, 2]) == SplitBundle([2, 1])


@pytest.mark.parametrize(
    "rank, degree, expected", [(2, 2, 1), (3, 4, Fraction(4, 3)), (1, -2, -2)]
)
def test_slope(rank, degree, expected):
    assert slope(SlopePoint(rank, degree)) == expected


def test_slope_point_rank_positive():
    with pytest.raises(ValueError):
        SlopePoint(0, 1)


@pytest.mark.parametrize("twists, k, expected", [([3, 1, 0], 2, 4), ([2, 0], 1, 2), ([1, 1], 2, 2)])
def test_topsum(twists, k, expected):
    assert topsum(SplitBundle(twists), k) == expected


@pytest.mark.parametrize("k", [0, 4])
def test_topsum_out_of_range(k):
    with pytest.raises(ValueError):
        topsum(SplitBundle([3, 1, 0]), k)


@given(bundles)
def test_topsum_concave(b):
    gaps = [topsum(b, k + 1) - topsum(b, k) for k in range(1, b.rank)]
    assert all(x >= y for x, y in zip(gaps, gaps[1:]))


class TestFlag:
    @pytest.mark.parametrize(
        "points, expected",
        [
            ([(1, 2), (2, 2)], [(1, 2), (1, 0)]),
            ([(2, 2)], [(2, 1)]),
            ([(1, 3), (2, 4), (3, 4)], [(1, 3), (1, 1), (1, 0)]),
        ],
    )
    def test_quotient_data(self, points, expected):
        f = Flag.from_points(points)
        assert quotient_data(f) == [(r, Fraction(m)) for r, m in expected]
        assert flag_from_quotients(quotient_data(f)) == f

    def test_ranks_must_increase(self):
        with pytest.raises(ValueError):
            Flag.from_points([(2, 2), (2, 2)])

    def test_witness_checks(self):
        b = SplitBundle([2, 0])
        f = Flag.from_witnesses(b, [{0}, {0, 1}])
        assert f.points == [(1, 2), (2, 2)]
        assert f.blocks() == [frozenset({0}), frozenset({1})]
        f.check(b)
        with pytest.raises(ValueError):
            Flag.from_witnesses(b, [{0, 1}, {0}])
        with pytest.raises(ValueError):
            Flag.from_witnesses(b, [{0, 5}])

    def test_check_rejects_foreign_flags(self):
        b = SplitBundle([2, 0])
        with pytest.raises(ValueError):
            Flag.from_points([(1, 3), (2, 2)]).check(b)
        with pytest.raises(ValueError):
            Flag.from_points([(1, 2), (2, 3)]).check(b)

    def test_blocks_need_witnesses(self):
        with pytest.raises(ValueError):
            Flag.from_points([(1, 2), (2, 2)]).blocks()

    def test_equality_at_point_level(self):
        b = SplitBundle([1, 1])
        assert Flag.from_witnesses(b, [{0}, {0, 1}]) == Flag.from_witnesses(b, [{1}, {0, 1}])

    @given(split_flags())
    def test_round_trip_and_telescoping(self, bf):
        b, f = bf
        data = quotient_data(f)
        assert flag_from_quotients(data) == f
        assert sum(r for r, _ in data) == b.rank
        assert sum(r * m for r, m in data) == b.degree


class TestSpectrum:
    def test_valid(self):
        s = Spectrum(Flag.from_points([(1, 2), (2, 2)]), ("-1", 1))
        assert s.eigenvalues == (-1, 1)
        assert s.trace() == 0

    def test_count_mismatch(self):
        with pytest.raises(ValueError):
            Spectrum(Flag.from_points([(2, 2)]), (0, 1))

    def test_not_increasing(self):
        with pytest.raises(ValueError):
            Spectrum(Flag.from_points([(1, 2), (2, 2)]), (1, 1))


class TestPairModel:
    def test_image_step(self):
        b = SplitBundle([3, 1, 0])
        p = PairModel(b, {1}, "2")
        f = Flag.from_witnesses(b, [{0}, {0, 1}, {0, 1, 2}])
        assert p.image_step(f) == 1
        assert p.tau == 2
        assert PairModel(b, (), 0).image_step(f) is None

    def test_bad_index(self):
        with pytest.raises(ValueError):
            PairModel(SplitBundle([1]), {1}, 0)

    @given(bundles, st.data())
    def test_image_step_is_first_containing(self, b, data):
        image = data.draw(st.sets(st.integers(0, b.rank - 1), min_size=1))
        f = Flag.from_witnesses(b, [range(k) for k in range(1, b.rank + 1)])
        j = PairModel(b, image, 0).image_step(f)
        assert j == max(image)
