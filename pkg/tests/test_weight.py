import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaugehn import (
    Flag,
    Spectrum,
    SplitBundle,
    energy,
    flow_decay_exponents,
    hn_filtration,
    is_semistable,
    lagrange_minimum,
    limit_object,
    maximal_weight,
    normalize_flag,
    optimal_destabilizer,
    quotient_data,
)
from gaugehn.oracle import enumerate_flags, grid_minimize
from gaugehn.weight import Destabilizer, _displayed_weight, _slope_form_weight

from .strategies import bundles, split_flags

F = Fraction


class TestMaximalWeight:
    def test_two_step(self):
        b = SplitBundle([2, 0])
        s = Spectrum(Flag.from_points([(1, 2), (2, 2)]), (-1, 1))
        assert maximal_weight(b, s) == -2

    def test_three_step_both_forms(self):
        b = SplitBundle([3, 1, 0])
        f = Flag.from_points([(1, 3), (2, 4), (3, 4)])
        eig = (F(-1), F(0), F(1))
        assert _displayed_weight(f, eig, b.degree, b.slope) == -3
        assert _slope_form_weight(f, eig, b.slope) == -3
        assert maximal_weight(b, Spectrum(f, eig)) == -3

    @given(bundles, st.integers(-5, 5))
    def test_central_direction_has_zero_weight(self, b, c):
        f = Flag.from_points([(b.rank, b.degree)])
        assert maximal_weight(b, Spectrum(f, (c,))) == 0

    def test_rejects_foreign_flag(self):
        with pytest.raises(ValueError):
            maximal_weight(SplitBundle([2, 0]), Spectrum(Flag.from_points([(1, 3), (2, 2)]), (0, 1)))

    @given(split_flags(), st.data())
    def test_degree_monotonicity(self, bf, data):
        b, f = bf
        if len(f) < 2:
            return
        lam = sorted(data.draw(st.sets(st.integers(-4, 4), min_size=len(f), max_size=len(f))))
        i = data.draw(st.integers(0, len(f) - 2))
        lowered = list(f.points)
        lowered[i] = (lowered[i][0], lowered[i][1] - 1)
        g = Flag.from_points(lowered)
        diff = maximal_weight(b, Spectrum(g, lam)) - maximal_weight(b, Spectrum(f, lam))
        assert diff == lam[i + 1] - lam[i] > 0


class TestLagrange:
    def test_hn_flag(self):
        assert lagrange_minimum(Flag.from_points([(1, 2), (2, 2)]), 1) == ((-1, 1), 2)

    def test_reversed_slopes(self):
        assert lagrange_minimum(Flag.from_points([(1, 0), (2, 2)]), 1) is None

    def test_single_step(self):
        assert lagrange_minimum(Flag.from_points([(2, 2)]), 1) == ((0,), 0)

    @pytest.mark.parametrize(
        "twists, points, baseline",
        [
            ([2, 0], [(1, 2), (2, 2)], 1),
            ([3, 1, 0], [(1, 3), (2, 4), (3, 4)], F(4, 3)),
            ([3, 2, -1], [(2, 5), (3, 4)], 1),
        ],
    )
    def test_grid_agrees(self, twists, points, baseline):
        b, f = SplitBundle(twists), Flag.from_points(points)
        _, value_sq = lagrange_minimum(f, baseline)
        g = grid_minimize(b, f, baseline, 1e-3)
        assert abs(g.value + math.sqrt(value_sq)) < 1e-3


class TestOptimalDestabilizer:
    def test_semistable(self):
        assert optimal_destabilizer(SplitBundle([1, 1])) is None

    def test_two_step(self):
        d = optimal_destabilizer(SplitBundle([2, 0]))
        assert d.flag.points == [(1, 2), (2, 2)]
        assert d.direction == (-1, 1)
        assert d.norm_sq == d.weight_sq == 2
        assert d.min_weight == pytest.approx(-math.sqrt(2), abs=1e-12)
        assert d.float_view == pytest.approx([-1 / math.sqrt(2), 1 / math.sqrt(2)])

    def test_three_step(self):
        d = optimal_destabilizer(SplitBundle([3, 1, 0]))
        assert d.flag.points == [(1, 3), (2, 4), (3, 4)]
        assert d.direction == (F(-5, 3), F(1, 3), F(4, 3))
        assert d.norm_sq == F(42, 9)
        assert d.min_weight == pytest.approx(-math.sqrt(F(14, 3)), abs=1e-12)

    def test_oracle_minimum_three_step(self):
        b = SplitBundle([3, 1, 0])
        g = grid_minimize(b, hn_filtration(b), b.slope, 1e-3)
        assert g.value == pytest.approx(-math.sqrt(14 / 3), abs=5e-3)

    @given(bundles)
    def test_invariants(self, b):
        d = optimal_destabilizer(b)
        if d is None:
            assert is_semistable(b)
            return
        data = quotient_data(d.flag)
        assert all(x < y for x, y in zip(d.direction, d.direction[1:]))
        assert d.norm_sq == sum(r * x * x for (r, _), x in zip(data, d.direction)) > 0
        assert d.norm_sq == energy(d.flag, b.slope)
        assert sum(r * x * (m - b.slope) for (r, m), x in zip(data, d.direction)) == -d.norm_sq
        assert sum(r * x for (r, _), x in zip(data, d.direction)) == 0
        w = maximal_weight(b, Spectrum(d.flag, d.direction))
        # unit direction is direction / sqrt(norm_sq): weight^2 = norm_sq
        assert w < 0 and w * w / d.norm_sq == d.norm_sq

    @given(bundles)
    def test_beats_every_flag(self, b):
        d = optimal_destabilizer(b)
        if d is None:
            return
        for f in enumerate_flags(b, 1, include_split=True):
            lm = lagrange_minimum(f, b.slope)
            if lm is not None and normalize_flag(f) != d.flag:
                assert lm[1] < d.norm_sq


class TestLimit:
    @pytest.mark.parametrize(
        "twists, blocks", [([2, 0], [[2], [0]]), ([3, 1, 0], [[3], [1], [0]]), ([2, 2, 0], [[2, 2], [0]])]
    )
    def test_blocks(self, twists, blocks):
        b = SplitBundle(twists)
        assert [list(x.twists) for x in limit_object(b, optimal_destabilizer(b))] == blocks

    def test_identity_grading(self):
        b = SplitBundle([1, 1])
        f = Flag.from_witnesses(b, [{0, 1}])
        d = Destabilizer(f, (F(0),), F(0), F(0))
        assert [list(x.twists) for x in limit_object(b, d)] == [[1, 1]]

    def test_needs_witnesses(self):
        b = SplitBundle([2, 0])
        d = Destabilizer(Flag.from_points([(1, 2), (2, 2)]), (F(-1), F(1)), F(2), F(2))
        with pytest.raises(ValueError):
            limit_object(b, d)

    @given(bundles)
    def test_limit_properties(self, b):
        d = optimal_destabilizer(b)
        if d is None:
            return
        blocks = limit_object(b, d)
        assert all(is_semistable(x) for x in blocks)
        assert all(x.slope > y.slope for x, y in zip(blocks, blocks[1:]))
        assert sorted(a for x in blocks for a in x.twists) == sorted(b.twists)


class TestDecay:
    def test_two_step(self):
        assert flow_decay_exponents(optimal_destabilizer(SplitBundle([2, 0]))) == {(0, 1): -2}

    def test_three_step(self):
        exps = flow_decay_exponents(optimal_destabilizer(SplitBundle([3, 1, 0])))
        assert exps == {(0, 1): -2, (0, 2): -3, (1, 2): -1}

    def test_single_block(self):
        f = Flag.from_points([(2, 2)])
        assert flow_decay_exponents(Destabilizer(f, (F(0),), F(0), F(0))) == {}

    @given(bundles)
    def test_all_negative(self, b):
        d = optimal_destabilizer(b)
        if d is not None:
            assert all(v < 0 for v in flow_decay_exponents(d).values())
