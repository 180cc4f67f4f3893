import math
import random
from fractions import Fraction

import pytest

from jetforge.errors import (ArityMismatch, DimensionMismatch,
                             IndexOutOfRange, NotAUnit, OrderIncrease)
from jetforge.poly import Polynomial, graded_monomials
from jetforge.series import (JetPoint, TruncatedSeries, restrict, series_add,
                             series_compose, series_derive,
                             series_invert_unit, series_mul)


def S(dims, order, coeffs):
    return TruncatedSeries(dims, order, coeffs)


def rand_series(rng, d, r, num=5, den=3):
    coeffs = {}
    for mono in graded_monomials(d, r):
        if rng.random() < 0.7:
            coeffs[mono] = Fraction(rng.randint(-num, num), rng.randint(1, den))
    return TruncatedSeries(d, r, coeffs)


class TestAdd:
    def test_cancellation(self):
        a = S(1, 1, {(0,): 1, (1,): 1})
        b = S(1, 1, {(0,): 1, (1,): -1})
        assert series_add(a, b) == S(1, 1, {(0,): 2})

    def test_identity(self):
        a = S(1, 2, {(0,): 3, (2,): Fraction(1, 2)})
        assert series_add(a, TruncatedSeries.zero(1, 2)) == a

    def test_direct_sum(self):
        a = S(2, 2, {(1, 0): 1, (0, 2): 1})
        b = S(2, 2, {(0, 2): 1})
        assert series_add(a, b) == S(2, 2, {(1, 0): 1, (0, 2): 2})

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            series_add(S(1, 1, {}), S(2, 1, {}))
        with pytest.raises(DimensionMismatch):
            series_add(S(1, 1, {}), S(1, 2, {}))


class TestMul:
    def test_truncation_forced(self):
        a = S(1, 1, {(0,): 1, (1,): 1})
        assert series_mul(a, a) == S(1, 1, {(0,): 1, (1,): 2})

    def test_cross_variable(self):
        t1 = TruncatedSeries.variable(0, 2, 2)
        t2 = TruncatedSeries.variable(1, 2, 2)
        assert series_mul(t1, t2) == S(2, 2, {(1, 1): 1})

    def test_telescoping(self):
        a = S(1, 2, {(0,): 1, (1,): 1, (2,): 1})
        b = S(1, 2, {(0,): 1, (1,): -1})
        assert series_mul(a, b) == TruncatedSeries.one(1, 2)


class TestDerive:
    def test_power(self):
        assert series_derive(S(1, 2, {(2,): 1}), 0) == S(1, 2, {(1,): 2})

    def test_missing_variable(self):
        assert series_derive(S(2, 2, {(1, 0): 1}), 1).is_zero()

    def test_mixed(self):
        a = S(2, 3, {(1, 1): 3, (2, 1): 1})
        assert series_derive(a, 0) == S(2, 3, {(0, 1): 3, (1, 1): 2})

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            series_derive(S(2, 1, {}), 2)


class TestInvert:
    def test_geometric(self):
        a = S(1, 2, {(0,): 1, (1,): -1})
        assert series_invert_unit(a) == S(1, 2, {(0,): 1, (1,): 1, (2,): 1})

    def test_constant(self):
        assert series_invert_unit(S(1, 3, {(0,): 2})) == \
            S(1, 3, {(0,): Fraction(1, 2)})

    def test_two_variables(self):
        a = S(2, 2, {(0, 0): 1, (1, 0): 1, (0, 1): 1})
        inv = series_invert_unit(a)
        expected = S(2, 2, {(0, 0): 1, (1, 0): -1, (0, 1): -1,
                            (2, 0): 1, (1, 1): 2, (0, 2): 1})
        assert inv == expected
        assert series_mul(a, inv) == TruncatedSeries.one(2, 2)

    def test_not_a_unit(self):
        with pytest.raises(NotAUnit):
            series_invert_unit(S(1, 2, {(1,): 1}))

    def test_randomized_inverse(self):
        rng = random.Random(47)
        for _ in range(25):
            d = rng.randint(1, 2)
            r = rng.randint(0, 4)
            raw = rand_series(rng, d, r)
            unit = raw - TruncatedSeries.const(raw.constant_term(), d, r) \
                + TruncatedSeries.const(Fraction(rng.randint(1, 4),
                                                 rng.randint(1, 3)), d, r)
            assert series_mul(unit, series_invert_unit(unit)) == \
                TruncatedSeries.one(d, r)


class TestCompose:
    def test_square(self):
        f = Polynomial(1, {(2,): 1})
        j = JetPoint([S(1, 1, {(0,): 2, (1,): 3})])
        assert series_compose(f, j) == S(1, 1, {(0,): 4, (1,): 12})

    def test_sum(self):
        f = Polynomial(2, {(1, 0): 1, (0, 1): 1})
        j = JetPoint([TruncatedSeries.variable(0, 2, 2),
                      TruncatedSeries.variable(1, 2, 2)])
        assert series_compose(f, j) == S(2, 2, {(1, 0): 1, (0, 1): 1})

    def test_product_minus_one(self):
        f = Polynomial(2, {(1, 1): 1, (0, 0): -1})
        j = JetPoint([S(1, 2, {(0,): 1, (1,): 1}),
                      S(1, 2, {(0,): 1, (1,): -1, (2,): 1})])
        assert series_compose(f, j).is_zero()

    def test_arity_mismatch(self):
        f = Polynomial(2, {(1, 1): 1})
        with pytest.raises(ArityMismatch):
            series_compose(f, JetPoint([S(1, 1, {})]))

    def test_series_argument_uses_offsets(self):
        # f as a series in one variable, evaluated on the offset part
        f = S(1, 2, {(0,): 5, (1,): 1, (2,): 1})
        j = JetPoint([S(1, 2, {(0,): 7, (1,): 1})])
        assert series_compose(f, j) == S(1, 2, {(0,): 5, (1,): 1, (2,): 1})


class TestRestrict:
    def test_drop_top(self):
        a = S(1, 2, {(0,): 1, (1,): 1, (2,): 1})
        assert restrict(a, 1) == S(1, 1, {(0,): 1, (1,): 1})

    def test_identity(self):
        a = S(1, 2, {(1,): 4})
        assert restrict(a, 2) == a

    def test_tower_functoriality(self):
        rng = random.Random(5)
        for _ in range(25):
            a = rand_series(rng, rng.randint(1, 2), 2)
            assert restrict(restrict(a, 1), 0) == restrict(a, 0)

    def test_order_increase_rejected(self):
        with pytest.raises(OrderIncrease):
            restrict(S(1, 1, {}), 2)

    def test_jet_restriction(self):
        j = JetPoint([S(1, 2, {(0,): 1, (1,): 2, (2,): 3})])
        assert j.restrict(1) == JetPoint([S(1, 1, {(0,): 1, (1,): 2})])


class TestRingAxioms:
    def test_randomized_axioms(self):
        rng = random.Random(17)
        for _ in range(40):
            d = rng.randint(1, 2)
            r = rng.randint(0, 4)
            a, b, c = (rand_series(rng, d, r) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert a + b == b + a
            assert (a * b) * c == a * (b * c)
            assert a * b == b * a
            assert a * (b + c) == a * b + a * c

    def test_leibniz(self):
        rng = random.Random(23)
        for _ in range(30):
            d = rng.randint(1, 2)
            r = rng.randint(1, 4)
            i = rng.randrange(d)
            a, b = rand_series(rng, d, r), rand_series(rng, d, r)
            left = (a * b).derive(i).restrict(r - 1)
            right = (a.derive(i) * b + a * b.derive(i)).restrict(r - 1)
            assert left == right

    def test_restrict_is_ring_hom(self):
        rng = random.Random(31)
        for _ in range(30):
            d = rng.randint(1, 2)
            r = rng.randint(1, 4)
            rp = rng.randint(0, r)
            a, b = rand_series(rng, d, r), rand_series(rng, d, r)
            assert (a * b).restrict(rp) == a.restrict(rp) * b.restrict(rp)
            assert (a + b).restrict(rp) == a.restrict(rp) + b.restrict(rp)

    def test_restrict_commutes_with_derive(self):
        rng = random.Random(37)
        for _ in range(30):
            d = rng.randint(1, 2)
            r = rng.randint(2, 4)
            rp = rng.randint(1, r)
            i = rng.randrange(d)
            a = rand_series(rng, d, r)
            assert a.derive(i).restrict(rp - 1) == \
                a.restrict(rp).derive(i).restrict(rp - 1)


class TestMonomialCounts:
    @pytest.mark.parametrize("d,r", [(1, 0), (1, 4), (2, 2), (2, 3), (3, 2)])
    def test_count(self, d, r):
        assert len(graded_monomials(d, r)) == math.comb(r + d, d)

    def test_d2_r2_is_six(self):
        assert len(graded_monomials(2, 2)) == 6


class TestCanonicalText:
    def test_round_trip(self):
        rng = random.Random(41)
        for _ in range(25):
            d = rng.randint(1, 3)
            r = rng.randint(0, 3)
            a = rand_series(rng, d, r)
            assert TruncatedSeries.from_string(a.to_string(), d, r) == a

    def test_sorted_graded_lex(self):
        a = S(2, 2, {(0, 1): 1, (1, 0): 1, (0, 0): 1, (1, 1): 1})
        assert a.to_string() == "1 + 1 * t1^1 + 1 * t2^1 + 1 * t1^1*t2^1"
