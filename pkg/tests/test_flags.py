import random
from fractions import Fraction

import pytest

import jetforge.linalg as la
from jetforge.connection import (MatrixJet, beta, matrixjet_invert,
                                 series_oracle)
from jetforge.errors import NoRationalFvPoint
from jetforge.examples import legendre_chart, nilpotent_chart
from jetforge.flags import (HodgeData, TorsorPoint, alpha, check_fv,
                            check_hr1, eta_chartlocal, flag_of_matrix,
                            weight1_positivity)
from jetforge.poly import graded_monomials
from jetforge.ratfunc import RationalFunction
from jetforge.series import JetPoint, TruncatedSeries
from jetforge.verify import random_flat_chart, random_invertible, random_jet


def weight1_data(m=2):
    return HodgeData(2, 1, (2, 1), [[0, 1], [-1, 0]])


def weight2_data():
    return HodgeData(3, 2, (3, 2, 1), [[0, 0, 1], [0, 1, 0], [1, 0, 0]])


def rand_series(rng, d, r, include_const=None):
    coeffs = {mono: Fraction(rng.randint(-3, 3), rng.randint(1, 2))
              for mono in graded_monomials(d, r) if rng.random() < 0.7}
    if include_const is not None:
        coeffs[(0,) * d] = include_const
    return TruncatedSeries(d, r, coeffs)


class TestFlagOfMatrix:
    def test_identity_line(self):
        flag = flag_of_matrix(weight1_data(), la.identity(2))
        assert flag.chart.pivot_sets == ((0,),)
        assert flag.coords == {}

    def test_period_ratio_slot(self):
        tau = Fraction(7, 3)
        flag = flag_of_matrix(weight1_data(), [[1, 0], [tau, 1]])
        assert flag.chart.pivot_sets == ((0,),)
        assert flag.coords == {(1, 0): TruncatedSeries.const(tau, 1, 0)}

    def test_pivot_fallback(self):
        flag = flag_of_matrix(weight1_data(), [[0, 1], [1, 0]])
        assert flag.chart.pivot_sets == ((1,),)

    def test_block_unipotent_invariance(self):
        rng = random.Random(3)
        hodge = weight2_data()
        d, r = 1, 3
        for _ in range(8):
            entries = [[rand_series(rng, d, r) for _ in range(3)]
                       for _ in range(3)]
            for i in range(3):
                entries[i][i] = entries[i][i] + TruncatedSeries.const(
                    Fraction(4), d, r)
            jet = MatrixJet(entries)
            # block partition (1, 1, 1) from dims (3, 2, 1): any upper
            # unitriangular jet preserves all leading column blocks
            one = TruncatedSeries.one(d, r)
            zero = TruncatedSeries.zero(d, r)
            u = [[one if i == j else (rand_series(rng, d, r) if j > i else zero)
                  for j in range(3)] for i in range(3)]
            assert flag_of_matrix(hodge, jet * MatrixJet(u)) == \
                flag_of_matrix(hodge, jet)

    def test_nested_pivot_selection_is_lex_smallest(self):
        hodge = weight2_data()
        # first column forces the deepest pivot to row 1
        matrix = [[0, 1, 0], [1, 0, 0], [0, 0, 1]]
        flag = flag_of_matrix(hodge, matrix)
        assert flag.chart.pivot_sets == ((1,), (0, 1))

    def test_representative_prefix_spans(self):
        hodge = weight2_data()
        matrix = [[2, 1, 0], [1, 1, 1], [0, 3, 1]]
        flag = flag_of_matrix(hodge, matrix)
        rep = flag.representative()
        # first column proportional to first input column, pivot normalized
        pivots = flag.chart.pivot_sets[0]
        pivot = pivots[0]
        scale = Fraction(matrix[pivot][0])
        for row in range(3):
            assert rep[row][0].constant_term() == Fraction(matrix[row][0]) / scale

    def _assert_canonical(self, hodge, jet):
        from jetforge.connection import invert_series_matrix
        flag = flag_of_matrix(hodge, jet)
        rep = flag.representative()
        d, r = jet.dims, jet.order
        one = TruncatedSeries.one(d, r)
        zero = TruncatedSeries.zero(d, r)
        sizes = hodge.step_sizes()
        # pivot pattern: within a step, each column is a unit vector on the
        # step's pivot rows
        col = 0
        prev = ()
        for i, pivots in enumerate(flag.chart.pivot_sets):
            for row_added in [p for p in pivots if p not in prev]:
                for other in pivots:
                    expected = one if other == row_added else zero
                    assert rep[other][col] == expected
                col += 1
            prev = pivots
        # prefix spans: the first s columns of the representative are an
        # invertible column transform of the first s input columns
        for i, size in enumerate(sizes):
            pivots = flag.chart.pivot_sets[i]
            minor = [[jet.entry(row, c) for c in range(size)]
                     for row in pivots]
            transform = invert_series_matrix(minor)
            target = [[rep[row][c] for c in range(size)] for row in pivots]
            import jetforge.linalg as la_
            t = la_.mat_mul(transform, target)
            recon = la_.mat_mul([[jet.entry(row, c) for c in range(size)]
                                 for row in range(hodge.m)], t)
            for row in range(hodge.m):
                for c in range(size):
                    assert recon[row][c] == rep[row][c]

    def test_canonical_form_on_wide_steps(self):
        # a single filtration step of dimension two: two pivot rows enter at
        # once and the echelon columns must be normalized per pivot row
        rng = random.Random(27)
        hodge = HodgeData(4, 1, (4, 2),
                          [[0, 0, 1, 0], [0, 0, 0, 1],
                           [-1, 0, 0, 0], [0, -1, 0, 0]])
        for _ in range(6):
            entries = [[rand_series(rng, 1, 2) for _ in range(4)]
                       for _ in range(4)]
            for i in range(4):
                entries[i][i] = entries[i][i] + TruncatedSeries.const(
                    Fraction(5), 1, 2)
            self._assert_canonical(hodge, MatrixJet(entries))

    def test_canonical_form_on_nested_steps(self):
        rng = random.Random(33)
        hodge = weight2_data()
        for _ in range(6):
            entries = [[rand_series(rng, 2, 2) for _ in range(3)]
                       for _ in range(3)]
            for i in range(3):
                entries[i][i] = entries[i][i] + TruncatedSeries.const(
                    Fraction(4), 2, 2)
            self._assert_canonical(hodge, MatrixJet(entries))


class TestHr1:
    def test_weight1_line_is_isotropic(self):
        assert check_hr1(weight1_data(), flag_of_matrix(weight1_data(),
                                                        la.identity(2)))

    def test_weight2_violating_flag(self):
        hodge = weight2_data()
        good = flag_of_matrix(hodge, la.identity(3))
        assert check_hr1(hodge, good)
        violating = flag_of_matrix(hodge, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
        assert not check_hr1(hodge, violating)

    def test_alpha_lands_in_hr1_locus(self):
        rng = random.Random(9)
        for _ in range(6):
            rc = random_flat_chart(rng, rng.choice([2, 3]), rng.randint(1, 2),
                                   hodge_aligned=True)
            sigma = random_jet(rng, rc.chart, rng.randint(1, 2),
                               rng.randint(0, 4))
            initial = rc.gauge_at(sigma.basepoint())
            assert check_fv(rc.chart, sigma.basepoint(), initial)
            flag = alpha(rc.chart, sigma, initial)
            assert check_hr1(HodgeData.of_chart(rc.chart), flag)


class TestFv:
    def test_identity_on_matching_gram(self):
        chart = nilpotent_chart()
        assert check_fv(chart, (Fraction(0),), la.identity(2))

    def test_unimodular_preserves_symplectic(self):
        chart = nilpotent_chart()
        m = [[Fraction(2), Fraction(1)], [Fraction(3), Fraction(2)]]  # det 1
        assert check_fv(chart, (Fraction(0),), m)

    def test_scaling_fails(self):
        chart = nilpotent_chart()
        m = [[Fraction(2), 0], [0, Fraction(2)]]
        assert not check_fv(chart, (Fraction(0),), m)

    def test_right_action_preserves_fibre(self):
        rng = random.Random(12)
        chart = legendre_chart()
        point = (Fraction(1, 2),)
        base = [[Fraction(1), 0], [0, Fraction(1, 4)]]
        assert check_fv(chart, point, base)
        for _ in range(8):
            # random integer symplectic from elementary generators
            action = la.identity(2)
            for _ in range(4):
                shear = la.identity(2)
                if rng.random() < 0.5:
                    shear[0][1] = Fraction(rng.randint(-3, 3))
                else:
                    shear[1][0] = Fraction(rng.randint(-3, 3))
                action = la.mat_mul(action, shear)
            assert la.det(action) == 1
            moved = la.mat_mul(base, action)
            assert check_fv(chart, point, moved)


class TestAlpha:
    def test_order_zero_flag_of_inverse(self):
        chart = nilpotent_chart()
        sigma = JetPoint([TruncatedSeries.const(Fraction(0), 1, 0)])
        m = [[Fraction(1), 0], [Fraction(5), Fraction(1)]]
        flag = alpha(chart, sigma, m)
        direct = flag_of_matrix(HodgeData.of_chart(chart), la.invert(m))
        assert flag == direct

    def test_dual_route_equality(self):
        rng = random.Random(15)
        for _ in range(6):
            rc = random_flat_chart(rng, rng.choice([2, 3]), rng.randint(1, 2))
            chart = rc.chart
            sigma = random_jet(rng, chart, rng.randint(1, 2), rng.randint(0, 3))
            initial = random_invertible(rng, chart.m)
            hodge = HodgeData.of_chart(chart)
            via_beta = flag_of_matrix(
                hodge, matrixjet_invert(beta(chart, sigma, initial)))
            via_oracle = flag_of_matrix(
                hodge, matrixjet_invert(series_oracle(chart, sigma, initial)))
            assert via_beta == via_oracle

    def test_legendre_tau_slot_is_solution_ratio(self):
        chart = legendre_chart()
        sigma = JetPoint([TruncatedSeries(1, 3, {(0,): Fraction(1, 2), (1,): 1})])
        initial = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(1)]]
        flag = alpha(chart, sigma, initial)
        inverse = matrixjet_invert(beta(chart, sigma, initial))
        h11 = inverse.entry(0, 0)
        h21 = inverse.entry(1, 0)
        pivot = flag.chart.pivot_sets[0][0]
        coord = flag.coords[(1 - pivot, 0)]
        if pivot == 0:
            assert coord == h21 * h11.invert_unit()
        else:
            assert coord == h11 * h21.invert_unit()


class TestEta:
    def test_matching_gram_gives_identity(self):
        chart = nilpotent_chart()
        sigma = JetPoint([TruncatedSeries(1, 2, {(1,): 1})])
        witness = eta_chartlocal(chart, sigma)
        assert witness.point.matrix == tuple(
            tuple(row) for row in la.identity(2))
        assert check_hr1(HodgeData.of_chart(chart), witness.flag)

    def test_scaled_symplectic_closed_form(self):
        chart = legendre_chart()
        sigma = JetPoint([TruncatedSeries(1, 3, {(0,): Fraction(1, 2), (1,): 1})])
        witness = eta_chartlocal(chart, sigma)
        mstar = [list(row) for row in witness.point.matrix]
        gram = chart.gram_at((Fraction(1, 2),))
        check = la.mat_mul(la.transpose(mstar), la.mat_mul(gram, mstar))
        assert la.mat_eq(check, [[Fraction(0), Fraction(1)],
                                 [Fraction(-1), Fraction(0)]])
        assert check_hr1(HodgeData.of_chart(chart), witness.flag)

    def test_non_congruent_gram_is_certified(self):
        zero = RationalFunction.zero(1)
        three = RationalFunction.const(3, 1)
        from jetforge.connection import ConnectionChart
        chart = ConnectionChart(
            1, 2, [[[zero], [zero]], [[zero], [zero]]], weight=2,
            filtration_dims=(2, 1), gram=[[three, zero], [zero, three]],
            polarization=[[1, 0], [0, 1]])
        sigma = JetPoint([TruncatedSeries(1, 1, {(1,): 1})])
        with pytest.raises(NoRationalFvPoint):
            eta_chartlocal(chart, sigma)

    def test_torsor_point_validation(self):
        chart = nilpotent_chart()
        sigma = JetPoint([TruncatedSeries(1, 1, {(1,): 1})])
        TorsorPoint.validated(chart, sigma, la.identity(2))
        with pytest.raises(ValueError):
            TorsorPoint.validated(chart, sigma,
                                  [[Fraction(2), 0], [0, Fraction(2)]])


class TestGramPattern:
    def test_builtin_charts_have_the_pattern(self):
        from jetforge.flags import gram_obeys_first_relation
        assert gram_obeys_first_relation(legendre_chart())
        assert gram_obeys_first_relation(nilpotent_chart())

    def test_identity_gram_breaks_the_pattern_in_weight_two(self):
        from jetforge.connection import ConnectionChart
        from jetforge.flags import gram_obeys_first_relation
        zero = RationalFunction.zero(1)
        one = RationalFunction.one(1)
        gram = [[one if i == j else zero for j in range(3)] for i in range(3)]
        chart = ConnectionChart(
            1, 3, [[[zero] for _ in range(3)] for _ in range(3)], weight=2,
            filtration_dims=(3, 2, 1), gram=gram,
            polarization=[[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        assert not gram_obeys_first_relation(chart)


class TestPositivityProbe:
    def test_upper_half_plane(self):
        q = [[0, 1], [-1, 0]]
        assert weight1_positivity(q, [1, 1j])
        assert not weight1_positivity(q, [1, -1j])
        assert not weight1_positivity(q, [1, Fraction(1, 2)])
