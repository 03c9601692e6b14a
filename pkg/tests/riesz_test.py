"""Unit tests for R(x) by its three methods and the first-zero search.
"""

import pytest
from mpmath import mp, mpf

from rieszcrit.errors import BracketError, DomainError, PrecisionBudgetError
from rieszcrit.numerics import Method, PrecisionContext
from rieszcrit.riesz import DEFAULT_PARAMS, RieszParams, find_first_zero, \
     naive_digits, riesz_eval, riesz_kummer, riesz_moebius, riesz_naive, \
     riesz_sweep

FIRST_ZERO = mpf('1.156711643750816')


class TestRieszParams(object):
    def test_needs_positive_a(self):
        with pytest.raises(DomainError):
            RieszParams(0, 2)

    def test_b_at_most_one_is_not_rigorous(self):
        assert not RieszParams(2, 1).rigorous
        assert RieszParams(2, 2).rigorous

    def test_knows_the_riesz_case(self):
        assert DEFAULT_PARAMS.is_riesz
        assert not RieszParams(2, 4).is_riesz


class TestNaive(object):
    def setup_method(self):
        self.ctx = PrecisionContext(50, mpf('1e-30'))

    def test_vanishes_at_zero(self):
        assert riesz_naive(0, self.ctx).value == 0

    def test_first_term_dominates_near_zero(self):
        x = mpf('1e-8')
        r = riesz_naive(x, self.ctx)
        assert abs(r.value - x * 6 / mp.pi ** 2) <= x ** 2

    def test_accepts_negative_arguments(self):
        r = riesz_naive(-5, self.ctx)
        assert r.value < 0

    def test_refuses_arguments_beyond_the_precision_ceiling(self):
        with pytest.raises(PrecisionBudgetError) as e:
            riesz_naive(10 ** 4, self.ctx)
        assert 'kummer' in str(e.value)

    def test_grows_like_x_exp_minus_x_for_negative_x(self):
        x = mpf(-30)
        r = riesz_naive(x, self.ctx)
        assert abs(r.value / (x * mp.exp(-x)) - 1) <= mpf('1e-6')

    def test_rounding_stays_under_the_tightest_tolerance(self):
        ctx = PrecisionContext(50, mpf('1e-40'))
        r = riesz_naive(500, ctx)
        assert r.error_bound <= ctx.tol

    def test_guard_digits_grow_with_x(self):
        assert naive_digits(500, self.ctx) >= 50 + 218 + 5 + 6
        assert naive_digits(0, self.ctx) == 50 + 5 + 2


class TestMethodsAgree(object):
    def setup_method(self):
        self.ctx = PrecisionContext(50, mpf('1e-30'))

    @pytest.mark.parametrize('x', ['0.5', '10', '100'])
    def test_naive_and_moebius(self, x, table):
        naive = riesz_naive(x, self.ctx)
        moebius = riesz_moebius(x, DEFAULT_PARAMS, table, self.ctx)
        assert naive.agrees_with(moebius)
        assert moebius.error_bound <= self.ctx.tol

    @pytest.mark.parametrize('x', ['10', '100'])
    def test_naive_and_kummer(self, x, table):
        naive = riesz_naive(x, self.ctx)
        kummer = riesz_kummer(x, table, self.ctx)
        assert naive.agrees_with(kummer)
        assert kummer.error_bound <= self.ctx.tol

    def test_first_order_kummer_with_a_float_head(self, table):
        ctx = PrecisionContext(50, mpf('1e-12'))
        kummer = riesz_kummer(10, table, ctx, order=1)
        naive = riesz_naive(10, self.ctx)
        assert abs(kummer.value - naive.value) <= kummer.error_bound
        assert kummer.error_bound <= 2 * ctx.tol

    def test_generalised_parameters(self, table):
        params = RieszParams(2, 4)
        naive = riesz_naive(20, self.ctx, params)
        moebius = riesz_moebius(20, params, table, self.ctx)
        assert naive.agrees_with(moebius)

    def test_moebius_refuses_negative_arguments(self, table):
        with pytest.raises(DomainError):
            riesz_moebius(-1, DEFAULT_PARAMS, table, self.ctx)

    @pytest.mark.parametrize('x', [1, 1000])
    def test_all_three_methods(self, x, table):
        ctx = PrecisionContext(50, mpf('1e-25'))
        results = [riesz_naive(x, ctx), riesz_kummer(x, table, ctx),
                   riesz_moebius(x, DEFAULT_PARAMS, table, ctx)]
        for r in results:
            for other in results:
                assert abs(r.value - other.value) <= r.error_bound + other.error_bound

    def test_kummer_and_moebius_past_the_power_series(self, table):
        ctx = PrecisionContext(50, mpf('1e-25'))
        kummer = riesz_kummer(10 ** 4, table, ctx)
        moebius = riesz_moebius(10 ** 4, DEFAULT_PARAMS, table, ctx)
        assert abs(kummer.value - moebius.value) <= kummer.error_bound + moebius.error_bound
        with pytest.raises(PrecisionBudgetError):
            riesz_naive(10 ** 4, ctx)


class TestEval(object):
    def test_dispatches_on_method_names(self, table):
        ctx = PrecisionContext(50, mpf('1e-20'))
        for method in ('naive', 'kummer', 'moebius'):
            result = riesz_eval(3, method, ctx, table)
            assert result.method is Method(method)

    def test_refuses_sequence_methods(self):
        with pytest.raises(DomainError):
            riesz_eval(3, 'diff', PrecisionContext())

    def test_kummer_is_for_the_riesz_case_only(self, table):
        with pytest.raises(DomainError):
            riesz_eval(3, 'kummer', PrecisionContext(), table, RieszParams(2, 4))


class TestFirstZero(object):
    def test_finds_the_first_zero(self):
        ctx = PrecisionContext(50, mpf('1e-30'))
        root = find_first_zero(1, '1.5', ctx)
        assert abs(root - FIRST_ZERO) <= mpf('1e-12')

    def test_changes_sign_across_the_zero(self):
        ctx = PrecisionContext(50, mpf('1e-30'))
        assert riesz_naive('1.15', ctx).value > 0
        assert riesz_naive('1.16', ctx).value < 0

    def test_refuses_brackets_without_a_sign_change(self):
        with pytest.raises(BracketError):
            find_first_zero(2, 3, PrecisionContext(50, mpf('1e-20')))

    def test_refuses_empty_brackets(self):
        with pytest.raises(DomainError):
            find_first_zero(2, 1, PrecisionContext(50, mpf('1e-20')))


class TestSweep(object):
    def test_returns_points_in_order(self, table):
        ctx = PrecisionContext(50, mpf('1e-12'))
        points = riesz_sweep(0, 20, 5, 'moebius', ctx, table)
        assert [float(x) for x, _ in points] == [0.0, 5.0, 10.0, 15.0, 20.0]
        assert points[0][1].value == 0

    def test_sweep_values_match_point_evaluations(self, table):
        ctx = PrecisionContext(50, mpf('1e-12'))
        points = riesz_sweep(1, 1000, 4, 'moebius', ctx, table, log_spacing=True)
        for x, r in points:
            assert r.agrees_with(riesz_naive(x, PrecisionContext()))
