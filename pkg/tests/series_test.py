"""Unit tests for the Moebius-weighted series machinery.
"""

import gc
import weakref

import numpy
import pytest
from mpmath import mp, mpf

from rieszcrit import series
from rieszcrit.errors import PrecisionBudgetError, ResourceError
from rieszcrit.mobius import sieve
from rieszcrit.numerics import PrecisionContext


class TestPlanner(object):
    def test_reports_the_table_size_it_needs(self):
        kernel = series.ExponentialKernel(2, 2, 100)
        with pytest.raises(ResourceError) as e:
            series.plan_expansion(kernel, mpf('1e-30'), 16)
        assert e.value.needed > 16

    def test_split_point_is_a_power_of_two_above_the_floor(self):
        kernel = series.BinomialKernel(2, 2, 1000)
        plan = series.plan_expansion(kernel, mpf('1e-20'), 1 << 20)
        assert plan.n & (plan.n - 1) == 0
        assert plan.n >= kernel.n_floor()
        assert plan.truncation <= mpf('1e-20') / 2

    def test_small_n_prefers_the_smaller_split(self):
        kernel = series.BinomialKernel(2, 2, 1000)
        cheap = series.plan_expansion(kernel, mpf('1e-25'), 1 << 20)
        small = series.plan_expansion(kernel, mpf('1e-25'), 1 << 20, small_n=True)
        assert small.n <= cheap.n


class TestFloatSum(object):
    def test_adds_without_cancellation_loss(self):
        terms = numpy.array([1e16, 1.0, -1e16])
        total, bound = series.float_sum(terms, numpy.zeros(3))
        assert total == 1

    def test_carries_the_per_term_bounds(self):
        terms = numpy.ones(10)
        total, bound = series.float_sum(terms, numpy.full(10, 1e-10))
        assert total == 10
        assert bound >= 2e-9


class TestExpand(object):
    def setup_method(self):
        self.ctx = PrecisionContext(50, mpf('1e-30'))

    def test_c0_is_the_reciprocal_of_zeta_two(self, table):
        kernel = series.BinomialKernel(2, 2, 0)
        result = series.expand(kernel, table, self.ctx.tol, self.ctx)
        assert abs(result.value - 6 / mp.pi ** 2) <= result.error_bound
        assert result.error_bound <= self.ctx.tol

    def test_c1_is_a_first_difference(self, table):
        kernel = series.BinomialKernel(2, 2, 1)
        result = series.expand(kernel, table, self.ctx.tol, self.ctx)
        expected = 6 / mp.pi ** 2 - 90 / mp.pi ** 4
        assert abs(result.value - expected) <= mpf('1e-30')

    def test_plain_sum_without_a_table_is_zeta(self):
        kernel = series.ExponentialKernel(2, 2, 0)
        result = series.expand(kernel, None, self.ctx.tol, self.ctx)
        assert abs(result.value - mp.pi ** 2 / 6) <= mpf('1e-30')

    def test_plain_sum_matches_direct_summation(self):
        kernel = series.ExponentialKernel(2, 4, 10)
        result = series.expand(kernel, None, mpf('1e-25'), self.ctx)
        n = 20000
        head = mp.fsum(mpf(m) ** -4 * mp.exp(-10 / mpf(m) ** 2)
                       for m in range(1, n + 1))
        tail = (mp.zeta(4, n + 1) - 10 * mp.zeta(6, n + 1)
                + 50 * mp.zeta(8, n + 1))
        assert abs(result.value - (head + tail)) <= mpf('1e-24')

    def test_complement_kernel_gives_partial_sums(self, table):
        kernel = series.ComplementKernel(2, 0, 2)
        result = series.expand(kernel, table, self.ctx.tol, self.ctx)
        # c_0 + c_1
        expected = 12 / mp.pi ** 2 - 90 / mp.pi ** 4
        assert abs(result.value - expected) <= mpf('1e-30')


class TestMoebiusTail(object):
    def setup_method(self):
        self.s = mpf(2)

    def test_matches_the_head_subtracted_from_six_over_pi_squared(self):
        table = sieve(2048)
        head = mp.fsum(mpf(table.mu(n)) / n ** 2 for n in range(1, 1025))
        tail = series.moebius_tail(table, self.s, 1024, 40)
        assert abs(tail - (6 / mp.pi ** 2 - head)) <= mpf('1e-28')

    def test_does_not_keep_the_table_alive(self):
        table = sieve(4096)
        ref = weakref.ref(table)
        series.moebius_tail(table, mpf(3), 512, 40)
        del table
        gc.collect()
        assert ref() is None

    def test_tables_with_the_same_prefix_share_a_tail(self):
        small = series.moebius_tail(sieve(1024), self.s, 256, 40)
        large = series.moebius_tail(sieve(1 << 14), self.s, 256, 40)
        assert small == large

    def test_a_cached_tail_still_needs_the_table(self):
        series.moebius_tail(sieve(2048), self.s, 2000, 40)
        with pytest.raises(ResourceError):
            series.moebius_tail(sieve(100), self.s, 2000, 40)

    def test_drops_the_oldest_tail(self, monkeypatch):
        monkeypatch.setattr(series, '_moebius_tails', {})
        monkeypatch.setattr(series, 'TAIL_CACHE_SIZE', 2)
        table = sieve(256)
        for n in (16, 32, 64):
            series.moebius_tail(table, self.s, n, 40)
        assert list(series._moebius_tails) == [(self.s, 32, 40), (self.s, 64, 40)]


class TestTailDigits(object):
    def test_refuses_to_exceed_the_ceiling(self):
        ctx = PrecisionContext(50, mpf('1e-30'), max_digits=100)
        with pytest.raises(PrecisionBudgetError):
            series.tail_digits([mpf(10) ** 300], mpf('1e-30'), 16, ctx)

    def test_rounds_up_to_a_multiple_of_ten(self):
        ctx = PrecisionContext(50, mpf('1e-30'))
        digits = series.tail_digits([mpf(10) ** 25], mpf('1e-30'), 1024, ctx)
        assert digits % 10 == 0
        assert digits >= 30 + 25


class TestGapSum(object):
    def test_tail_bound_decreases_with_the_split(self):
        bounds = [series.gap_tail_bound(2, 2, 100, n) for n in (16, 32, 64)]
        assert bounds[0] > bounds[1] > bounds[2] > 0

    def test_float_weights_match_extended_precision(self):
        n = numpy.array([16.0, 37.0, 1000.0])
        w, err = series.gap_weights(2.0, 2.0, 300, n)
        for value, bound, m in zip(w, err, n):
            exact = series.gap_weight_mp(2, 2, 300, int(m))
            assert abs(mpf(float(value)) - exact) <= 4 * mpf(float(bound)) + mpf('1e-300')

    def test_matches_the_difference_of_the_two_expansions(self, table):
        ctx = PrecisionContext(50, mpf('1e-25'))
        k = 50
        gap = series.gap_sum(2, 2, k, table, ctx.tol, ctx)
        r = series.expand(series.ExponentialKernel(2, 2, k), table, ctx.tol, ctx)
        c = series.expand(series.BinomialKernel(2, 2, k), table, ctx.tol, ctx)
        assert abs(gap.value - (r.value - c.value)) <= (
            gap.error_bound + r.error_bound + c.error_bound)
