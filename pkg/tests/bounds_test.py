"""Unit tests for the inequality checkers.
"""

import pytest
from mpmath import mp, mpf

from rieszcrit import bounds
from rieszcrit.bounds import BoundReport, PowerLaw
from rieszcrit.errors import DomainError, FitError
from rieszcrit.numerics import PrecisionContext
from rieszcrit.sweep import decade_grid, linear_grid


class TestBoundReport(object):
    def test_passes_when_every_ratio_is_at_most_one(self):
        report = BoundReport.from_ratios('x', [(1, 0.5), (2, mpf('0.9')), (3, 1)])
        assert report.passed
        assert report.samples_checked == 3
        assert report.max_ratio == 1.0
        assert report.worst == 3

    def test_fails_on_a_single_violation(self):
        report = BoundReport.from_ratios('x', [(1, 0.5), (2, 1.25)], notes=['n'])
        assert not report.passed
        assert report.worst == 2
        assert report.notes == ('n',)

    def test_empty_report_passes(self):
        report = BoundReport.from_ratios('x', [])
        assert report.passed
        assert report.worst is None


class TestRatio(object):
    def test_adds_the_error_to_the_left_side(self):
        assert bounds._ratio(mpf(-1), mpf('0.5'), mpf(3)) == mpf('0.5')

    def test_zero_right_side(self):
        assert bounds._ratio(0, 0, 0) == 0
        assert bounds._ratio(mpf('1e-40'), 0, 0) == mp.inf


class TestCorollaries(object):
    def setup_method(self):
        self.ctx = PrecisionContext(50, mpf('1e-30'))

    def test_right_side_for_the_riesz_case(self):
        x = mpf(100)
        expected = mp.sqrt(mp.pi) / 2 / mp.sqrt(x) + 1 / (mp.e * x)
        assert abs(bounds.corollary1_rhs(2, 2, x, self.ctx) - expected) <= mpf('1e-28')

    def test_corollary1_holds(self):
        assert bounds.check_corollary1(2, 2, [mpf('0.01'), 1, 100], self.ctx).passed
        assert bounds.check_corollary1(2, 8, [10], self.ctx).passed

    def test_corollary1_needs_b_above_one(self):
        with pytest.raises(DomainError):
            bounds.corollary1_rhs(2, 1, 10, self.ctx)

    def test_corollary2_holds(self, table):
        report = bounds.check_corollary2(2, 2, [1, 10, 100, 1000], table, self.ctx)
        assert report.passed
        assert report.samples_checked == 4
        assert report.name == 'corollary2(2,2)'

    def test_corollary2_right_side_at_one_hundred(self):
        expected = mp.sqrt(mp.pi) / 2 * 10 + 1 / mp.e
        assert abs(bounds.corollary2_rhs(2, 2, 100, self.ctx) - expected) <= mpf('1e-28')

    def test_corollary2_holds_over_six_decades(self, table):
        xs = decade_grid('1e-3', 1e3)
        report = bounds.check_corollary2(2, 2, xs, table, self.ctx)
        assert report.passed
        assert report.samples_checked == len(xs)

    @pytest.mark.slow
    def test_corollary2_holds_up_to_a_million(self, table):
        xs = decade_grid('1e-3', 1e6) + linear_grid(10 ** 4, 8 * 10 ** 5, 80)
        assert bounds.check_corollary2(2, 2, xs, table, self.ctx).passed

    def test_lemma1_holds(self):
        report = bounds.check_lemma1(2, 2, [10, 100], self.ctx)
        assert report.passed
        assert 0 < report.max_ratio


class TestLemmas2And3(object):
    def setup_method(self):
        self.ctx = PrecisionContext(50, mpf('1e-30'))

    @pytest.mark.parametrize('k', [1, 17, 1000])
    def test_four_terms_are_the_riesz_case_of_lemma2(self, k):
        four = bounds.lemma3_four_term(k)
        general = bounds.lemma2_bound(2, 2, k, self.ctx)
        assert abs(four - general) <= mpf('1e-25') * four

    def test_simple_bound_is_the_leading_term(self):
        k = 10 ** 12
        assert bounds.lemma3_simple(k) < bounds.lemma3_four_term(k)
        assert bounds.lemma3_four_term(k) / bounds.lemma3_simple(k) < mpf('1.0001')

    def test_lemma3_holds_for_small_k(self, table):
        report = bounds.check_lemma3(range(1, 41), table, self.ctx)
        assert report.passed
        assert report.samples_checked == 40

    @pytest.mark.slow
    def test_lemma3_holds_up_to_ten_thousand(self, table):
        assert bounds.check_lemma3(range(17, 10 ** 4 + 1), table, self.ctx).passed

    def test_lemma2_holds_for_generalised_parameters(self, table):
        for a, b in bounds.LEMMA2_PARAMS:
            assert bounds.check_lemma2(a, b, [100, 1000], table, self.ctx).passed

    def test_lemma2_needs_a_at_least_one(self):
        with pytest.raises(DomainError):
            bounds.lemma2_bound(mpf('0.5'), 2, 10, self.ctx)


class TestPowerLawFit(object):
    def test_recovers_an_exact_power_law(self):
        ks = [10, 100, 1000, 10 ** 4]
        fit = bounds.fit_power_law(ks, [2 * mpf(k) ** mpf('-1.5') for k in ks])
        assert fit.prefactor == pytest.approx(2, abs=1e-10)
        assert fit.exponent == pytest.approx(-1.5, abs=1e-10)

    def test_skips_nonpositive_samples(self):
        fit = bounds.fit_power_law([1, 2, 3, 4], [1, 0, 9, 16])
        assert fit.exponent == pytest.approx(2, abs=1e-12)

    def test_needs_three_samples(self):
        with pytest.raises(FitError):
            bounds.fit_power_law([1, 2, 3], [1, 0, 4])

    def test_difference_fit_starts_above_sixteen(self, table):
        with pytest.raises(DomainError):
            bounds.fit_difference_exponent(10, 1000, 10, table, PrecisionContext())

    @pytest.mark.slow
    def test_differences_decay_faster_than_k_to_the_minus_three_halves(self, table):
        ctx = PrecisionContext(50, mpf('1e-30'))
        fit = bounds.fit_difference_exponent(10 ** 4, 10 ** 6, 50, table, ctx)
        assert fit.exponent <= -1.40
        assert bounds.check_fit(fit).passed


class TestCheckFit(object):
    def test_accepts_a_steep_fit_under_the_bound(self):
        report = bounds.check_fit(PowerLaw(8e-4, -1.73))
        assert report.passed
        assert any('reference' in note for note in report.notes)

    def test_rejects_a_shallow_exponent(self):
        report = bounds.check_fit(PowerLaw(1e-6, -1.2))
        assert not report.passed
        assert report.worst == 'exponent'

    def test_rejects_a_curve_above_the_bound(self):
        report = bounds.check_fit(PowerLaw(10.0, -1.5))
        assert not report.passed
        assert report.worst == 'bound'


class TestLemma4(object):
    def setup_method(self):
        self.ctx = PrecisionContext(50, mpf('1e-30'))

    def test_right_side(self):
        expected = mp.sqrt(mp.pi) / 4 + 4 / mp.e ** 2
        assert abs(bounds.lemma4_rhs(1, 2) - expected) <= mpf('1e-40')

    def test_holds_on_sample_pairs(self, table):
        report = bounds.check_lemma4([(1, 2), (10, mpf('10.5')), (3, 3)], table, self.ctx)
        assert report.passed
        assert report.samples_checked == 3

    def test_holds_below_one(self, table):
        xs = decade_grid('0.01', 1, 10)
        pairs = [(x, x + 1) for x in xs] + [(x, 2 * x) for x in xs]
        assert bounds.check_lemma4(pairs, table, self.ctx).passed

    def test_holds_for_pairs_one_apart(self, table):
        pairs = [(100, 101), (mpf(1000), mpf(1000)), (10 ** 4, 10 ** 4 + 1)]
        report = bounds.check_lemma4(pairs, table, self.ctx)
        assert report.passed
        assert report.samples_checked == 3

    @pytest.mark.slow
    def test_full_suite_holds(self, table):
        report, = bounds.verify_suite('lemma4', table, self.ctx)
        assert report.passed
        assert report.samples_checked == 2 * len(decade_grid(1, 1e4))

    def test_refuses_reversed_pairs(self, table):
        with pytest.raises(DomainError):
            bounds.check_lemma4([(2, 1)], table, self.ctx)


class TestTheorem1(object):
    def test_needs_delta_above_minus_three_halves(self, table):
        with pytest.raises(DomainError):
            bounds.theorem1_witness(-1.5, 10 ** 4, table, PrecisionContext())

    @pytest.mark.slow
    def test_both_sides_are_bounded_at_minus_three_quarters(self, table):
        witness = bounds.theorem1_witness(-0.75, 10 ** 5, table, PrecisionContext())
        assert witness.bounded
        assert [d for d, _, _ in witness.decades] == [10 ** 3, 10 ** 4, 10 ** 5]

    def test_a_growing_witness_fails_the_check(self, table, monkeypatch):
        decades = ((10 ** 5, 2e-3, 1e-3), (10 ** 6, 4e-3, 2e-3))
        witness = bounds.Theorem1Witness(-1.0, decades, 0.3, 0.25, False, 2.0)
        monkeypatch.setattr(bounds, 'theorem1_witness', lambda *args: witness)
        report = bounds.check_theorem1(-1, 10 ** 6, table, PrecisionContext())
        assert not report.passed
        assert report.name == 'theorem1(delta=-1)'
        assert report.worst == 'c_k'
        assert report.max_ratio == pytest.approx(3.0)

    @pytest.mark.slow
    def test_c_k_times_k_grows(self, large_table):
        # |c_k| k grows like k^(1/4); below 10^5 the trivial zeros hide it
        report = bounds.check_theorem1(-1, 5 * 10 ** 6, large_table,
                                       PrecisionContext(), k_lo=10 ** 5)
        assert not report.passed
        assert report.max_ratio > 1.5


class TestSuites(object):
    def test_unknown_suite(self, table):
        with pytest.raises(DomainError) as e:
            bounds.verify_suite('lemma9', table, PrecisionContext())
        assert 'corollary1' in str(e.value)

    def test_quick_lemma4_suite(self, table):
        reports = bounds.verify_suite('lemma4', table, PrecisionContext(), quick=True)
        assert [r.name for r in reports] == ['lemma4']
        assert reports[0].passed

    @pytest.mark.slow
    def test_everything_holds(self, table):
        reports = bounds.verify_all(table, PrecisionContext(), quick=True)
        failed = [r.name for r in reports if not r.passed]
        assert not failed
