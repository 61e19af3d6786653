import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from ddmine.datamodel import DifferentialDependency, DifferentialFunction, Interval
from ddmine.sampling import (
    SamplePlan,
    combine_dd_sets,
    draw_sample,
    draw_sample_ids,
    error_rates,
    expected_error_counts,
    filter_dds,
    hypergeom_pmf,
    num_samples,
    p_missed,
    p_unwanted,
    solve_sample_size,
)


def exact_pmf(N, M, n, k):
    if k < max(0, n - (N - M)) or k > min(M, n):
        return Fraction(0)
    return Fraction(math.comb(M, k) * math.comb(N - M, n - k), math.comb(N, n))


def iv(lo, hi):
    return Interval(lo, hi)


def dd(lhs_attr, lhs_iv, rhs_attr, rhs_iv, support=0.0):
    return DifferentialDependency(
        lhs=DifferentialFunction.of({lhs_attr: lhs_iv}),
        rhs_attr=rhs_attr,
        rhs_interval=rhs_iv,
        support=support,
    )


class TestPmf:
    def test_small_exact(self):
        assert hypergeom_pmf(4, 2, 2, 1) == pytest.approx(2 / 3)

    def test_infeasible_k(self):
        assert hypergeom_pmf(10, 3, 5, 4) == 0.0
        assert hypergeom_pmf(10, 8, 5, 1) == 0.0  # k < n - (N - M)

    def test_normalization(self):
        for N, M, n in [(20, 7, 9), (50, 25, 10), (8, 0, 3)]:
            total = sum(hypergeom_pmf(N, M, n, k) for k in range(0, n + 1))
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_against_exact_fractions(self):
        for N, M, n in [(12, 5, 6), (30, 11, 13)]:
            for k in range(0, n + 1):
                assert hypergeom_pmf(N, M, n, k) == pytest.approx(
                    float(exact_pmf(N, M, n, k)), rel=1e-10, abs=1e-12
                )

    def test_bad_parameters(self):
        with pytest.raises(ValueError):
            hypergeom_pmf(4, 5, 2, 1)
        with pytest.raises(ValueError):
            hypergeom_pmf(4, 2, 5, 1)


class TestMissedUnwanted:
    def test_theta_zero(self):
        assert p_missed(100, 10, 20, 0.0) == 0.0
        assert p_unwanted(100, 10, 20, 0.0) == 1.0

    def test_all_marked(self):
        # every pair supports the dependency: it can never fall below theta
        assert p_missed(50, 50, 10, 0.5) == pytest.approx(0.0, abs=1e-12)

    def test_none_marked(self):
        assert p_missed(50, 0, 10, 0.1) == pytest.approx(1.0)

    def test_enumerated_case(self):
        # theta*Ns = 1 exactly: only k = 0 counts as missed
        assert p_missed(4, 2, 2, 0.5) == pytest.approx(1 / 6)
        assert p_unwanted(4, 2, 2, 0.5) == pytest.approx(5 / 6)

    def test_complementarity_sweep(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            N = int(rng.integers(2, 400))
            M = int(rng.integers(0, N + 1))
            Ns = int(rng.integers(1, N + 1))
            theta = float(rng.random())
            total = p_missed(N, M, Ns, theta) + p_unwanted(N, M, Ns, theta)
            assert abs(total - 1.0) <= 1e-12

    def test_monotone_in_m(self):
        vals = [p_missed(60, M, 20, 0.2) for M in range(0, 61)]
        assert all(a >= b - 1e-12 for a, b in zip(vals, vals[1:]))


class TestSolver:
    def test_reported_sample_sizes(self):
        assert abs(solve_sample_size(10000, 10, 0.0005, 0.05) - 3941) <= 5
        assert abs(solve_sample_size(10000, 10, 0.0001, 0.05) - 2588) <= 5
        assert abs(solve_sample_size(10000, 1, 0.0001, 0.05) - 9501) <= 5

    def test_boundary_property(self):
        for N, M, theta, target in [(10000, 10, 0.0005, 0.05), (500, 5, 0.01, 0.1)]:
            ns = solve_sample_size(N, M, theta, target)
            assert p_missed(N, M, ns, theta) <= target
            if ns > 1:
                assert p_missed(N, M, ns - 1, theta) > target

    def test_infeasible(self):
        with pytest.raises(ValueError):
            solve_sample_size(10, 0, 0.5, 0.05)


class TestNumSamples:
    def test_reported_values(self):
        assert num_samples(0.10, 0.90) == 22
        assert num_samples(0.01, 0.90) == 230
        assert num_samples(0.5, 0.5) == 1

    def test_boundaries_rejected(self):
        for rate, cov in [(0.0, 0.5), (1.0, 0.5), (0.5, 0.0), (0.5, 1.0)]:
            with pytest.raises(ValueError):
                num_samples(rate, cov)


class TestPlanType:
    def test_validation(self):
        with pytest.raises(ValueError):
            SamplePlan(N=10, Ns=11, ns=1, seed=0)
        with pytest.raises(ValueError):
            SamplePlan(N=10, Ns=5, ns=0, seed=0)
        assert SamplePlan(N=10, Ns=5, ns=2, seed=0).rate == 0.5


class TestDraw:
    def test_exhaustive_sample(self):
        n = 6
        pairs = draw_sample(n, 15, seed=3)
        assert sorted(pairs) == list(combinations(range(n), 2))

    def test_deterministic(self):
        a = draw_sample_ids(30, 100, seed=42)
        b = draw_sample_ids(30, 100, seed=42)
        assert np.array_equal(a, b)
        c = draw_sample_ids(30, 100, seed=43)
        assert not np.array_equal(a, c)

    def test_distinct_sorted_in_range(self):
        ids = draw_sample_ids(25, 200, seed=1)
        assert len(set(ids.tolist())) == 200
        assert np.all(np.diff(ids) > 0)
        assert ids[0] >= 1 and ids[-1] <= 25 * 24 // 2

    def test_too_large(self):
        with pytest.raises(ValueError):
            draw_sample_ids(4, 7, seed=0)

    def test_inclusion_frequency(self):
        # any fixed pair appears with frequency Ns/N across many draws
        n, Ns, runs = 12, 20, 400
        N = n * (n - 1) // 2
        target_id = 17
        hits = sum(
            target_id in set(draw_sample_ids(n, Ns, seed=s).tolist())
            for s in range(runs)
        )
        p = Ns / N
        sigma = math.sqrt(runs * p * (1 - p))
        assert abs(hits - runs * p) <= 3 * sigma


class TestCombination:
    def test_hull_of_two(self):
        s = combine_dd_sets([
            [dd(0, iv(1, 1), 1, iv(0, 0), support=0.4)],
            [dd(0, iv(1, 1), 1, iv(1, 1), support=0.6)],
        ])
        combined = s.combined_dds()
        assert len(combined) == 1
        assert combined[0].rhs_interval == iv(0, 1)
        assert s.combined[0].file_count == 2
        assert s.combined[0].mean_support == pytest.approx(0.5)

    def test_single_set_identity(self):
        one = [dd(0, iv(0, 0), 1, iv(0, 2), support=0.3)]
        s = combine_dd_sets([one])
        assert s.combined_dds()[0].rhs_interval == iv(0, 2)
        assert s.combined[0].file_count == 1

    def test_hull_of_three(self):
        s = combine_dd_sets([
            [dd(0, iv(0, 0), 1, iv(0, 1))],
            [dd(0, iv(0, 0), 1, iv(2, 2))],
            [dd(0, iv(0, 0), 1, iv(0, 3))],
        ])
        assert s.combined_dds()[0].rhs_interval == iv(0, 3)

    def test_hull_contains_all_and_is_achieved(self):
        intervals = [iv(1, 2), iv(0, 1), iv(3, 4)]
        s = combine_dd_sets([[dd(0, iv(0, 0), 1, w)] for w in intervals])
        hull = s.combined_dds()[0].rhs_interval
        assert all(hull.contains_interval(w) for w in intervals)
        assert hull.lo in {w.lo for w in intervals}
        assert hull.hi in {w.hi for w in intervals}

    def test_empty_input(self):
        with pytest.raises(ValueError):
            combine_dd_sets([])


class TestErrorRates:
    def test_missed_and_unwanted(self):
        f1 = dd(0, iv(0, 0), 1, iv(0, 1))
        f2 = dd(0, iv(2, 2), 1, iv(0, 3))
        f3 = dd(0, iv(1, 1), 1, iv(0, 2))
        err_m, err_uw = error_rates([f1, f2], [f1, f3])
        assert (err_m, err_uw) == (0.5, 0.5)

    def test_identical(self):
        f1 = dd(0, iv(0, 0), 1, iv(0, 1))
        assert error_rates([f1], [f1]) == (0.0, 0.0)

    def test_rates_can_exceed_one(self):
        f1 = dd(0, iv(0, 0), 1, iv(0, 1))
        f2 = dd(0, iv(1, 1), 1, iv(0, 1))
        f3 = dd(0, iv(2, 2), 1, iv(0, 1))
        err_m, err_uw = error_rates([f1], [f1, f2, f3])
        assert (err_m, err_uw) == (0.0, 2.0)

    def test_interval_change_counts_both_ways(self):
        ref = [dd(0, iv(0, 0), 1, iv(0, 2))]
        got = [dd(0, iv(0, 0), 1, iv(0, 1))]
        assert error_rates(ref, got) == (1.0, 1.0)

    def test_empty_reference(self):
        with pytest.raises(ValueError):
            error_rates([], [dd(0, iv(0, 0), 1, iv(0, 1))])


class TestExpectedCounts:
    def test_single_wanted(self):
        e_m, e_uw = expected_error_counts([(40, True)], N=100, Ns=30, theta=0.3)
        assert e_m == pytest.approx(p_missed(100, 40, 30, 0.3))
        assert e_uw == 0.0

    def test_saturated_dd_never_missed(self):
        e_m, _ = expected_error_counts([(100, True)], N=100, Ns=30, theta=0.3)
        assert e_m == pytest.approx(0.0, abs=1e-12)

    def test_mixture_matches_direct_sum(self):
        dds = [(5, False), (40, True), (70, True), (10, False)]
        e_m, e_uw = expected_error_counts(dds, N=100, Ns=25, theta=0.3)
        assert e_m == pytest.approx(
            p_missed(100, 40, 25, 0.3) + p_missed(100, 70, 25, 0.3)
        )
        assert e_uw == pytest.approx(
            p_unwanted(100, 5, 25, 0.3) + p_unwanted(100, 10, 25, 0.3)
        )

    def test_bare_counts_classified_by_theta(self):
        e_m, e_uw = expected_error_counts([40, 5], N=100, Ns=25, theta=0.3)
        assert e_m == pytest.approx(p_missed(100, 40, 25, 0.3))
        assert e_uw == pytest.approx(p_unwanted(100, 5, 25, 0.3))


class TestFilters:
    def make_set(self):
        return combine_dd_sets([
            [dd(0, iv(0, 0), 1, iv(0, 0), support=0.5)],
            [dd(0, iv(0, 0), 1, iv(1, 1), support=0.3)],
            [dd(0, iv(1, 1), 1, iv(0, 1), support=0.01)],
        ])

    def test_filecount(self):
        s = self.make_set()
        kept = filter_dds(s, "filecount", 2)
        assert [d.rhs_interval for d in kept] == [iv(0, 1)]
        assert len(filter_dds(s, "filecount", 1)) == 2

    def test_intervalratio_drops_narrow_halves(self):
        # widths 1 and 1 against a combined width of 2: ratio 0.5
        s = self.make_set()
        hull_lhs = DifferentialFunction.of({0: iv(0, 0)})
        kept = filter_dds(s, "intervalratio", 0.6)
        assert all(d.lhs != hull_lhs for d in kept)
        kept_all = filter_dds(s, "intervalratio", 0.5)
        assert len(kept_all) == 2

    def test_support_zero_keeps_all(self):
        s = self.make_set()
        assert len(filter_dds(s, "support", 0.0)) == 2

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            filter_dds(self.make_set(), "bogus", 1)
