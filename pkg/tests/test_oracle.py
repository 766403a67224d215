"""Brute-force sums and Monte Carlo simulation against analytic anchors."""

import numpy as np
import pytest
from scipy import stats

from votecost.equilibria import solve_coin_toss
from votecost.errors import DomainError, TruncationLimitError
from votecost.oracle import (
    OracleConfig,
    _poisson_pivot,
    class_sizes,
    pivot_gain_bruteforce,
    poisson_environment_pivot,
    simulate_election,
    tie_rule,
    utility_bruteforce,
)
from votecost.pivot import ElectorateParams, StrategyPair, r1_closed, r2_closed


class TestTieRule:
    def test_values(self):
        assert tie_rule(3, 2) == 1.0
        assert tie_rule(2, 2) == 0.5
        assert tie_rule(0, 1) == 0.0


class TestBruteForce:
    def test_zero_means(self):
        for side in ("A", "B"):
            out = pivot_gain_bruteforce(0, 0, 0, 0, side)
            assert out.value == 0.5
            assert out.error_bound == pytest.approx(4e-13)

    def test_symmetric_point(self):
        a = pivot_gain_bruteforce(1.0, 1.0, 0.0, 0.0, "A")
        b = pivot_gain_bruteforce(1.0, 1.0, 0.0, 0.0, "B")
        assert a.value == pytest.approx(b.value, abs=1e-14)

    def test_balanced_totals_match_across_sides(self):
        # x_a + y_a = x_b + y_b makes both sides' gains coincide
        a = pivot_gain_bruteforce(1.8, 1.2, 0.7, 1.3, "A")
        b = pivot_gain_bruteforce(1.8, 1.2, 0.7, 1.3, "B")
        assert abs(a.value - b.value) < 1e-10

    def test_truncation_soundness(self):
        base = pivot_gain_bruteforce(3.0, 2.0, 4.0, 1.0, "A")
        doubled = pivot_gain_bruteforce(3.0, 2.0, 4.0, 1.0, "A", index_scale=2.0)
        assert abs(base.value - doubled.value) < base.error_bound

    def test_matches_literal_quadruple_loop(self):
        # the convolution evaluation is a regrouping of the four nested
        # sums; spell the sums out once and compare
        means = (1.3, 0.8, 0.6, 1.1)
        kmax = 30
        pmfs = [stats.poisson.pmf(np.arange(kmax + 1), m) for m in means]
        total = 0.0
        for a in range(kmax + 1):
            for b in range(kmax + 1):
                for r in range(kmax + 1):
                    for s in range(kmax + 1):
                        weight = pmfs[0][a] * pmfs[1][b] * pmfs[2][r] * pmfs[3][s]
                        total += weight * (tie_rule(a + r + 1, b + s) - tie_rule(a + r, b + s))
        fast = pivot_gain_bruteforce(*means, "A")
        assert abs(total - fast.value) < 1e-12

    def test_cell_cap(self):
        with pytest.raises(TruncationLimitError):
            pivot_gain_bruteforce(50, 50, 50, 50, "A", OracleConfig(cell_cap=1e3))

    def test_rejects_bad_args(self):
        with pytest.raises(DomainError):
            pivot_gain_bruteforce(-1.0, 0, 0, 0, "A")
        with pytest.raises(DomainError):
            pivot_gain_bruteforce(1.0, 0, 0, 0, "C")


class TestUtility:
    def test_lone_voter(self):
        assert utility_bruteforce("A", 1, 0, 0, 0, 0, 0.1) == pytest.approx(0.9)
        assert utility_bruteforce("A", 0, 0, 0, 0, 0, 0.1) == pytest.approx(0.5)

    def test_difference_is_gain_minus_cost(self):
        means = (1.8, 1.2, 0.7, 1.3)
        for side in ("A", "B"):
            d = utility_bruteforce(side, 1, *means, 0.05) - utility_bruteforce(
                side, 0, *means, 0.05
            )
            gain = pivot_gain_bruteforce(*means, side)
            assert abs(d + 0.05 - gain.value) < 1e-9

    def test_matches_closed_form_difference(self):
        params = ElectorateParams(n=10, p=0.3, p_a=0.6)
        s = StrategyPair(0.5, 0.5)
        y_a, y_b = params.m_a * 0.5, params.m_b * 0.5
        d = utility_bruteforce("A", 1, params.x_a, params.x_b, y_a, y_b, 0.07)
        d -= utility_bruteforce("A", 0, params.x_a, params.x_b, y_a, y_b, 0.07)
        assert abs(d - (r1_closed(params, s) - 0.07)) < 1e-9

    def test_rejects_bad_cost(self):
        with pytest.raises(DomainError):
            utility_bruteforce("A", 1, 1, 1, 1, 1, 0.0)
        with pytest.raises(DomainError):
            utility_bruteforce("A", 2, 1, 1, 1, 1, 0.1)


class TestSimulate:
    def test_counts_partition_trials(self):
        params = ElectorateParams(n=30, p=0.3, p_a=0.6)
        w = simulate_election(params, StrategyPair(0.5, 0.5), OracleConfig(trials=7777, seed=3))
        assert w.n_a_wins + w.n_tie + w.n_b_wins == w.trials_used == 7777
        assert w.p_a_wins == w.n_a_wins / 7777
        assert 0.0 <= w.p_tie <= 1.0

    def test_deterministic_for_fixed_seed(self):
        params = ElectorateParams(n=50, p=0.2, p_a=0.6)
        s = StrategyPair(0.3, 0.8)
        cfg = OracleConfig(trials=20_000, seed=99)
        assert simulate_election(params, s, cfg) == simulate_election(params, s, cfg)

    def test_partisan_majority_dominates(self):
        # nearly everyone is partisan: the majority side essentially always wins
        params = ElectorateParams(n=400, p=0.999, p_a=0.7)
        w = simulate_election(params, StrategyPair(0.0, 0.0), OracleConfig(trials=20_000, seed=11))
        assert w.p_a_wins > 1.0 - 3.0 * max(w.se_a_wins, 1e-4) - 1e-3

    def test_all_swipe_margin_is_partisan_noise_only(self):
        # deterministic non-partisan turnout: win odds computable from the
        # two partisan Poisson distributions alone
        params = ElectorateParams(n=60, p=0.3, p_a=0.6)
        size_a, size_b = class_sizes(params)
        shift = size_a - size_b
        k = np.arange(0, 200)
        pmf_a = stats.poisson.pmf(k, params.x_a)
        pmf_b = stats.poisson.pmf(k, params.x_b)
        # P(A wins) = P(pois_a - pois_b > -shift)
        want = float(
            sum(
                pmf_a[i] * pmf_b[: max(0, min(200, i + shift))].sum()
                for i in range(200)
            )
        )
        w = simulate_election(params, StrategyPair(1.0, 1.0), OracleConfig(trials=200_000, seed=17))
        assert w.p_a_wins == pytest.approx(want, abs=3.5 * w.se_a_wins)

    def test_se_scales_with_trials(self):
        params = ElectorateParams(n=20, p=0.3, p_a=0.55)
        s = StrategyPair(0.5, 0.5)
        w_small = simulate_election(params, s, OracleConfig(trials=10_000, seed=5))
        w_large = simulate_election(params, s, OracleConfig(trials=1_000_000, seed=5))
        ratio = w_small.se_a_wins / w_large.se_a_wins
        assert 8.0 <= ratio <= 12.5

    def test_pivot_estimates_consistent_at_coin_toss(self):
        # the simulator draws binomial (not Poisson) non-partisan turnout, so
        # its pivot estimate carries an O(alpha * c) discretization offset
        # relative to the indifference level; at this sample size 3 se covers it
        params = ElectorateParams(n=200, p=0.2, p_a=0.6)
        c = 0.0445
        eq = solve_coin_toss(params, c)
        assert eq is not None
        w = simulate_election(params, eq.strategies, OracleConfig(trials=1_000, seed=12))
        assert abs(w.pivot_a - c) < 3.0 * w.se_pivot_a
        assert abs(w.pivot_b - c) < 3.0 * w.se_pivot_b


class TestPoissonEnvironmentPivot:
    def test_zero_means_exact_half(self):
        est = _poisson_pivot(0.0, 0.0, 0.0, 0.0, "A", OracleConfig(trials=500, seed=1))
        assert est.value == 0.5
        assert est.se == 0.0

    def test_matches_bruteforce(self):
        # params realizing means x_a=2, x_b=1, y_a=1, y_b=2
        params = ElectorateParams(n=12, p=0.25, p_a=2.0 / 3.0)
        s = StrategyPair(1.0 / 6.0, 2.0 / 3.0)
        assert params.x_a == pytest.approx(2.0)
        assert params.x_b == pytest.approx(1.0)
        cfg = OracleConfig(trials=1_000_000, seed=2024)
        for side in ("A", "B"):
            est = poisson_environment_pivot(params, s, side, cfg)
            brute = pivot_gain_bruteforce(2.0, 1.0, 1.0, 2.0, side)
            assert abs(est.value - brute.value) < 3.0 * est.se

    def test_matches_closed_form(self):
        params = ElectorateParams(n=50, p=0.2, p_a=0.6)
        s = StrategyPair(0.3, 0.8)
        cfg = OracleConfig(trials=1_000_000, seed=31)
        est_a = poisson_environment_pivot(params, s, "A", cfg)
        est_b = poisson_environment_pivot(params, s, "B", cfg)
        assert abs(est_a.value - r1_closed(params, s)) < 3.0 * est_a.se
        assert abs(est_b.value - r2_closed(params, s)) < 3.0 * est_b.se


class TestOracleConfig:
    def test_validation(self):
        with pytest.raises(DomainError):
            OracleConfig(tail_eps=0.0)
        with pytest.raises(DomainError):
            OracleConfig(tail_eps=1e-3)
        with pytest.raises(DomainError):
            OracleConfig(trials=0)
        with pytest.raises(DomainError):
            OracleConfig(seed=-1)
