"""Closed-form pivot gains, margins, and threshold frontiers."""

import math

import numpy as np
import pytest

from votecost.errors import DomainError
from votecost.oracle import pivot_gain_bruteforce
from votecost.pivot import (
    ElectorateParams,
    StrategyPair,
    expected_margin,
    a_wins_expected,
    r1_closed,
    r2_closed,
    thresholds,
    turnout_means,
)
from votecost.special_fn import h


class TestElectorateParams:
    def test_derived_means(self):
        params = ElectorateParams(n=1000, p=0.2, p_a=0.6)
        assert params.x_a == pytest.approx(120.0)
        assert params.x_b == pytest.approx(80.0)
        assert params.m_a == pytest.approx(480.0)
        assert params.m_b == pytest.approx(320.0)
        assert params.total_a == pytest.approx(600.0)
        assert params.total_b == pytest.approx(400.0)
        assert params.x_a > params.x_b

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n=0.0, p=0.2, p_a=0.6),
            dict(n=-5.0, p=0.2, p_a=0.6),
            dict(n=math.inf, p=0.2, p_a=0.6),
            dict(n=10.0, p=0.0, p_a=0.6),
            dict(n=10.0, p=1.0, p_a=0.6),
            dict(n=10.0, p=0.2, p_a=0.5),
            dict(n=10.0, p=0.2, p_a=1.0),
            dict(n=10.0, p=0.2, p_a=0.4),
        ],
    )
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(DomainError):
            ElectorateParams(**kwargs)


class TestStrategyPair:
    def test_bounds(self):
        StrategyPair(0.0, 1.0)
        with pytest.raises(DomainError):
            StrategyPair(-0.1, 0.5)
        with pytest.raises(DomainError):
            StrategyPair(0.5, 1.1)


class TestClosedForms:
    def test_zero_turnout_limit(self):
        # exact at the degenerate point of the kernel itself
        assert h(0.0, 0.0) == 0.5
        # and approached by a vanishing electorate
        params = ElectorateParams(n=1e-9, p=0.5, p_a=0.6)
        s = StrategyPair(0.0, 0.0)
        assert r1_closed(params, s) == pytest.approx(0.5, abs=1e-9)
        assert r2_closed(params, s) == pytest.approx(0.5, abs=1e-9)

    def test_equal_turnout_means_equal_gains(self):
        params = ElectorateParams(n=300, p=0.3, p_a=0.6)
        # alpha_b chosen so both expected totals coincide
        alpha_a = 0.2
        alpha_b = (
            params.p * (2 * params.p_a - 1) + params.p_a * (1 - params.p) * alpha_a
        ) / ((1 - params.p) * (1 - params.p_a))
        s = StrategyPair(alpha_a, alpha_b)
        u, v = turnout_means(params, s)
        assert u == pytest.approx(v, rel=1e-14)
        assert r1_closed(params, s) == pytest.approx(r2_closed(params, s), rel=1e-13)

    def test_matches_bruteforce_at_reference_point(self):
        params = ElectorateParams(n=10, p=0.3, p_a=0.6)
        s = StrategyPair(0.5, 0.5)
        y_a, y_b = params.m_a * 0.5, params.m_b * 0.5
        for side, closed in (("A", r1_closed(params, s)), ("B", r2_closed(params, s))):
            brute = pivot_gain_bruteforce(params.x_a, params.x_b, y_a, y_b, side)
            assert abs(closed - brute.value) < 1e-10

    def test_sign_identity_randomized(self):
        # r2 - r1 carries the sign of the expected-turnout difference
        rng = np.random.default_rng(42)
        checked = 0
        for _ in range(1200):
            params = ElectorateParams(
                n=float(rng.uniform(1.0, 500.0)),
                p=float(rng.uniform(0.05, 0.95)),
                p_a=float(rng.uniform(0.51, 0.99)),
            )
            s = StrategyPair(float(rng.uniform(0, 1)), float(rng.uniform(0, 1)))
            u, v = turnout_means(params, s)
            diff = r2_closed(params, s) - r1_closed(params, s)
            if abs(u - v) > 1e-9 * params.n:
                assert math.copysign(1.0, diff) == math.copysign(1.0, u - v)
                checked += 1
            assert 0.0 < r1_closed(params, s) <= 1.0
            assert 0.0 < r2_closed(params, s) <= 1.0
        assert checked >= 1000


class TestMargin:
    def test_full_turnout(self):
        params = ElectorateParams(n=200, p=0.25, p_a=0.7)
        s = StrategyPair(1.0, 1.0)
        assert expected_margin(params, s) == pytest.approx(200 * (2 * 0.7 - 1))
        assert a_wins_expected(params, s)

    def test_partisans_only(self):
        params = ElectorateParams(n=200, p=0.25, p_a=0.7)
        s = StrategyPair(0.0, 0.0)
        assert expected_margin(params, s) == pytest.approx(200 * 0.25 * (2 * 0.7 - 1))
        assert a_wins_expected(params, s)


class TestThresholds:
    def test_strict_ordering_at_reference_point(self):
        ts = thresholds(ElectorateParams(n=5000, p=0.2, p_a=0.6))
        assert ts.ct_admissible
        assert ts.ct_upper > ts.ct_lower > ts.pa_lower > ts.ps_lower > 0.0

    def test_all_values_in_range(self):
        for n in (1.0, 50.0, 5000.0):
            ts = thresholds(ElectorateParams(n=n, p=0.3, p_a=0.55))
            for v in (ts.ct_upper, ts.ct_lower, ts.pa_lower, ts.ps_lower):
                assert 0.0 <= v <= 0.5

    def test_ct_upper_limit_small_electorate(self):
        ts = thresholds(ElectorateParams(n=1e-6, p=0.5, p_a=0.6))
        assert ts.ct_upper == pytest.approx(0.5, abs=1e-6)

    def test_admissibility_flag(self):
        assert not thresholds(ElectorateParams(n=100, p=0.9, p_a=0.9)).ct_admissible
        assert thresholds(ElectorateParams(n=100, p=0.2, p_a=0.6)).ct_admissible

    def test_ct_upper_equals_diagonal_kernel(self):
        params = ElectorateParams(n=777, p=0.23, p_a=0.64)
        ts = thresholds(params)
        assert ts.ct_upper == pytest.approx(h(params.x_a, params.x_a), rel=1e-12)
