"""Regime classification, the coin-toss window, and threshold sweeps."""

import math

import numpy as np
import pytest

from votecost.equilibria import EquilibriumKind
from votecost.errors import DomainError
from votecost.pivot import ElectorateParams, thresholds
from votecost.regime import (
    SweepSpec,
    classify,
    coin_toss_interval,
    recommend_cost,
    sweep_bounds,
)

REF = ElectorateParams(n=500, p=0.2, p_a=0.6)
REF_TS = thresholds(REF)


def case_costs(ts):
    return {
        1: ts.ct_upper * 1.5,
        2: 0.5 * (ts.ct_upper + ts.ct_lower),
        3: 0.5 * (ts.ct_lower + ts.pa_lower),
        4: 0.5 * (ts.pa_lower + ts.ps_lower),
        5: 0.5 * ts.ps_lower,
    }


class TestClassify:
    def test_five_cases(self):
        for want, c in case_costs(REF_TS).items():
            report = classify(REF, c)
            assert report.case_index == want
            assert report.avoid == (want == 2)
            assert not any("predicts" in note for note in report.notes)

    def test_case_one_contents(self):
        report = classify(REF, REF_TS.ct_upper * 1.5)
        kinds = {eq.kind for eq in report.equilibria}
        assert EquilibriumKind.NO_QUEUE in kinds
        assert kinds <= {EquilibriumKind.NO_QUEUE, EquilibriumKind.PARTIAL_ABSENTEEISM}

    def test_case_five_contents(self):
        report = classify(REF, 0.5 * REF_TS.ps_lower)
        assert [eq.kind for eq in report.equilibria] == [EquilibriumKind.ALL_SWIPE]

    def test_avoid_tracks_coin_toss(self):
        for c in case_costs(REF_TS).values():
            report = classify(REF, c)
            has_ct = any(eq.kind is EquilibriumKind.COIN_TOSS for eq in report.equilibria)
            assert report.avoid == has_ct

    def test_inadmissible_parameters_fall_back(self):
        params = ElectorateParams(n=500, p=0.9, p_a=0.9)
        report = classify(params, 0.01)
        assert report.case_index == 0
        assert not report.thresholds.ct_admissible
        assert any("pre-asymptotic" in note for note in report.notes)

    def test_unordered_small_population_falls_back(self):
        # frontiers are not yet ordered here (exponential floor still high)
        params = ElectorateParams(n=100, p=0.05, p_a=0.52)
        ts = thresholds(params)
        assert not (ts.ct_upper > ts.ct_lower > ts.pa_lower > ts.ps_lower)
        report = classify(params, 0.05)
        assert report.case_index == 0

    def test_random_draw_consistency(self):
        rng = np.random.default_rng(123)
        cases_seen = set()
        for _ in range(200):
            params = ElectorateParams(
                n=float(np.exp(rng.uniform(np.log(2000), np.log(3000)))),
                p=float(rng.uniform(0.05, 0.5)),
                p_a=float(rng.uniform(0.52, 0.9)),
            )
            ts = thresholds(params)
            lo = max(ts.ps_lower * 0.3, 1e-12)
            c = float(np.exp(rng.uniform(np.log(lo), np.log(0.49))))
            report = classify(params, c)
            cases_seen.add(report.case_index)
            assert not any("predicts" in note for note in report.notes)
        assert {1, 2, 3}.issubset(cases_seen)

    def test_rejects_nonpositive_cost(self):
        with pytest.raises(DomainError):
            classify(REF, 0.0)


class TestCoinTossInterval:
    def test_absent_when_partisans_outnumber(self):
        assert coin_toss_interval(ElectorateParams(n=100, p=0.9, p_a=0.9)) is None

    def test_matches_thresholds(self):
        interval = coin_toss_interval(REF)
        assert interval == (REF_TS.ct_lower, REF_TS.ct_upper)

    def test_width_shrinks_toward_admissibility_limit(self):
        # fixed p_a, raising p pushes p * p_a toward 1 - p_a: width falls
        widths = []
        for p in (0.3, 0.45, 0.55, 0.65):
            lo, hi = coin_toss_interval(ElectorateParams(n=2000, p=p, p_a=0.6))
            widths.append(hi - lo)
        assert all(b < a for a, b in zip(widths, widths[1:]))

    def test_low_partisanship_family_is_finite_and_positive(self):
        # the wide-window family: small partisan share across many p_a
        for p_a in (0.52, 0.75, 0.90, 0.99):
            for n in np.geomspace(100, 1e5, 7):
                interval = coin_toss_interval(ElectorateParams(n=float(n), p=0.01, p_a=p_a))
                assert interval is not None
                lo, hi = interval
                assert 0.0 < lo < hi <= 0.5


class TestRecommendCost:
    def test_no_window_returns_minimum(self):
        params = ElectorateParams(n=100, p=0.9, p_a=0.9)
        assert recommend_cost(params, 0.01) == 0.01

    def test_below_window_unchanged(self):
        c_min = REF_TS.ct_lower * 0.5
        assert recommend_cost(REF, c_min) == c_min

    def test_above_window_unchanged(self):
        c_min = REF_TS.ct_upper * 2.0
        assert recommend_cost(REF, c_min) == c_min

    def test_inside_window_bumped_to_ceiling(self):
        c_min = 0.5 * (REF_TS.ct_lower + REF_TS.ct_upper)
        out = recommend_cost(REF, c_min)
        assert out == pytest.approx(REF_TS.ct_upper, abs=1e-11)
        assert out >= REF_TS.ct_upper
        lo, hi = coin_toss_interval(REF)
        assert not (lo < out < hi)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            recommend_cost(REF, 0.0)


class TestSweep:
    def test_sweep_spec_validation(self):
        with pytest.raises(DomainError):
            SweepSpec(p=0.2, p_a=0.6, n_grid=())
        with pytest.raises(DomainError):
            SweepSpec(p=0.2, p_a=0.6, n_grid=(10.0, 10.0))
        with pytest.raises(DomainError):
            SweepSpec(p=0.2, p_a=0.6, n_grid=(10.0, 20.0), quantities=("bogus",))
        with pytest.raises(DomainError):
            SweepSpec(p=1.2, p_a=0.6, n_grid=(10.0, 20.0))

    def test_columns_finite_positive_eventually_decreasing(self):
        grid = tuple(float(x) for x in np.geomspace(100, 1e5, 60))
        for p, p_a in ((0.2, 0.52), (0.2, 0.6), (0.2, 0.75), (0.2, 0.83)):
            table = sweep_bounds(SweepSpec(p=p, p_a=p_a, n_grid=grid))
            for name, col in table.columns.items():
                assert np.all(np.isfinite(col))
                assert np.all(col >= 0.0)
                onset = table.onset[name]
                assert onset < len(grid) - 2
                tail = col[onset:]
                # strictly decreasing while representable (exponentially
                # small frontiers may underflow to 0 at the far end)
                assert np.all(np.diff(tail[tail > 0.0]) < 0.0)
                if np.any(tail == 0.0):
                    first_zero = int(np.argmax(tail == 0.0))
                    assert np.all(tail[first_zero:] == 0.0)

    def test_ct_upper_slope_is_minus_half(self):
        grid = tuple(float(x) for x in np.geomspace(1e3, 1e5, 40))
        table = sweep_bounds(SweepSpec(p=0.2, p_a=0.6, n_grid=grid, quantities=("ct_upper",)))
        slope = np.polyfit(np.log(table.n), np.log(table.columns["ct_upper"]), 1)[0]
        assert abs(slope - (-0.5)) < 0.05

    def test_pa_lower_decay_rate(self):
        grid = tuple(float(x) for x in np.linspace(4000, 20000, 33))
        table = sweep_bounds(SweepSpec(p=0.2, p_a=0.6, n_grid=grid, quantities=("pa_lower",)))
        rate = np.polyfit(table.n, np.log(table.columns["pa_lower"]), 1)[0]
        want = -0.2 * (1.0 - 2.0 * math.sqrt(0.6 * 0.4))
        assert abs(rate - want) / abs(want) < 0.1
