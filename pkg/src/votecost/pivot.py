"""Electorate parameters, closed-form pivot gains, and cost thresholds.

The electorate splits into partisans (always vote) and non-partisans
(vote with side-specific probabilities alpha_a, alpha_b).  Writing

    u = x_a + m_a * alpha_a        expected A vote total
    v = x_b + m_b * alpha_b        expected B vote total

the expected tie-rule gain from one extra A vote is r1 = h(v, u) and
from one extra B vote is r2 = h(u, v), with ``h`` from
:mod:`votecost.special_fn`.  Both lie in (0, 1/2].

``thresholds`` packages the four cost frontiers that organize the
equilibrium landscape for a given electorate:

    ct_upper = g(2 x_a) / 2              mixed-equilibrium ceiling
    ct_lower = g(2 n (1 - p_a)) / 2      mixed-equilibrium floor
    pa_lower = h(x_a, x_b)               absenteeism / no-queue floor
    ps_lower = h(n (1 - p_a), n p_a)     saturation floor (all-swipe ceiling)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .special_fn import EvalConfig, g, h

__all__ = [
    "ElectorateParams",
    "StrategyPair",
    "ThresholdSet",
    "turnout_means",
    "r1_closed",
    "r2_closed",
    "expected_margin",
    "a_wins_expected",
    "thresholds",
]


@dataclass(frozen=True)
class ElectorateParams:
    """Expected population size ``n``, partisan share ``p``, A share ``p_a``.

    ``n`` is a positive real (a mean, not a head count); ``p`` in (0, 1);
    ``p_a`` in (1/2, 1) so that A is the ex-ante majority side.
    """

    n: float
    p: float
    p_a: float

    def __post_init__(self):
        if not (self.n > 0.0 and math.isfinite(self.n)):
            raise DomainError(f"n must be a finite positive real, got {self.n!r}")
        if not (0.0 < self.p < 1.0):
            raise DomainError(f"p must lie in (0, 1), got {self.p!r}")
        if not (0.5 < self.p_a < 1.0):
            raise DomainError(f"p_a must lie in (1/2, 1), got {self.p_a!r}")

    @property
    def x_a(self) -> float:
        """Mean number of A partisans: n * p * p_a."""
        return self.n * self.p * self.p_a

    @property
    def x_b(self) -> float:
        """Mean number of B partisans: n * p * (1 - p_a)."""
        return self.n * self.p * (1.0 - self.p_a)

    @property
    def m_a(self) -> float:
        """Mean number of non-partisan A supporters: n * (1 - p) * p_a."""
        return self.n * (1.0 - self.p) * self.p_a

    @property
    def m_b(self) -> float:
        """Mean number of non-partisan B supporters: n * (1 - p) * (1 - p_a)."""
        return self.n * (1.0 - self.p) * (1.0 - self.p_a)

    @property
    def total_a(self) -> float:
        """Mean number of all A supporters: n * p_a."""
        return self.n * self.p_a

    @property
    def total_b(self) -> float:
        """Mean number of all B supporters: n * (1 - p_a)."""
        return self.n * (1.0 - self.p_a)


@dataclass(frozen=True)
class StrategyPair:
    """Voting probabilities of non-partisan A and B supporters."""

    alpha_a: float
    alpha_b: float

    def __post_init__(self):
        if not (0.0 <= self.alpha_a <= 1.0):
            raise DomainError(f"alpha_a must lie in [0, 1], got {self.alpha_a!r}")
        if not (0.0 <= self.alpha_b <= 1.0):
            raise DomainError(f"alpha_b must lie in [0, 1], got {self.alpha_b!r}")


def turnout_means(params: ElectorateParams, s: StrategyPair) -> tuple[float, float]:
    """Expected vote totals (u, v) for sides A and B."""
    u = params.x_a + params.m_a * s.alpha_a
    v = params.x_b + params.m_b * s.alpha_b
    return u, v


def r1_closed(
    params: ElectorateParams, s: StrategyPair, cfg: EvalConfig | None = None
) -> float:
    """Expected tie-rule gain from one extra A vote at strategies ``s``."""
    u, v = turnout_means(params, s)
    return h(v, u, cfg)


def r2_closed(
    params: ElectorateParams, s: StrategyPair, cfg: EvalConfig | None = None
) -> float:
    """Expected tie-rule gain from one extra B vote at strategies ``s``."""
    u, v = turnout_means(params, s)
    return h(u, v, cfg)


def expected_margin(params: ElectorateParams, s: StrategyPair) -> float:
    """Expected A-minus-B vote margin: n p_a (p + (1-p) a_A) - n (1-p_a)(p + (1-p) a_B)."""
    u, v = turnout_means(params, s)
    return u - v


def a_wins_expected(params: ElectorateParams, s: StrategyPair) -> bool:
    """True when the expected vote margin favors A strictly."""
    return expected_margin(params, s) > 0.0


@dataclass(frozen=True)
class ThresholdSet:
    """The four cost frontiers for a fixed electorate.

    All values lie in (0, 1/2].  ``ct_admissible`` records whether the
    mean A-partisan count is at most the mean count of all B supporters
    (x_a <= n (1 - p_a)); the mixed equilibrium can only exist then.
    For large electorates with ``ct_admissible`` the frontiers order as
    ct_upper >= ct_lower >= pa_lower >= ps_lower; the ordering is a
    large-population property, checked per parameter point, not assumed.
    """

    ct_upper: float
    ct_lower: float
    pa_lower: float
    ps_lower: float
    ct_admissible: bool


def thresholds(params: ElectorateParams, cfg: EvalConfig | None = None) -> ThresholdSet:
    """Evaluate the four cost frontiers at ``params``."""
    return ThresholdSet(
        ct_upper=0.5 * g(2.0 * params.x_a, cfg),
        ct_lower=0.5 * g(2.0 * params.total_b, cfg),
        pa_lower=h(params.x_a, params.x_b, cfg),
        ps_lower=h(params.total_b, params.total_a, cfg),
        ct_admissible=params.x_a <= params.total_b,
    )
