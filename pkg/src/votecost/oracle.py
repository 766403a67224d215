"""Ground truth: truncated Poisson sums and Monte Carlo election runs.

Nothing here touches the closed forms in :mod:`votecost.pivot`; the two
routes are kept independent so each can check the other.

Brute force.  The pivot gain for side A is the quadruple sum over
partisan counts (a, b) ~ Poisson(x_a), Poisson(x_b) and non-partisan
voter counts (r, s) ~ Poisson(y_a), Poisson(y_b) of

    P(a) P(b) P(r) P(s) * [f(a+r+1, b+s) - f(a+r, b+s)]

with f the tie rule (1 / 0.5 / 0 for ahead / tied / behind).  Each index
is truncated at the smallest K whose upper tail mass is below
``tail_eps``, so the dropped mass over all four indices is at most
4 * tail_eps and the f-difference is bounded by 1/2; the reported error
bound 4 * tail_eps is conservative.  The sum itself is evaluated by
regrouping over the vote totals a+r and b+s (a discrete convolution of
the truncated probability vectors); this is an exact reorganization of
the same finitely many terms, not a distributional identity.

Monte Carlo.  Randomness comes from numpy's ``Generator`` over the
``PCG64`` bit generator seeded directly with the configured seed, so a
fixed seed and config reproduce results bit for bit (for a fixed numpy
version; see README).  ``simulate_election`` realizes the election as
described by the turnout model: partisan counts are Poisson, the
non-partisan voter counts are Binomial over the rounded class sizes.
``poisson_environment_pivot`` instead draws all four counts Poisson,
matching the environment a player conditions on, and is therefore a
consistent estimator of the brute-force pivot gain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import DomainError, TruncationLimitError
from .pivot import ElectorateParams, StrategyPair

__all__ = [
    "OracleConfig",
    "BruteForceGain",
    "MonteCarloEstimate",
    "WinStats",
    "tie_rule",
    "pivot_gain_bruteforce",
    "utility_bruteforce",
    "simulate_election",
    "poisson_environment_pivot",
    "class_sizes",
]


@dataclass(frozen=True)
class OracleConfig:
    """Truncation and sampling knobs for the oracle routines.

    tail_eps:
        Poisson upper-tail mass dropped per index in the brute-force sums.
    trials:
        Monte Carlo sample count.
    seed:
        64-bit seed for the PCG64 bit generator.
    cell_cap:
        Upper bound on the truncation-box volume (product of the four
        per-index lengths) accepted by the brute-force routines.
    """

    tail_eps: float = 1e-13
    trials: int = 100_000
    seed: int = 20240717
    cell_cap: float = 1e9

    def __post_init__(self):
        if not (0.0 < self.tail_eps < 1e-6):
            raise DomainError(f"tail_eps must be in (0, 1e-6), got {self.tail_eps!r}")
        if self.trials < 1:
            raise DomainError(f"trials must be >= 1, got {self.trials!r}")
        if not (0 <= int(self.seed) < 2**64):
            raise DomainError(f"seed must fit in 64 unsigned bits, got {self.seed!r}")
        if not self.cell_cap > 0:
            raise DomainError(f"cell_cap must be > 0, got {self.cell_cap!r}")


DEFAULT_ORACLE_CONFIG = OracleConfig()

_SIDES = ("A", "B")


def tie_rule(m: int, n: int) -> float:
    """Payoff of the first side when it polls m votes against n: 1, 1/2, or 0."""
    if m > n:
        return 1.0
    if m == n:
        return 0.5
    return 0.0


def _upper_index(mean: float, tail_eps: float) -> int:
    """Smallest K with P(Poisson(mean) > K) < tail_eps."""
    if mean <= 0.0:
        return 0
    return int(stats.poisson.ppf(1.0 - tail_eps, mean))


def _pmf_vector(mean: float, k_max: int) -> np.ndarray:
    if mean <= 0.0:
        out = np.zeros(k_max + 1)
        out[0] = 1.0
        return out
    return stats.poisson.pmf(np.arange(k_max + 1), mean)


def _total_pmfs(
    x_a: float,
    x_b: float,
    y_a: float,
    y_b: float,
    cfg: OracleConfig,
    index_scale: float = 1.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Truncated pmf vectors of the two vote totals a+r and b+s.

    ``index_scale`` inflates every truncation index (used by the
    truncation-soundness check); the cell cap applies to the raw
    four-index box.
    """
    for name, mean in (("x_a", x_a), ("x_b", x_b), ("y_a", y_a), ("y_b", y_b)):
        if not (mean >= 0.0 and math.isfinite(mean)):
            raise DomainError(f"{name} must be a finite mean >= 0, got {mean!r}")
    ks = [_upper_index(m, cfg.tail_eps) for m in (x_a, x_b, y_a, y_b)]
    if index_scale != 1.0:
        ks = [int(math.ceil(k * index_scale)) for k in ks]
    cells = math.prod(k + 1 for k in ks)
    if cells > cfg.cell_cap:
        raise TruncationLimitError(
            f"truncation box of {cells:.3g} cells exceeds cell_cap={cfg.cell_cap:.3g}"
        )
    pmf_a, pmf_b, pmf_r, pmf_s = (
        _pmf_vector(m, k) for m, k in zip((x_a, x_b, y_a, y_b), ks)
    )
    dist_a = np.convolve(pmf_a, pmf_r)
    dist_b = np.convolve(pmf_b, pmf_s)
    return dist_a, dist_b


@dataclass(frozen=True)
class BruteForceGain:
    """A truncated-sum pivot gain together with its truncation error bound."""

    value: float
    error_bound: float


def pivot_gain_bruteforce(
    x_a: float,
    x_b: float,
    y_a: float,
    y_b: float,
    side: str = "A",
    cfg: OracleConfig | None = None,
    index_scale: float = 1.0,
) -> BruteForceGain:
    """Quadruple-sum pivot gain for ``side`` at the given Poisson means.

    The gain from one extra own-side vote is nonzero exactly when the
    opponent total minus the own total is 0 or 1, each contributing 1/2.
    """
    cfg = cfg or DEFAULT_ORACLE_CONFIG
    if side not in _SIDES:
        raise DomainError(f"side must be one of {_SIDES}, got {side!r}")
    dist_a, dist_b = _total_pmfs(x_a, x_b, y_a, y_b, cfg, index_scale)
    own, other = (dist_a, dist_b) if side == "A" else (dist_b, dist_a)
    n = len(own)
    other_pad = np.zeros(n + 1)
    m = min(len(other), n + 1)
    other_pad[:m] = other[:m]
    # P(T_other - T_own = 0) + P(T_other - T_own = 1)
    p_event = float(np.dot(own, other_pad[:n]) + np.dot(own, other_pad[1 : n + 1]))
    return BruteForceGain(value=0.5 * p_event, error_bound=4.0 * cfg.tail_eps)


def utility_bruteforce(
    side: str,
    vote: int,
    x_a: float,
    x_b: float,
    y_a: float,
    y_b: float,
    c: float,
    cfg: OracleConfig | None = None,
) -> float:
    """Perceived utility of a ``side`` supporter who votes (1) or abstains (0).

    Voting adds one vote to the own total and costs ``c``; the payoff is
    the tie rule applied to the two totals.  Satisfies
    u(1) - u(0) = pivot gain - c up to twice the truncation bound.
    """
    cfg = cfg or DEFAULT_ORACLE_CONFIG
    if side not in _SIDES:
        raise DomainError(f"side must be one of {_SIDES}, got {side!r}")
    if vote not in (0, 1):
        raise DomainError(f"vote must be 0 or 1, got {vote!r}")
    if not (c > 0.0):
        raise DomainError(f"voting cost must be > 0, got {c!r}")
    dist_a, dist_b = _total_pmfs(x_a, x_b, y_a, y_b, cfg)
    own, other = (dist_a, dist_b) if side == "A" else (dist_b, dist_a)
    n = len(own)
    # E f(T_own + vote, T_other) = sum_m own[m] (P(T_other < m + vote)
    #                                            + P(T_other = m + vote) / 2)
    cum = np.cumsum(other)
    m = np.arange(n) + vote
    below = np.where(m > 0, cum[np.minimum(m - 1, len(other) - 1)], 0.0)
    at = np.where(m < len(other), other[np.minimum(m, len(other) - 1)], 0.0)
    value = float(np.dot(own, below + 0.5 * at))
    return value - (c if vote else 0.0)


@dataclass(frozen=True)
class MonteCarloEstimate:
    """A Monte Carlo point estimate with its standard error."""

    value: float
    se: float
    trials: int


@dataclass(frozen=True)
class WinStats:
    """Monte Carlo election statistics.

    ``p_a_wins``/``p_tie``/``p_b_wins`` are the strict-majority, exact-tie
    and strict-minority frequencies; the underlying counts are included
    and partition ``trials_used`` exactly.  ``pivot_a`` and ``pivot_b``
    are the mean tie-rule gains from one extra A (resp. B) vote, i.e.
    half the frequency of trials in which that extra vote changes the
    outcome value.
    """

    p_a_wins: float
    p_tie: float
    p_b_wins: float
    se_a_wins: float
    pivot_a: float
    se_pivot_a: float
    pivot_b: float
    se_pivot_b: float
    trials_used: int
    n_a_wins: int
    n_tie: int
    n_b_wins: int


def _rng(cfg: OracleConfig) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(cfg.seed)))


def _binomial_share_se(count: int, trials: int) -> float:
    phat = count / trials
    return math.sqrt(phat * (1.0 - phat) / trials)


def simulate_election(
    params: ElectorateParams, s: StrategyPair, cfg: OracleConfig | None = None
) -> WinStats:
    """Simulate ``trials`` elections under the finite-population turnout model.

    Partisan counts are Poisson(x_a) and Poisson(x_b); non-partisan voter
    counts are Binomial(round(m_a), alpha_a) and Binomial(round(m_b),
    alpha_b).  Non-integer class sizes are rounded to the nearest integer
    (Python ``round``, ties to even); this discretization is a convention
    of this simulator, surfaced via :func:`class_sizes`.
    """
    cfg = cfg or DEFAULT_ORACLE_CONFIG
    rng = _rng(cfg)
    trials = cfg.trials
    size_a, size_b = class_sizes(params)
    part_a = rng.poisson(params.x_a, trials)
    part_b = rng.poisson(params.x_b, trials)
    vote_a = rng.binomial(size_a, s.alpha_a, trials)
    vote_b = rng.binomial(size_b, s.alpha_b, trials)
    margin = (part_a + vote_a) - (part_b + vote_b)

    n_a = int(np.count_nonzero(margin > 0))
    n_t = int(np.count_nonzero(margin == 0))
    n_b = trials - n_a - n_t
    # one extra A vote matters iff margin in {0, -1}; one extra B vote iff {0, 1}
    n_piv_a = n_t + int(np.count_nonzero(margin == -1))
    n_piv_b = n_t + int(np.count_nonzero(margin == 1))
    q_a = n_piv_a / trials
    q_b = n_piv_b / trials
    return WinStats(
        p_a_wins=n_a / trials,
        p_tie=n_t / trials,
        p_b_wins=n_b / trials,
        se_a_wins=_binomial_share_se(n_a, trials),
        pivot_a=0.5 * q_a,
        se_pivot_a=0.5 * _binomial_share_se(n_piv_a, trials),
        pivot_b=0.5 * q_b,
        se_pivot_b=0.5 * _binomial_share_se(n_piv_b, trials),
        trials_used=trials,
        n_a_wins=n_a,
        n_tie=n_t,
        n_b_wins=n_b,
    )


def class_sizes(params: ElectorateParams) -> tuple[int, int]:
    """Rounded non-partisan class sizes used by :func:`simulate_election`."""
    return round(params.m_a), round(params.m_b)


def _poisson_pivot(
    x_a: float, x_b: float, y_a: float, y_b: float, side: str, cfg: OracleConfig
) -> MonteCarloEstimate:
    if side not in _SIDES:
        raise DomainError(f"side must be one of {_SIDES}, got {side!r}")
    rng = _rng(cfg)
    trials = cfg.trials
    t_a = rng.poisson(x_a, trials) + rng.poisson(y_a, trials)
    t_b = rng.poisson(x_b, trials) + rng.poisson(y_b, trials)
    diff = (t_b - t_a) if side == "A" else (t_a - t_b)
    n_piv = int(np.count_nonzero((diff == 0) | (diff == 1)))
    return MonteCarloEstimate(
        value=0.5 * (n_piv / trials),
        se=0.5 * _binomial_share_se(n_piv, trials),
        trials=trials,
    )


def poisson_environment_pivot(
    params: ElectorateParams,
    s: StrategyPair,
    side: str = "A",
    cfg: OracleConfig | None = None,
) -> MonteCarloEstimate:
    """Monte Carlo pivot gain with all four counts Poisson.

    This matches the environment a voter conditions on (every group's
    count is Poisson with its mean), so the estimate is consistent for
    the brute-force pivot gain and for the closed forms.
    """
    cfg = cfg or DEFAULT_ORACLE_CONFIG
    y_a = params.m_a * s.alpha_a
    y_b = params.m_b * s.alpha_b
    return _poisson_pivot(params.x_a, params.x_b, y_a, y_b, side, cfg)
