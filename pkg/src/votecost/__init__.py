"""Equilibria and cost-regime analysis for costly plurality voting.

A polity of expected size ``n`` chooses between two alternatives; a
share ``p`` of citizens votes unconditionally, the rest vote only when
the expected benefit of being pivotal covers the voting cost ``c``.
This package computes the closed-form pivot gains, solves for every
type-symmetric equilibrium, classifies costs into the five-regime
landscape (including the coin-toss window a designer must avoid), and
verifies all closed forms against brute-force and Monte Carlo oracles.
"""

from .equilibria import (
    DEFAULT_SOLVER_CONFIG,
    Equilibrium,
    EquilibriumKind,
    SolverConfig,
    Winner,
    all_swipe_exists,
    enumerate_equilibria,
    find_h_peak,
    no_queue_exists,
    solve_coin_toss,
    solve_partial_absenteeism,
    solve_partial_saturation,
)
from .errors import ConvergenceError, DomainError, TruncationLimitError, VoteCostError
from .oracle import (
    BruteForceGain,
    MonteCarloEstimate,
    OracleConfig,
    WinStats,
    pivot_gain_bruteforce,
    poisson_environment_pivot,
    simulate_election,
    tie_rule,
    utility_bruteforce,
)
from .pivot import (
    ElectorateParams,
    StrategyPair,
    ThresholdSet,
    a_wins_expected,
    expected_margin,
    r1_closed,
    r2_closed,
    thresholds,
)
from .regime import (
    RegimeReport,
    SweepSpec,
    SweepTable,
    classify,
    coin_toss_interval,
    recommend_cost,
    sweep_bounds,
)
from .special_fn import (
    DEFAULT_EVAL_CONFIG,
    EvalConfig,
    bessel_i0,
    bessel_i1,
    g,
    g_leading,
    h,
    h_ray_leading,
    hyp0f1_1,
    hyp0f1_2,
    i_sign,
    scaled_i0,
    scaled_i1,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # errors
    "VoteCostError",
    "DomainError",
    "ConvergenceError",
    "TruncationLimitError",
    # special functions
    "EvalConfig",
    "DEFAULT_EVAL_CONFIG",
    "hyp0f1_1",
    "hyp0f1_2",
    "bessel_i0",
    "bessel_i1",
    "scaled_i0",
    "scaled_i1",
    "g",
    "h",
    "i_sign",
    "g_leading",
    "h_ray_leading",
    # pivot layer
    "ElectorateParams",
    "StrategyPair",
    "ThresholdSet",
    "r1_closed",
    "r2_closed",
    "expected_margin",
    "a_wins_expected",
    "thresholds",
    # oracles
    "OracleConfig",
    "BruteForceGain",
    "MonteCarloEstimate",
    "WinStats",
    "tie_rule",
    "pivot_gain_bruteforce",
    "utility_bruteforce",
    "simulate_election",
    "poisson_environment_pivot",
    # equilibria
    "SolverConfig",
    "DEFAULT_SOLVER_CONFIG",
    "EquilibriumKind",
    "Winner",
    "Equilibrium",
    "solve_coin_toss",
    "find_h_peak",
    "solve_partial_absenteeism",
    "no_queue_exists",
    "solve_partial_saturation",
    "all_swipe_exists",
    "enumerate_equilibria",
    # regime layer
    "RegimeReport",
    "SweepSpec",
    "SweepTable",
    "classify",
    "coin_toss_interval",
    "recommend_cost",
    "sweep_bounds",
]
