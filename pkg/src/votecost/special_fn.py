r"""Scalar special functions underlying the pivot-probability analysis.

Everything in this module reduces to the two confluent limit series

    F1(w) = sum_{k>=0} w^k / (k!)^2
    F2(w) = sum_{k>=0} w^k / (k! (k+1)!)        (= dF1/dw)

the modified Bessel functions they generate,

    I0(t) = F1(t^2/4),        I1(t) = (t/2) F2(t^2/4),

and two derived threshold kernels:

    g(z)     = (I0(z) + I1(z)) e^{-z}
    h(xa, z) = (F1(xa z) + xa F2(xa z)) e^{-xa-z} / 2

``g`` is strictly decreasing with g(0) = 1 and bounds the voting-cost
interval on which an interior mixed equilibrium exists; ``h`` bounds the
cost intervals of the boundary equilibria.  Both kernels must be
evaluated for arguments up to ~1e7 without overflow, which rules out the
raw series.  The factorization used throughout is

    e^{-u-v} I_k(2 sqrt(u v)) = e^{-(sqrt(u)-sqrt(v))^2} [e^{-t} I_k(t)],
    t = 2 sqrt(u v),

whose left-hand exponent can be huge while the right-hand one is always
<= 0.  The scaled factors e^{-t} I_k(t) come from the series for
t <= ``scaled_switch`` and otherwise from the divergent large-argument
expansion

    e^{-t} I0(t) ~ (2 pi t)^{-1/2} (1 + 1/(8t) + 9/(128 t^2) + ...)
    e^{-t} I1(t) ~ (2 pi t)^{-1/2} (1 - 3/(8t) - 15/(128 t^2) - ...)

truncated adaptively at its smallest term.

All functions are pure; concurrent use is unrestricted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
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
]

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class EvalConfig:
    """Tolerances and switch points for series/asymptotic evaluation.

    series_rel_tol:
        Relative truncation tolerance for the power series.  Summation
        stops once three consecutive terms fall below this fraction of
        the running sum (guards against plateaus of accidentally small
        terms).
    scaled_switch:
        Argument above which the scaled Bessel factors switch from
        series-times-exp to the asymptotic expansion.  The default 30
        keeps the first omitted asymptotic term below 1e-12 relative.
    asym_max_terms:
        Hard cap on asymptotic-series terms (the expansion diverges).
    """

    series_rel_tol: float = 1e-15
    scaled_switch: float = 30.0
    asym_max_terms: int = 20

    def __post_init__(self):
        if not (0.0 < self.series_rel_tol < 1e-6):
            raise DomainError(
                f"series_rel_tol must be in (0, 1e-6), got {self.series_rel_tol!r}"
            )
        if not self.scaled_switch > 0.0:
            raise DomainError(f"scaled_switch must be > 0, got {self.scaled_switch!r}")
        if self.asym_max_terms < 1:
            raise DomainError(f"asym_max_terms must be >= 1, got {self.asym_max_terms!r}")


DEFAULT_EVAL_CONFIG = EvalConfig()


def _require_nonneg_finite(name: str, x: float) -> None:
    # "not (x >= 0)" also rejects NaN
    if not (x >= 0.0) or math.isinf(x):
        raise DomainError(f"{name} requires a finite argument >= 0, got {x!r}")


def hyp0f1_1(z: float, cfg: EvalConfig | None = None) -> float:
    """F1(z) = sum_{k>=0} z^k / (k!)^2 for finite z >= 0.

    Plain double-precision summation; overflows to inf for z >~ 1.26e5.
    Use the scaled Bessel variants when the argument can be large.
    """
    cfg = cfg or DEFAULT_EVAL_CONFIG
    _require_nonneg_finite("hyp0f1_1", z)
    total = 1.0
    term = 1.0
    k = 0
    quiet = 0
    while quiet < 3:
        k += 1
        term *= z / (k * k)
        total += term
        if not math.isfinite(total):
            return math.inf
        quiet = quiet + 1 if term <= cfg.series_rel_tol * total else 0
    return total


def hyp0f1_2(z: float, cfg: EvalConfig | None = None) -> float:
    """F2(z) = sum_{k>=0} z^k / (k! (k+1)!) for finite z >= 0."""
    cfg = cfg or DEFAULT_EVAL_CONFIG
    _require_nonneg_finite("hyp0f1_2", z)
    total = 1.0
    term = 1.0
    k = 0
    quiet = 0
    while quiet < 3:
        k += 1
        term *= z / (k * (k + 1))
        total += term
        if not math.isfinite(total):
            return math.inf
        quiet = quiet + 1 if term <= cfg.series_rel_tol * total else 0
    return total


def bessel_i0(t: float, cfg: EvalConfig | None = None) -> float:
    """Modified Bessel I0(t) = F1(t^2/4), t >= 0.  Unscaled; may overflow."""
    if not (t >= 0.0):
        raise DomainError(f"bessel_i0 requires t >= 0, got {t!r}")
    w = 0.25 * t * t
    if math.isinf(w):
        return math.inf
    return hyp0f1_1(w, cfg)


def bessel_i1(t: float, cfg: EvalConfig | None = None) -> float:
    """Modified Bessel I1(t) = (t/2) F2(t^2/4), t >= 0.  Unscaled; may overflow."""
    if not (t >= 0.0):
        raise DomainError(f"bessel_i1 requires t >= 0, got {t!r}")
    w = 0.25 * t * t
    if math.isinf(w):
        return math.inf
    return 0.5 * t * hyp0f1_2(w, cfg)


def _asym_scaled(t: float, four_nu_sq: float, cfg: EvalConfig) -> float:
    # e^{-t} I_nu(t) for large t:  (2 pi t)^{-1/2} sum_k u_k  with
    # u_0 = 1,  u_k = u_{k-1} ((2k-1)^2 - 4 nu^2) / (8 t k).
    # The series diverges; stop just before the smallest |term|.
    total = 1.0
    term = 1.0
    prev = 1.0
    for k in range(1, cfg.asym_max_terms):
        term *= ((2 * k - 1) ** 2 - four_nu_sq) / (8.0 * t * k)
        if abs(term) >= prev:
            break
        total += term
        prev = abs(term)
        if abs(term) <= cfg.series_rel_tol * abs(total):
            break
    return total / math.sqrt(2.0 * math.pi * t)


def scaled_i0(t: float, cfg: EvalConfig | None = None) -> float:
    """e^{-t} I0(t), overflow-free for all representable t >= 0."""
    cfg = cfg or DEFAULT_EVAL_CONFIG
    if not (t >= 0.0):
        raise DomainError(f"scaled_i0 requires t >= 0, got {t!r}")
    if t <= cfg.scaled_switch:
        return hyp0f1_1(0.25 * t * t, cfg) * math.exp(-t)
    return _asym_scaled(t, 0.0, cfg)


def scaled_i1(t: float, cfg: EvalConfig | None = None) -> float:
    """e^{-t} I1(t), overflow-free for all representable t >= 0."""
    cfg = cfg or DEFAULT_EVAL_CONFIG
    if not (t >= 0.0):
        raise DomainError(f"scaled_i1 requires t >= 0, got {t!r}")
    if t <= cfg.scaled_switch:
        return 0.5 * t * hyp0f1_2(0.25 * t * t, cfg) * math.exp(-t)
    return _asym_scaled(t, 4.0, cfg)


def g(z: float, cfg: EvalConfig | None = None) -> float:
    """(I0(z) + I1(z)) e^{-z}: continuous, g(0) = 1, strictly decreasing to 0."""
    if not (z >= 0.0):
        raise DomainError(f"g requires z >= 0, got {z!r}")
    return scaled_i0(z, cfg) + scaled_i1(z, cfg)


def h(x_a: float, z: float, cfg: EvalConfig | None = None) -> float:
    """(F1(x_a z) + x_a F2(x_a z)) e^{-x_a-z} / 2, evaluated without overflow.

    Equals the expected tie-rule gain from one extra vote for a side whose
    vote total is Poisson(x_a) against an opponent polling Poisson(z).
    Identities used: F1(w) = I0(2 sqrt(w)), F2(w) = I1(2 sqrt(w))/sqrt(w),
    then the shifted-exponent factorization from the module docstring.
    """
    if not (x_a >= 0.0) or not (z >= 0.0):
        raise DomainError(f"h requires x_a >= 0 and z >= 0, got {x_a!r}, {z!r}")
    t = 2.0 * math.sqrt(x_a * z)
    if t == 0.0:
        # F1(0) = F2(0) = 1
        return 0.5 * (1.0 + x_a) * math.exp(-(x_a + z))
    damp = math.exp(-((math.sqrt(x_a) - math.sqrt(z)) ** 2))
    s0 = scaled_i0(t, cfg)
    s1 = scaled_i1(t, cfg)
    return 0.5 * (s0 + math.sqrt(x_a / z) * s1) * damp


def _i_sign_core(x_a: float, z: float, cfg: EvalConfig | None = None) -> float:
    # (x_a - z) F1(x_a z) - x_a F2(x_a z), scaled by e^{-t} instead of
    # e^{-x_a-z}: same sign everywhere, but free of the catastrophic
    # underflow of the fully damped form when z is far from x_a.
    if z == 0.0:
        return 0.0
    t = 2.0 * math.sqrt(x_a * z)
    return (x_a - z) * scaled_i0(t, cfg) - math.sqrt(x_a / z) * scaled_i1(t, cfg)


def i_sign(x_a: float, z: float, cfg: EvalConfig | None = None) -> float:
    """Damped slope probe for h(x_a, .): sign equals sign of dh/dz for z > 0.

    Returns [(x_a - z) F1(x_a z) - x_a F2(x_a z)] e^{-x_a-z}.  Only the
    sign and zeros are contractual; the magnitude carries the damping
    factor so the value never overflows.
    """
    if not (x_a > 0.0):
        raise DomainError(f"i_sign requires x_a > 0, got {x_a!r}")
    if not (z >= 0.0):
        raise DomainError(f"i_sign requires z >= 0, got {z!r}")
    core = _i_sign_core(x_a, z, cfg)
    return core * math.exp(-((math.sqrt(x_a) - math.sqrt(z)) ** 2))


def g_leading(z: float) -> float:
    """Leading large-z term of g: sqrt(2 / (pi z)).  Diagnostics only."""
    if not (z > 0.0):
        raise DomainError(f"g_leading requires z > 0, got {z!r}")
    return math.sqrt(2.0 / (math.pi * z))


def h_ray_leading(x_a: float, q: float) -> float:
    """Leading term of h(x_a, q x_a) for large x_a along a fixed ray q.

    (sqrt(q) + 1) / (4 sqrt(pi x_a) q^{3/4}) * exp(-(sqrt(q) - 1)^2 x_a).
    Diagnostics only; the exponent is written in its cancellation-free
    form (q + 1 - 2 sqrt(q) = (sqrt(q) - 1)^2).
    """
    if not (x_a > 0.0):
        raise DomainError(f"h_ray_leading requires x_a > 0, got {x_a!r}")
    if not (q > 0.0):
        raise DomainError(f"h_ray_leading requires q > 0, got {q!r}")
    rq = math.sqrt(q)
    prefactor = (rq + 1.0) / (4.0 * math.sqrt(math.pi * x_a) * q**0.75)
    return prefactor * math.exp(-((rq - 1.0) ** 2) * x_a)
