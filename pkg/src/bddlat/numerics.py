"""Theta series, the Mazo-Odlyzko counting bound, and BDD hardness thresholds.

All functions here work in floating point. The relative-distance threshold
``alpha_star(p, C)`` is the infimum of alpha for which

    min_{tau > 0} exp(tau / (2 alpha)^p) * theta_p(tau) <= 2^(1 - 1/C)

(threshold 2 when ``C`` is infinite).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels

INF = math.inf

DEFAULT_REL_TOL = 1e-15
DEFAULT_TOL = 1e-6
ALPHA_CEILING = 64.0
# Search step for the log-tau golden section; fixes the minimum to ~1e-16 relative.
_GOLDEN_XTOL = 1e-10


class DomainError(ValueError):
    """Argument outside the domain where a quantity is defined."""


class NoBracketError(DomainError):
    """Monotone search could not bracket the requested crossing."""


@dataclass(frozen=True)
class AlphaResult:
    """Bracketed value of alpha*_{p,C}."""

    value: float
    bracket_lo: float
    bracket_hi: float
    tol: float

    def as_dict(self):
        return {
            "value": self.value,
            "bracket_lo": self.bracket_lo,
            "bracket_hi": self.bracket_hi,
            "tol": self.tol,
        }


def _check_p(p):
    p = float(p)
    if math.isnan(p) or p < 1:
        raise DomainError(f"norm order must be >= 1, got {p}")
    if math.isinf(p):
        raise DomainError("theta-based quantities need a finite norm order")
    return p


def _threshold(C):
    """Right-hand side 2^(1 - 1/C); 2 for C = inf."""
    C = float(C)
    if math.isnan(C) or C <= 1:
        raise DomainError(f"rank ratio C must exceed 1, got {C}")
    if math.isinf(C):
        return 2.0
    return 2.0 ** (1.0 - 1.0 / C)


def theta(p, tau, rel_tol=DEFAULT_REL_TOL):
    """Theta_p(tau) = sum over integers z of exp(-tau |z|^p).

    Summed as 1 + 2 sum_{z >= 1}, stopping once the next term drops below
    ``rel_tol`` times the running sum.
    """
    p = _check_p(p)
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    if not 0 < rel_tol < 1:
        raise DomainError("rel_tol must lie in (0, 1)")
    return _kernels.theta_sum(p, float(tau), float(rel_tol))


def theta1_closed(tau):
    """Closed form of Theta_1: 2 / (1 - e^-tau) - 1. Dominates Theta_p for p >= 1."""
    if not tau > 0:
        raise DomainError(f"tau must be positive, got {tau}")
    return 2.0 / -math.expm1(-tau) - 1.0


def _min_log(p, slope, rel_tol=DEFAULT_REL_TOL):
    """min over tau of slope * tau + ln Theta_p(tau), and the minimizer."""
    tau, val = _kernels.golden_min(p, slope, rel_tol, _GOLDEN_XTOL)
    return val, tau


def mo_objective(p, alpha, rel_tol=DEFAULT_REL_TOL):
    """min_{tau > 0} exp(tau / (2 alpha)^p) * Theta_p(tau)."""
    p = _check_p(p)
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    slope = (2.0 * alpha) ** -p
    return math.exp(_min_log(p, slope, rel_tol)[0])


def mo_argmin(p, alpha, rel_tol=DEFAULT_REL_TOL):
    """The tau attaining ``mo_objective(p, alpha)``."""
    p = _check_p(p)
    return _min_log(p, (2.0 * alpha) ** -p, rel_tol)[1]


def mo_bound(p, r, n, rel_tol=DEFAULT_REL_TOL):
    """Mazo-Odlyzko bound min_tau exp(tau r^p) Theta_p(tau)^n on N_p(Z^n, r, 0)."""
    p = _check_p(p)
    if not r > 0:
        raise DomainError(f"radius must be positive, got {r}")
    if n < 1:
        raise DomainError("dimension must be >= 1")
    val, _ = _min_log(p, float(r) ** p / n, rel_tol)
    return math.exp(n * val)


def alpha_star(p, C=INF, tol=DEFAULT_TOL, ceiling=ALPHA_CEILING):
    """alpha*_{p,C} by bisection on alpha.

    ``mo_objective`` is strictly decreasing in alpha and exceeds 2 at
    alpha = 1/2, so the bracket starts at [1/2, hi] with hi found by doubling
    up to ``ceiling``.
    """
    p = _check_p(p)
    thr = _threshold(C)
    if not tol > 0:
        raise DomainError("tol must be positive")
    log_thr = math.log(thr)

    def above(alpha):
        return _min_log(p, (2.0 * alpha) ** -p)[0] > log_thr

    lo, hi = 0.5, 1.0
    while above(hi):
        lo, hi = hi, 2.0 * hi
        if hi > ceiling:
            raise NoBracketError(
                f"objective stays above {thr:.6g} for alpha <= {ceiling} (p={p}, C={C})"
            )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if above(mid):
            lo = mid
        else:
            hi = mid
    return AlphaResult(0.5 * (lo + hi), lo, hi, tol)


def crossover_p(target_alpha, C=INF, tol=DEFAULT_TOL, p_max=1024.0):
    """The p at which alpha*_{p,C} equals ``target_alpha``.

    Uses that alpha*_{p,C} decreases in p and tends to 1/2.
    """
    if not target_alpha > 0.5:
        raise DomainError("target alpha must exceed 1/2")
    inner = tol * 1e-3

    def alpha_at(p):
        return alpha_star(p, C, tol=inner).value

    lo = 1.0
    if alpha_at(lo) <= target_alpha:
        raise NoBracketError(f"alpha*_(1,C) is already <= {target_alpha}")
    hi = 2.0
    while alpha_at(hi) > target_alpha:
        lo, hi = hi, 2.0 * hi
        if hi > p_max:
            raise NoBracketError(f"no crossing of {target_alpha} for p <= {p_max}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if alpha_at(mid) > target_alpha:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def closed_form_g(sigma, tau):
    """g(sigma, tau) = exp(tau / sigma) * (2 / (1 - e^-tau) - 1)."""
    if not (sigma > 0 and tau > 0):
        raise DomainError("sigma and tau must be positive")
    return math.exp(tau / sigma) * theta1_closed(tau)


def g_star(sigma):
    """g at its minimizing tau = arcsinh(sigma)."""
    return closed_form_g(sigma, math.asinh(sigma))


def sigma_star(C=INF, tol=1e-12):
    """The unique sigma with g_star(sigma) = 2^(1 - 1/C); g_star decreases strictly."""
    thr = _threshold(C)
    if not tol > 0:
        raise DomainError("tol must be positive")
    lo, hi = 1.0, 2.0
    while g_star(lo) <= thr:
        lo *= 0.5
    while g_star(hi) > thr:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            raise NoBracketError("sigma* overflows (C too close to 1)")
    while hi - lo > tol * max(1.0, lo):
        mid = 0.5 * (lo + hi)
        if g_star(mid) > thr:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def alpha_upper_bound(p, C=INF):
    """Closed-form bound (1/2) * sigma*_C^(1/p) >= alpha*_{p,C}."""
    p = _check_p(p)
    return 0.5 * sigma_star(C) ** (1.0 / p)


def alt_upper_bound(p, C=INF):
    """Bound from fixing tau = ln p in the objective:

    (1/2) * (ln p / ln(2^(1-1/C) (p-1)/(p+1)))^(1/p).
    """
    p = float(p)
    if not p > 1 or math.isinf(p):
        raise DomainError("alt_upper_bound needs finite p > 1")
    arg = _threshold(C) * (p - 1.0) / (p + 1.0)
    if arg <= 1.0:
        raise DomainError(
            f"2^(1-1/C)(p-1)/(p+1) = {arg:.6g} <= 1; bound undefined at p={p}, C={C}"
        )
    return 0.5 * (math.log(p) / math.log(arg)) ** (1.0 / p)

