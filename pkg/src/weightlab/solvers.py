"""Scalar transcendental equations behind the sharp constants.

Everything is solved by bracketed bisection: the functions are monotone on
the chosen brackets, so certification is just a residual check at the end.
No library special functions are involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError

__all__ = [
    "RootResult",
    "bisect",
    "gamma_log",
    "gamma_entropy_roots",
    "eps_minus",
    "gehring_sharp_eps",
    "gehring_dim_n_eps",
    "good_lambda_params",
    "good_lambda_verify",
    "p_gehring_via_one",
    "funny_bound",
    "funny_bound_log",
]

RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    bracket: tuple[float, float]
    iterations: int


def bisect(f, lo: float, hi: float, max_iter: int = 600) -> RootResult:
    """Bisection on [lo, hi] assuming a sign change; runs to float exhaustion.

    Stops early once the midpoint residual is far below RESIDUAL_TOL, else
    continues until the bracket has collapsed to adjacent floats.  Raises if
    the endpoints do not bracket a root.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return RootResult(lo, 0.0, (lo, hi), 0)
    if fhi == 0.0:
        return RootResult(hi, 0.0, (lo, hi), 0)
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise ParameterError(f"no sign change on bracket [{lo}, {hi}]")
    a, b, fa = lo, hi, flo
    it = 0
    while it < max_iter:
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        fm = f(mid)
        it += 1
        if fm == 0.0:
            return RootResult(mid, 0.0, (lo, hi), it)
        if abs(fm) < 1e-15 and (b - a) < 1e-13 * max(1.0, abs(mid)):
            return RootResult(mid, fm, (lo, hi), it)
        if math.copysign(1.0, fm) == math.copysign(1.0, fa):
            a, fa = mid, fm
        else:
            b = mid
    root = 0.5 * (a + b)
    return RootResult(root, f(root), (lo, hi), it)


def _expand_up(f, start: float, max_doublings: int = 2000) -> float:
    """Smallest start*2^k with f >= 0, assuming f eventually positive."""
    hi = start
    for _ in range(max_doublings):
        if f(hi) >= 0.0:
            return hi
        hi *= 2.0
    raise ParameterError("failed to bracket a root by doubling")


def _small_root(rhs: float) -> RootResult:
    """Root in (0, 1) of t - log t = rhs, solved in s = log t coordinates.

    The root sits near e^{1 - rhs}.  Linear bisection from the subnormal
    floor stalls at 2^-600 after its iteration budget, losing all relative
    accuracy for rhs beyond ~400; in log scale the bracket [-744.4, 0]
    collapses to full relative precision for every representable root.
    """
    g = lambda s: math.exp(s) - s - rhs
    res = bisect(g, -744.4, 0.0, max_iter=1200)
    t = math.exp(res.root)
    return RootResult(t, t - math.log(t) - rhs, (0.0, 1.0), res.iterations)


def gamma_log(q: float) -> RootResult:
    """Root in (0, 1) of t - log t = 1 + log q; requires q > 1.

    The left side decreases from +inf to 1 on (0, 1], so a root below 1
    exists exactly when 1 + log q > 1.
    """
    if not (q > 1.0 and math.isfinite(q)):
        raise ParameterError(f"gamma_log needs q > 1, got {q}")
    rhs = 1.0 + math.log(q)
    if rhs > 744.0:
        raise ParameterError(f"q = {q} too large: the root in (0, 1) underflows")
    return _small_root(rhs)


def gamma_entropy_roots(q: float) -> tuple[RootResult, RootResult]:
    """Both roots of t - log t = q + 1 for q > 0: (minus in (0,1), plus > 1)."""
    if not (q > 0.0 and math.isfinite(q)):
        raise ParameterError(f"gamma_entropy_roots needs q > 0, got {q}")
    if q > 743.0:
        # the small root ~ e^{-(q+1)} drops below the least subnormal double
        raise ParameterError(f"q = {q} too large: the root in (0, 1) underflows")
    rhs = q + 1.0
    if rhs == 1.0:
        raise ParameterError(f"q = {q} below float resolution, roots collapse to 1")
    f = lambda t: t - math.log(t) - rhs
    minus = _small_root(rhs)
    hi = _expand_up(f, rhs + 1.0)
    plus = bisect(lambda t: -f(t), 1.0, hi)
    plus = RootResult(plus.root, -plus.residual, plus.bracket, plus.iterations)
    return minus, plus


def eps_minus(q: float) -> RootResult:
    """Smallest positive solution of 1/t - log(1/t + 1) = q, q > 0.

    Solved via u = 1/t: u - log(1 + u) = q is strictly increasing from 0,
    so there is exactly one positive u.  Algebraically the result equals
    1/(gamma_plus - 1); that identity is left to the tests as a cross-check,
    this routine never touches gamma_entropy_roots.
    """
    if not (q > 0.0 and math.isfinite(q)):
        raise ParameterError(f"eps_minus needs q > 0, got {q}")
    g = lambda u: u - math.log1p(u) - q
    hi = _expand_up(g, max(q, 1.0))
    res = bisect(g, 5e-324, hi)
    t = 1.0 / res.root
    return RootResult(t, 1.0 / t - math.log1p(1.0 / t) - q, res.bracket, res.iterations)


def gehring_sharp_eps(p: float, k: float) -> RootResult:
    """Sharp self-improvement gap for a p-average ratio bound of k.

    Root in eps of
        (1/(p-1)) log((p+eps-1)/eps) - log((p+eps)/(p+eps-1)) = (p/(p-1)) log k.
    The left side falls strictly from +inf to 0 on eps > 0, so k > 1 gives a
    unique root; k <= 1 returns root = +inf (nothing to improve).
    """
    if not (p > 1.0 and math.isfinite(p)):
        raise ParameterError(f"gehring_sharp_eps needs p > 1, got {p}")
    if not (k > 0.0 and math.isfinite(k)):
        raise ParameterError(f"gehring_sharp_eps needs k > 0, got {k}")
    if k <= 1.0:
        return RootResult(math.inf, 0.0, (math.inf, math.inf), 0)
    rhs = (p / (p - 1.0)) * math.log(k)

    def f(eps: float) -> float:
        # evaluated via logs only; safe down to denormal eps
        return (
            (math.log(p + eps - 1.0) - math.log(eps)) / (p - 1.0)
            - (math.log(p + eps) - math.log(p + eps - 1.0))
            - rhs
        )

    hi = _expand_up(lambda e: -f(e), 1.0)
    res = bisect(f, 5e-324, hi)
    return res


def gehring_dim_n_eps(n: int, q: float) -> float:
    """Dimensional self-improvement exponent log 4 / (n log 2 + 8 q)."""
    if not (isinstance(n, int) and n >= 1):
        raise ParameterError(f"dimension must be a positive integer, got {n}")
    if not (q > 0.0 and math.isfinite(q)):
        raise ParameterError(f"gehring_dim_n_eps needs q > 0, got {q}")
    return math.log(4.0) / (n * math.log(2.0) + 8.0 * q)


def good_lambda_params(q: float) -> tuple[float, float]:
    """Good-lambda pair (alpha, beta) = (1/(e^{8q} - 1), 1/4)."""
    if not (q > 0.0 and math.isfinite(q)):
        raise ParameterError(f"good_lambda_params needs q > 0, got {q}")
    return 1.0 / math.expm1(8.0 * q), 0.25


def good_lambda_verify(n: int, q: float) -> float:
    """Certified log of (2^n/alpha)^eps * beta; negative means the bound closes.

    Direct float evaluation is useless here: with eps = log4/(n log2 + 8q)
    the product equals exp(eps*log1p(-e^{-8q})), i.e. 1 minus a margin as
    small as e^{-8q}, far below double rounding for large q.  The returned
    gap is that exponent with the exact cancellation performed analytically.
    """
    eps = gehring_dim_n_eps(n, q)
    return eps * math.log1p(-math.exp(-8.0 * q))


def p_gehring_via_one(n: int, p: float, k: float) -> tuple[float, float]:
    """Route a p-average ratio bound through the entropy constant.

    Returns (entropy_bound, delta): entropy_bound = 6^n k^p 2^p p/(p-1) and
    delta = p * eps_minus(entropy_bound), the integrability gain for w^p.
    """
    if not (isinstance(n, int) and n >= 1):
        raise ParameterError(f"dimension must be a positive integer, got {n}")
    if not (p > 1.0 and math.isfinite(p)):
        raise ParameterError(f"p_gehring_via_one needs p > 1, got {p}")
    if not (k >= 1.0 and math.isfinite(k)):
        raise ParameterError(f"p_gehring_via_one needs k >= 1, got {k}")
    bound = 6.0**n * k**p * 2.0**p * p / (p - 1.0)
    delta = p * eps_minus(bound).root
    return bound, delta


def funny_bound(q: float) -> float:
    """Sharp entropy-to-A_infty bound gamma_minus * exp((1-gamma_minus)/gamma_minus).

    Overflows to +inf for q beyond ~5.6; use funny_bound_log for asymptotics.
    """
    g = gamma_entropy_roots(q)[0].root
    try:
        return g * math.exp((1.0 - g) / g)
    except OverflowError:
        return math.inf


def funny_bound_log(q: float) -> float:
    """log of funny_bound(q), stable for large q."""
    g = gamma_entropy_roots(q)[0].root
    return math.log(g) + (1.0 - g) / g
