"""Rank estimators over Q from Frobenius trace sums.

For a surface, the Nagao sum

    (1/X) * sum_{3 < p < X} sum_{t=1..p} a_p(E_t) * log(p) / p

is computed with the fiber row batched per prime; its negative estimates the
rank of the group of sections.  For a fixed curve, the companion estimators
are the logarithmic trace sum, the partial product prod (p + 1 - a_p)/p, and
the estimate 1/2 - (1/log X) * int_1^X (sum_{p<x} a_p log p) dx / x^2 with the
step-function integral evaluated in closed form.

Conventions shared by every estimator here: the primes 2 and 3 are omitted,
primes where the whole surface has bad reduction contribute 0, and singular
fibers use the projective-count trace (node +-1, cusp 0).  Each omitted prime
perturbs the Nagao sum by O(log(p)/X), which vanishes in the limit.

All estimators reduce per-prime terms in ascending prime order after the
workers finish, so results are bit-identical for any thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import BadSurfaceReductionError
from .ffield import PrimeField
from .primes import odd_primes_in
from .surfaces import SurfaceQ, reduce_mod
from .traces import trace_naive, trace_row_values

__all__ = [
    "CurveQ", "NagaoEstimate", "nagao_sum", "nagao_rank_estimate",
    "heathbrown_sum", "bsd_partial_product", "rubinstein_estimate", "curve_ap",
]


@dataclass(frozen=True)
class CurveQ:
    a: int
    b: int

    def __post_init__(self):
        if 4 * self.a**3 + 27 * self.b**2 == 0:
            raise ValueError("curve has zero discriminant")


@dataclass(frozen=True)
class NagaoEstimate:
    X: int
    value: float
    per_prime_terms: tuple[tuple[int, float], ...] | None = None


def _prime_term(s: SurfaceQ, p: int) -> float:
    try:
        red = reduce_mod(s, p)
    except BadSurfaceReductionError:
        return 0.0
    inner = int(trace_row_values(red.a, red.b, p).sum())
    return inner * math.log(p) / p


def _map_ordered(fn, items, threads: int):
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def nagao_sum(s: SurfaceQ, X: int, threads: int = 1, keep_terms: bool = False) -> NagaoEstimate:
    """(1/X) sum over 3 < p < X of the fiber-row trace sum, weighted log(p)/p."""
    if X < 2:
        raise ValueError("cutoff must be >= 2")
    ps = [int(p) for p in odd_primes_in(3, X)]
    terms = _map_ordered(lambda p: _prime_term(s, p), ps, threads)
    value = math.fsum(terms) / X
    if keep_terms:
        return NagaoEstimate(X, value, tuple(zip(ps, terms)))
    return NagaoEstimate(X, value)


def nagao_rank_estimate(s: SurfaceQ, X: int, threads: int = 1) -> float:
    return -nagao_sum(s, X, threads=threads).value


def curve_ap(e: CurveQ, p: int) -> int:
    """Trace of the reduction of e mod p (projective-count convention)."""
    return trace_naive(e.a % p, e.b % p, PrimeField(p)).a


def heathbrown_sum(e: CurveQ, X: int, threads: int = 1) -> float:
    """sum_{3 < p < X} a_p(e) log(p) / p."""
    if X < 2:
        raise ValueError("cutoff must be >= 2")
    ps = [int(p) for p in odd_primes_in(3, X)]
    terms = _map_ordered(lambda p: curve_ap(e, p) * math.log(p) / p, ps, threads)
    return math.fsum(terms)


def bsd_partial_product(e: CurveQ, X: int) -> float:
    """prod_{3 < p < X} (p + 1 - a_p(e)) / p; empty product is 1."""
    if X < 2:
        raise ValueError("cutoff must be >= 2")
    out = 1.0
    for p in odd_primes_in(3, X):
        p = int(p)
        out *= (p + 1 - curve_ap(e, p)) / p
    return out


def rubinstein_estimate(e: CurveQ, X: float, ap_override=None) -> float:
    """1/2 - (1/log X) * int_1^X (sum_{3<p<x} a_p log p) dx/x^2, exactly.

    The integrand is a step function changing only at primes; each segment
    [x_l, x_r] contributes S * (1/x_l - 1/x_r) with S the prefix sum at x_l.
    ap_override replaces the trace lookup (test hook).
    """
    if X <= 1:
        raise ValueError("cutoff must be > 1")
    ap = ap_override if ap_override is not None else (lambda p: curve_ap(e, p))
    ps = [int(p) for p in odd_primes_in(3, X)]
    contributions = []
    prefix = 0.0
    for i, p in enumerate(ps):
        prefix += ap(p) * math.log(p)
        right = ps[i + 1] if i + 1 < len(ps) else X
        contributions.append(prefix * (1.0 / p - 1.0 / right))
    integral = math.fsum(contributions)
    return 0.5 - integral / math.log(X)
