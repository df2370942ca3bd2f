"""The per-prime trace model: distribution of a_p over uniform random curves.

A uniformly random pair (a, b) in F_p^2 (singular pairs included, with the
projective-count traces +-1/0) induces an exact distribution on traces with
p^2 total mass.  Two exact constructions are provided:

 * exhaustive enumeration of all p^2 pairs (the oracle; quadratic in p), and
 * the class-number form: the number of smooth pairs with trace t (t^2 < 4p)
   is (p-1)/2 * H(4p - t^2) with H the Hurwitz class number, plus (p-1)/2
   singular pairs each of trace +1 and -1 and one cusp pair of trace 0.

The two agree cell-by-cell (the test suite checks every p <= 199), and the
total-mass identity sum_t count(t) = p^2 is asserted on every construction,
so the fast path is safe for the large primes the simulations need.

Simulations: the double-sum trajectory S_X = sum_{p<X} sum_{t=1..p} A_{p,t}
log(p)/p with independent Birch draws, reported as S_X / X^(1/2+eps), and the
single-index variant sum_{p<X} A_p log(p)/p reported as S_X / X^eps.  Inner
sums over t are realized by exact multinomial counts over the trace
distribution, which has the same law as summing p independent draws but
costs O(sqrt p) per prime instead of O(p).  Streams are keyed per prime, so
trajectories are reproducible bit-for-bit regardless of evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import numpy as np
from scipy.stats import chi2

from .errors import BudgetExceededError
from .primes import odd_primes_in
from .seeding import unit_rng
from .traces import prime_trace_tables, trace_naive_many

__all__ = [
    "TraceDistribution", "BirchModel", "birch_model", "birch_sample",
    "birch_moment", "exhaustive_trace_distribution", "class_number_distribution",
    "zero_distribution", "hurwitz6", "TrajectoryResult", "ThreeSeriesSummary",
    "three_series_sim", "fixed_t_series", "sampler_chi2_pvalue",
    "EXHAUSTIVE_LIMIT",
]

# birch_moment enumerates all p^2 Weierstrass pairs; keep that honest.
EXHAUSTIVE_LIMIT = 200


@dataclass(frozen=True)
class TraceDistribution:
    """Exact multiset of traces over all p^2 pairs (a, b)."""

    p: int
    support: np.ndarray  # ascending trace values
    counts: np.ndarray  # int64 multiplicities

    def __post_init__(self):
        total = int(self.counts.sum())
        if total != self.p * self.p:
            raise AssertionError(f"trace multiplicities sum to {total}, not p^2")

    def mean_num(self) -> int:
        return int((self.support * self.counts).sum())


@dataclass(frozen=True)
class BirchModel:
    p: int
    mode: str  # "direct" | "table"
    dist: TraceDistribution | None = None


def birch_model(p: int, mode: str = "table") -> BirchModel:
    if mode == "table":
        return BirchModel(p, mode, class_number_distribution(p))
    if mode == "direct":
        return BirchModel(p, mode)
    raise ValueError(f"unknown mode {mode!r}")


def exhaustive_trace_distribution(p: int) -> TraceDistribution:
    """Trace multiset by enumerating every (a, b) in F_p^2."""
    chi, cube = prime_trace_tables(p)
    x = np.arange(p, dtype=np.int64)
    tmax = isqrt(4 * p)
    counts = np.zeros(2 * tmax + 1, dtype=np.int64)
    for a in range(p):
        g = (cube + a * x) % p
        m = (g[:, None] + x[None, :]) % p  # column b = all shifts at once
        traces = -chi[m].sum(axis=0, dtype=np.int64)
        counts += np.bincount(traces + tmax, minlength=2 * tmax + 1)
    support = np.arange(-tmax, tmax + 1, dtype=np.int64)
    keep = counts > 0
    return TraceDistribution(p, support[keep], counts[keep])


def _build_h6(N: int) -> np.ndarray:
    """6 * Hurwitz class number H(n) for 0 <= n <= N, by reduced-form counting.

    Reduced forms (a, b, c) with |b| <= a <= c of discriminant b^2 - 4ac = -n
    are enumerated once each; weights 1/2 and 1/3 (scaled by 6) apply to the
    square and hexagonal classes (a, 0, a) and (a, a, a).
    """
    h6 = np.zeros(N + 1, dtype=np.int64)
    for a in range(1, isqrt(N // 3) + 1):
        ns_all = []
        ws_all = []
        for b in range(0, a + 1):
            cmax = (N + b * b) // (4 * a)
            if cmax < a:
                continue
            n0 = 4 * a * a - b * b
            if 0 < n0 <= N:
                h6[n0] += 2 if b == a else (3 if b == 0 else 6)
            if cmax > a:
                cs = np.arange(a + 1, cmax + 1, dtype=np.int64)
                ns = 4 * a * cs - b * b
                ns_all.append(ns)
                ws_all.append(np.full(len(ns), 6 if b in (0, a) else 12, dtype=np.int64))
        if ns_all:
            ns = np.concatenate(ns_all)
            ws = np.concatenate(ws_all)
            h6 += np.bincount(ns, weights=ws, minlength=N + 1).astype(np.int64)
    return h6


@lru_cache(maxsize=2)
def _h6_cached(n_rounded: int) -> np.ndarray:
    return _build_h6(n_rounded)


def hurwitz6(n: int) -> np.ndarray:
    """Table of 6*H up to at least n (rounded up so nearby requests share)."""
    size = 1 << max(10, (n - 1).bit_length())
    return _h6_cached(size)


def class_number_distribution(p: int) -> TraceDistribution:
    """Exact trace multiset from Hurwitz class numbers; O(sqrt p) cells."""
    tmax = isqrt(4 * p)
    h6 = hurwitz6(4 * p)
    support = np.arange(-tmax, tmax + 1, dtype=np.int64)
    num = (p - 1) * h6[4 * p - support * support]
    if np.any(num % 12):
        raise AssertionError(f"non-integral smooth count at p={p}")
    counts = num // 12
    counts[tmax + 1] += (p - 1) // 2  # split nodes
    counts[tmax - 1] += (p - 1) // 2  # nonsplit nodes
    counts[tmax] += 1  # the cusp (0, 0)
    keep = counts > 0
    return TraceDistribution(p, support[keep], counts[keep])


def zero_distribution(p: int) -> TraceDistribution:
    """Degenerate point mass at 0 (test hook for the simulations)."""
    return TraceDistribution(
        p, np.array([0], dtype=np.int64), np.array([p * p], dtype=np.int64)
    )


def birch_sample(model: BirchModel, rng: np.random.Generator, size: int | None = None):
    """Draw traces from the model; table and direct modes share one law."""
    n = 1 if size is None else size
    if model.mode == "direct":
        aa = rng.integers(0, model.p, size=n)
        bb = rng.integers(0, model.p, size=n)
        out = trace_naive_many(list(zip(aa.tolist(), bb.tolist())), model.p)
    else:
        cum = np.cumsum(model.dist.counts)
        u = rng.integers(0, model.p * model.p, size=n)
        out = model.dist.support[np.searchsorted(cum, u, side="right")]
    return int(out[0]) if size is None else out


def birch_moment(p: int, k: int) -> Fraction:
    """Exact k-th moment (1/p^2) sum over all pairs of trace^k."""
    if p > EXHAUSTIVE_LIMIT:
        raise BudgetExceededError(f"exhaustive moments capped at p <= {EXHAUSTIVE_LIMIT}")
    dist = exhaustive_trace_distribution(p)
    total = sum(int(c) * int(t) ** k for t, c in zip(dist.support, dist.counts))
    return Fraction(total, p * p)


# -- simulations ---------------------------------------------------------------


@dataclass(frozen=True)
class TrajectoryResult:
    eps: float
    x_grid: tuple[int, ...]
    normalized_values: tuple[float, ...]
    seed: int


@dataclass(frozen=True)
class ThreeSeriesSummary:
    x_grid: tuple[int, ...]
    median_abs: tuple[float, ...]  # of S_X / X^(1/2 + eps)
    var_half_eps: tuple[float, ...]  # of S_X / X^(1/2 + eps/2)
    median_abs_half_eps: tuple[float, ...]  # of S_X / X^(1/2 + eps/2)


def _check_grid(x_grid) -> tuple[int, ...]:
    grid = tuple(int(x) for x in x_grid)
    if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("cutoff grid must be strictly increasing and nonempty")
    return grid


def three_series_sim(
    eps: float,
    x_grid,
    seed: int,
    num_trials: int,
    dist_factory=None,
) -> tuple[list[TrajectoryResult], ThreeSeriesSummary]:
    """Trajectories of the normalized double sum across independent trials.

    For each prime 3 < p < max(grid), the inner sum over t = 1..p of
    independent trace draws is realized as an exact multinomial count vector
    over the trace distribution; all trials advance through primes together.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    grid = _check_grid(x_grid)
    factory = dist_factory or class_number_distribution
    s_running = np.zeros(num_trials, dtype=np.float64)
    recorded = np.zeros((num_trials, len(grid)), dtype=np.float64)
    next_cut = 0
    for p in (int(q) for q in odd_primes_in(3, grid[-1])):
        while next_cut < len(grid) and grid[next_cut] <= p:
            recorded[:, next_cut] = s_running / grid[next_cut] ** (0.5 + eps)
            next_cut += 1
        dist = factory(p)
        rng = unit_rng(seed, "three-series", p)
        pv = dist.counts.astype(np.float64)
        pv /= pv.sum()
        draws = rng.multinomial(p, pv, size=num_trials)
        inner = draws @ dist.support
        s_running += inner * (math.log(p) / p)
    while next_cut < len(grid):
        recorded[:, next_cut] = s_running / grid[next_cut] ** (0.5 + eps)
        next_cut += 1

    trajectories = [
        TrajectoryResult(eps, grid, tuple(recorded[i]), seed) for i in range(num_trials)
    ]
    half_eps = np.array(
        [
            recorded[:, j] * grid[j] ** (0.5 + eps) / grid[j] ** (0.5 + eps / 2)
            for j in range(len(grid))
        ]
    ).T
    summary = ThreeSeriesSummary(
        grid,
        tuple(float(np.median(np.abs(recorded[:, j]))) for j in range(len(grid))),
        tuple(float(np.var(half_eps[:, j])) for j in range(len(grid))),
        tuple(float(np.median(np.abs(half_eps[:, j]))) for j in range(len(grid))),
    )
    return trajectories, summary


def fixed_t_series(
    eps: float,
    x_max: int,
    seed: int,
    grid=None,
    dist_factory=None,
) -> TrajectoryResult:
    """Single-index trajectory: one draw per prime, normalized by X^eps."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    grid = _check_grid(grid if grid is not None else (x_max,))
    if grid[-1] > x_max:
        raise ValueError("grid exceeds x_max")
    factory = dist_factory or class_number_distribution
    s_running = 0.0
    values = []
    next_cut = 0
    for p in (int(q) for q in odd_primes_in(3, x_max)):
        while next_cut < len(grid) and grid[next_cut] <= p:
            values.append(s_running / grid[next_cut] ** eps)
            next_cut += 1
        dist = factory(p)
        rng = unit_rng(seed, "fixed-t", p)
        cum = np.cumsum(dist.counts)
        u = int(rng.integers(0, p * p))
        trace = int(dist.support[np.searchsorted(cum, u, side="right")])
        s_running += trace * math.log(p) / p
    while next_cut < len(grid):
        values.append(s_running / grid[next_cut] ** eps)
        next_cut += 1
    return TrajectoryResult(eps, grid, tuple(values), seed)


def sampler_chi2_pvalue(p: int, n_samples: int, seed: int, min_expected: float = 8.0) -> float:
    """Two-sample chi-squared homogeneity p-value: direct vs table sampler."""
    dist = class_number_distribution(p)
    direct = birch_sample(birch_model(p, "direct"), unit_rng(seed, "chi2-direct", p), n_samples)
    table = birch_sample(birch_model(p, "table"), unit_rng(seed, "chi2-table", p), n_samples)
    tmax = isqrt(4 * p)
    bins = np.arange(-tmax, tmax + 2)
    h1 = np.histogram(direct, bins=bins)[0].astype(np.float64)
    h2 = np.histogram(table, bins=bins)[0].astype(np.float64)
    # pool sparse cells so the chi-squared approximation is sound
    pooled1, pooled2 = [], []
    acc1 = acc2 = 0.0
    for c1, c2 in zip(h1, h2):
        acc1 += c1
        acc2 += c2
        if acc1 + acc2 >= 2 * min_expected:
            pooled1.append(acc1)
            pooled2.append(acc2)
            acc1 = acc2 = 0.0
    if acc1 or acc2:
        pooled1[-1] += acc1
        pooled2[-1] += acc2
    o1 = np.array(pooled1)
    o2 = np.array(pooled2)
    tot = o1 + o2
    e1 = tot * o1.sum() / tot.sum()
    e2 = tot * o2.sum() / tot.sum()
    stat = float((((o1 - e1) ** 2) / e1).sum() + (((o2 - e2) ** 2) / e2).sum())
    dof = len(tot) - 1
    return float(chi2.sf(stat, dof))
