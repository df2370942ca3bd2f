"""Families of surfaces ordered by coefficient size.

P_d(M) is the set of integer polynomials of degree exactly d with measure
below M, under one of two orderings: `height` (max |coefficient| < M, exact
integer test) or `mahler` (Mahler measure mu(p) = |lead| * prod max(1, |root|)
below M, decided numerically).  The surface family takes A from P_m(M^2) and
B from P_n(M^3) and drops pairs with identically vanishing discriminant.

Numeric Mahler membership near the boundary is resolved conservatively:
polynomials with |mu - M| <= BOUNDARY_MARGIN are excluded and counted, so
enumeration is deterministic and the possible miscount is quantified.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from . import intpoly
from .errors import UnsupportedError
from .surfaces import SurfaceQ, discriminant_poly

__all__ = [
    "FamilySpec", "MahlerMeasure", "mahler_measure", "mahler_measure_full",
    "enumerate_Pd", "PolyIter", "enumerate_family", "FamilyStream",
    "filter_SN", "sample_family", "squarefree_odd_factors",
]

BOUNDARY_MARGIN = 1e-8


@dataclass(frozen=True)
class FamilySpec:
    m: int
    n: int
    M: int
    ordering: str = "height"

    def __post_init__(self):
        if self.m < 1 or self.n < 1 or self.M < 1:
            raise ValueError("family parameters must be positive")
        if self.ordering not in ("height", "mahler"):
            raise ValueError(f"unknown ordering {self.ordering!r}")


@dataclass(frozen=True)
class MahlerMeasure:
    value: float
    error_bound: float


def mahler_measure_full(p, tol: float = 1e-10) -> MahlerMeasure:
    """Mahler measure with a first-order error bound from root residuals.

    Roots come from the companion matrix, then one Newton step; the bound per
    root is |p(r)| / |p'(r)| propagated through the max(1, |r|) factors.
    """
    coeffs = intpoly.normalize(p)
    if not coeffs:
        raise ValueError("Mahler measure of the zero polynomial")
    if len(coeffs) == 1:
        return MahlerMeasure(abs(coeffs[0]), 0.0)
    c = np.array(coeffs, dtype=float)
    roots = np.roots(c[::-1])
    dc = c[1:] * np.arange(1, len(c))
    for _ in range(2):
        val = np.polyval(c[::-1], roots)
        dval = np.polyval(dc[::-1], roots)
        step = np.where(np.abs(dval) > 0, val / np.where(dval == 0, 1, dval), 0)
        roots = roots - np.where(np.abs(step) < 1.0, step, 0)
    val = np.polyval(c[::-1], roots)
    dval = np.polyval(dc[::-1], roots)
    residual = np.abs(val) / np.maximum(np.abs(dval), 1e-300)
    mags = np.abs(roots)
    mu = abs(coeffs[-1]) * float(np.prod(np.maximum(1.0, mags)))
    rel = float(np.sum(residual / np.maximum(mags, 1.0)))
    err = mu * max(rel, tol)
    return MahlerMeasure(mu, err)


def mahler_measure(p, tol: float = 1e-10) -> float:
    return mahler_measure_full(p, tol).value


class PolyIter:
    """Deterministic enumeration of P_d(bound) in lex order on (a_0, ..., a_d).

    After exhaustion, `boundary_ambiguous` counts Mahler-ordered candidates
    excluded because their computed measure fell within BOUNDARY_MARGIN of
    the bound.
    """

    def __init__(self, d: int, bound: int, ordering: str = "height"):
        if d < 1 or bound < 1:
            raise ValueError("degree and bound must be positive")
        if ordering not in ("height", "mahler"):
            raise ValueError(f"unknown ordering {ordering!r}")
        self.d = d
        self.bound = bound
        self.ordering = ordering
        self.boundary_ambiguous = 0

    def _box_limits(self) -> list[int]:
        if self.ordering == "height":
            return [self.bound - 1] * (self.d + 1)
        return [math.comb(self.d, self.d - i) * self.bound for i in range(self.d + 1)]

    def __iter__(self):
        limits = self._box_limits()

        def rec(i, prefix):
            if i > self.d:
                yield tuple(prefix)
                return
            lo, hi = -limits[i], limits[i]
            for c in range(lo, hi + 1):
                if i == self.d and c == 0:
                    continue
                prefix.append(c)
                yield from rec(i + 1, prefix)
                prefix.pop()

        for tup in rec(0, []):
            if self.ordering == "height":
                yield tup
                continue
            mu = mahler_measure_full(tup).value
            if mu < self.bound - BOUNDARY_MARGIN:
                yield tup
            elif mu <= self.bound + BOUNDARY_MARGIN:
                self.boundary_ambiguous += 1


def enumerate_Pd(d: int, bound: int, ordering: str = "height") -> PolyIter:
    return PolyIter(d, bound, ordering)


class FamilyStream:
    """Surfaces of S_{m,n}(M) in A-major lex order; vanishing pairs counted."""

    def __init__(self, spec: FamilySpec):
        self.spec = spec
        self.skipped = 0
        self.a_iter = enumerate_Pd(spec.m, spec.M**2, spec.ordering)
        self.b_iter = enumerate_Pd(spec.n, spec.M**3, spec.ordering)

    def __iter__(self):
        b_list = list(self.b_iter)
        for a in self.a_iter:
            for b in b_list:
                try:
                    yield SurfaceQ(a, b)
                except ValueError:
                    self.skipped += 1


def enumerate_family(spec: FamilySpec) -> FamilyStream:
    return FamilyStream(spec)


def squarefree_odd_factors(N: int) -> list[int]:
    """Prime factors of N; rejects N that is not squarefree with factors > 3."""
    if N < 1:
        raise UnsupportedError("modulus must be positive")
    out = []
    n = N
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0 or d <= 3:
                raise UnsupportedError(f"{N} is not squarefree with prime factors > 3")
            out.append(d)
        d += 1
    if n > 1:
        if n <= 3:
            raise UnsupportedError(f"{N} is not squarefree with prime factors > 3")
        out.append(n)
    return out


def filter_SN(stream, N: int):
    """Surfaces whose discriminant stays nonzero mod every prime dividing N."""
    factors = squarefree_odd_factors(N)

    def keep(s: SurfaceQ) -> bool:
        delta = discriminant_poly(s)
        return all(intpoly.reduce_mod(delta, ell) for ell in factors)

    return (s for s in stream if keep(s))


def _draw_poly(d: int, bound: int, ordering: str, rng: random.Random, counters=None):
    if ordering == "height":
        limits = [bound - 1] * (d + 1)
    else:
        limits = [math.comb(d, d - i) * bound for i in range(d + 1)]
    while True:
        coeffs = [rng.randint(-limits[i], limits[i]) for i in range(d + 1)]
        while coeffs[d] == 0:
            coeffs[d] = rng.randint(-limits[d], limits[d])
        if ordering == "mahler":
            if not mahler_measure_full(tuple(coeffs)).value < bound - BOUNDARY_MARGIN:
                if counters is not None:
                    counters["rejected_mahler"] += 1
                continue
        return tuple(coeffs)


def _draw_surface(spec: FamilySpec, rng: random.Random, counters=None) -> SurfaceQ:
    """One uniform family member from the spec's coefficient boxes."""
    while True:
        a = _draw_poly(spec.m, spec.M**2, spec.ordering, rng, counters)
        b = _draw_poly(spec.n, spec.M**3, spec.ordering, rng, counters)
        if counters is not None:
            counters["draws"] += 1
        try:
            return SurfaceQ(a, b)
        except ValueError:
            if counters is not None:
                counters["rejected_discriminant"] += 1


def sample_family(spec: FamilySpec, count: int, seed: int, stats: dict | None = None):
    """Uniform sample from the family's coefficient box, rejection-filtered.

    Height ordering samples the box directly; Mahler ordering samples the
    binomial-coefficient superset box and rejects measures at or above the
    bound (boundary cases excluded, as in enumeration).  Pairs with vanishing
    discriminant are rejected and counted.  Deterministic for a fixed seed.
    """
    rng = random.Random(seed)
    counters = {"draws": 0, "rejected_mahler": 0, "rejected_discriminant": 0}
    out = [_draw_surface(spec, rng, counters) for _ in range(count)]
    if stats is not None:
        stats.update(counters)
    return out
