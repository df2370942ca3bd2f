"""Prime enumeration (numpy sieve; desk scale tops out around 10^7)."""

from __future__ import annotations

import numpy as np

__all__ = ["primes_below", "odd_primes_in"]


def primes_below(x: float) -> np.ndarray:
    """All primes p < x, ascending."""
    n = int(np.ceil(x)) - 1 if float(x).is_integer() else int(np.floor(x))
    if n < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(np.sqrt(n)) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def odd_primes_in(lo: float, hi: float) -> np.ndarray:
    """Primes p with lo < p < hi (both strict)."""
    ps = primes_below(hi)
    return ps[ps > lo]
