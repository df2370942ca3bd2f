"""Frobenius traces of y^2 = x^3 + ax + b over finite fields.

Three computation paths share one convention: the trace is q + 1 - N where N
counts projective points of the (possibly singular) cubic, singular point
included.  Equivalently a = -sum_x chi(x^3 + ax + b), which also covers the
singular cases: a split node gives +1, a nonsplit node -1, a cusp 0.

 * trace_naive: full character sum; vectorized for prime fields and for
   extension fields small enough to carry index tables.
 * trace_bsgs: baby-step giant-step group-order search in the Hasse interval,
   for large fields; falls back to the character sum when the order is not
   pinned down after sampling several points.
 * trace_power: Weil recurrence lifting a trace over F_q to F_{q^k}.

trace_row batches the character sums of a whole fiber row A(t), B(t) for
t in F_l with one shared character/cube table.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import isqrt

import numpy as np
from numba import njit, prange

from .errors import InvalidTraceError, SingularCurveError
from .ffield import ExtField, PrimeField, char_table

__all__ = [
    "TraceResult", "trace_naive", "trace_bsgs", "trace_power", "trace_row",
    "trace_row_values", "prime_trace_tables", "trace_naive_many",
]

SMOOTH = "smooth"
NODE_SPLIT = "node_split"
NODE_NONSPLIT = "node_nonsplit"
CUSP = "cusp"

# Number of random points tried before trace_bsgs gives up on resolving the
# group order and falls back to the full character sum.
BSGS_MAX_POINTS = 8


@dataclass(frozen=True)
class TraceResult:
    a: int
    q: int
    singular_type: str

    def __post_init__(self):
        if self.singular_type == SMOOTH:
            if self.a * self.a > 4 * self.q:
                raise InvalidTraceError(f"Hasse violation: a={self.a}, q={self.q}")
        elif self.singular_type == NODE_SPLIT:
            assert self.a == 1
        elif self.singular_type == NODE_NONSPLIT:
            assert self.a == -1
        else:
            assert self.a == 0


def _classify(a: int, b: int, F) -> tuple[str, int | None]:
    """Reduction type of the cubic, with the trace for singular types."""
    a = a if isinstance(F, ExtField) else a % F.ell
    disc = F.add(F.mul(F.from_base(4), F.mul(F.mul(a, a), a)),
                 F.mul(F.from_base(27), F.mul(b, b)))
    if disc != 0:
        return SMOOTH, None
    if a == 0:
        return CUSP, 0
    # double root of x^3 + ax + b is x0 = -3b/(2a); node splits iff 3*x0 is a square
    x0 = F.mul(F.neg(F.mul(F.from_base(3), b)), F.inv(F.mul(F.from_base(2), a)))
    s = F.chi(F.mul(F.from_base(3), x0))
    return (NODE_SPLIT, 1) if s == 1 else (NODE_NONSPLIT, -1)


def trace_naive(a, b, F) -> TraceResult:
    """Exact trace by summing the quadratic character of x^3 + ax + b."""
    kind, known = _classify(a, b, F)
    if isinstance(F, PrimeField):
        ell = F.ell
        a %= ell
        b %= ell
        if ell <= 1024:
            chi = char_table(ell)
            s = 0
            for x in range(ell):
                s += chi[(x * x % ell * x + a * x + b) % ell]
        else:
            chi, cube = prime_trace_tables(ell)
            x = np.arange(ell, dtype=np.int64)
            f = (cube + a * x + b) % ell
            s = int(chi[f].sum())
        return TraceResult(-s, ell, kind)
    assert isinstance(F, ExtField)
    if F.q <= 10**6:
        ax = F.digits @ F.mul_matrix(a) % F.ell
        bvec = np.zeros(F.degree, dtype=np.int64)
        for i, c in enumerate(F.decode(b)):
            bvec[i] = c
        f_idx = (F.cube_digits + ax + bvec) % F.ell @ F.enc_weights
        chi = np.where(f_idx == 0, 0, np.where(F.square_mask[f_idx], 1, -1))
        s = int(chi.sum())
    else:
        s = 0
        for x in F.elements():
            f = F.add(F.mul(F.mul(x, x), x), F.add(F.mul(a, x), b))
            s += F.chi(f)
    result = TraceResult(-s, F.q, kind)
    if known is not None:
        assert result.a == known
    return result


def prime_trace_tables(ell: int) -> tuple[np.ndarray, np.ndarray]:
    """(character table, cube table) for F_ell; rebuilt per prime by design."""
    chi = char_table(ell).table
    x = np.arange(ell, dtype=np.int64)
    cube = x * x % ell * x % ell
    return chi, cube


@njit(parallel=True, cache=True)
def _char_sums_kernel(cube, chi, aa, bb, ell):  # pragma: no cover - jitted
    out = np.empty(len(aa), np.int64)
    for i in prange(len(aa)):
        a = aa[i]
        b = bb[i]
        acc = 0
        ax = 0
        for x in range(ell):
            s = cube[x] + ax + b
            if s >= ell:
                s -= ell
            if s >= ell:
                s -= ell
            acc += chi[s]
            ax += a
            if ax >= ell:
                ax -= ell
        out[i] = acc
    return out


def trace_naive_many(pairs, ell: int, tables=None) -> np.ndarray:
    """Traces of many (a, b) curves over F_ell with one shared table set."""
    if tables is None:
        tables = prime_trace_tables(ell)
    chi, cube = tables
    aa = np.array([a % ell for a, _ in pairs], dtype=np.int64)
    bb = np.array([b % ell for _, b in pairs], dtype=np.int64)
    return -_char_sums_kernel(cube, chi, aa, bb, ell)


def trace_power(a1: int, q: int, k: int) -> int:
    """a_k over F_{q^k} from the trace a_1 over F_q: a_k = a_1 a_{k-1} - q a_{k-2}."""
    if a1 * a1 > 4 * q:
        raise InvalidTraceError(f"input trace violates Hasse: a1={a1}, q={q}")
    prev, cur = 2, a1
    for _ in range(k - 1):
        prev, cur = cur, a1 * cur - q * prev
    return cur


# -- baby-step giant-step ----------------------------------------------------


def _ec_add(P, Q, a, F):
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if F.add(y1, y2) == 0:
            return None
        num = F.add(F.mul(F.from_base(3), F.mul(x1, x1)), a)
        den = F.mul(F.from_base(2), y1)
    else:
        num = F.sub(y2, y1)
        den = F.sub(x2, x1)
    lam = F.mul(num, F.inv(den))
    x3 = F.sub(F.sub(F.mul(lam, lam), x1), x2)
    y3 = F.sub(F.mul(lam, F.sub(x1, x3)), y1)
    return (x3, y3)


def _ec_neg(P, F):
    if P is None:
        return None
    return (P[0], F.neg(P[1]))


def _ec_mul(n: int, P, a, F):
    if n < 0:
        return _ec_mul(-n, _ec_neg(P, F), a, F)
    R = None
    while n:
        if n & 1:
            R = _ec_add(R, P, a, F)
        P = _ec_add(P, P, a, F)
        n >>= 1
    return R


def _random_point(a, b, F, rng):
    while True:
        x = rng.randrange(F.q)
        f = F.add(F.mul(F.mul(x, x), x), F.add(F.mul(a, x), b))
        if f == 0:
            return (x, 0)
        y = F.sqrt(f)
        if y is not None:
            return (x, y)


def _multiples_in_interval(P, a, F) -> list[int]:
    """All M in [q+1-B, q+1+B] with M*P = O, B = floor(2*sqrt(q))."""
    q = F.q
    B = isqrt(4 * q)
    R = _ec_mul(q + 1, P, a, F)
    m = isqrt(2 * B + 1) + 1
    baby = {}
    pt = None
    for i in range(m):
        if pt is None:
            baby.setdefault("inf", []).append((i, None))
        else:
            baby.setdefault(pt[0], []).append((i, pt[1]))
        pt = _ec_add(pt, P, a, F)
    step = _ec_mul(m, P, a, F)
    G = _ec_add(R, _ec_mul(-B, P, a, F), a, F)
    found = []
    k = 0
    while -B + k * m <= B:
        base = -B + k * m
        if G is None:
            found.append(base)
        else:
            for i, y in baby.get(G[0], []):
                if y is not None and F.add(G[1], y) == 0:
                    found.append(base + i)
        G = _ec_add(G, step, a, F)
        k += 1
    return sorted(q + 1 + j for j in set(found) if abs(j) <= B)


def _point_order(P, M: int, a, F) -> int:
    """Exact order of P given a multiple M of it (M*P = O)."""
    order = M
    n, d = M, 2
    fac = []
    while d * d <= n:
        if n % d == 0:
            fac.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        fac.append(n)
    for p in fac:
        while order % p == 0 and _ec_mul(order // p, P, a, F) is None:
            order //= p
    return order


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def trace_bsgs(a, b, F) -> TraceResult:
    """Trace via group-order search; requires a smooth curve.

    Samples up to BSGS_MAX_POINTS random points (seeded from the inputs, so
    results are reproducible), accumulates the lcm of their orders, and stops
    as soon as a unique multiple of that lcm lies in the Hasse interval.
    Ambiguity after all samples falls back to trace_naive.
    """
    kind, _ = _classify(a, b, F)
    if kind != SMOOTH:
        raise SingularCurveError(f"singular curve ({kind}) passed to trace_bsgs")
    q = F.q
    B = isqrt(4 * q)
    lo, hi = q + 1 - B, q + 1 + B
    rng = random.Random(a * q + b + q)  # reproducible point sampling
    L = 1
    for _ in range(BSGS_MAX_POINTS):
        P = _random_point(a, b, F, rng)
        mults = _multiples_in_interval(P, a, F)
        if not mults:
            raise InvalidTraceError("no group-order candidate in the Hasse interval")
        L = _lcm(L, _point_order(P, mults[0], a, F))
        first = (lo + L - 1) // L * L
        if first > hi:
            raise InvalidTraceError("lcm of point orders exceeds the Hasse interval")
        if first + L > hi:
            return TraceResult(q + 1 - first, q, SMOOTH)
    return trace_naive(a, b, F)


# -- batched fiber rows -------------------------------------------------------


def trace_row(a_coeffs, b_coeffs, ell: int) -> list[TraceResult]:
    """TraceResults of y^2 = x^3 + A(t)x + B(t) for every t in F_ell."""
    values, disc = _row_sums(a_coeffs, b_coeffs, ell)
    F = PrimeField(ell)
    at = _eval_row(a_coeffs, ell)
    bt = _eval_row(b_coeffs, ell)
    out = []
    for t in range(ell):
        if disc[t] == 0:
            kind, known = _classify(int(at[t]), int(bt[t]), F)
            assert known == int(values[t])
            out.append(TraceResult(known, ell, kind))
        else:
            out.append(TraceResult(int(values[t]), ell, SMOOTH))
    return out


def trace_row_values(a_coeffs, b_coeffs, ell: int) -> np.ndarray:
    """Row of trace values only (singular fibers use the 0/+-1 convention)."""
    return _row_sums(a_coeffs, b_coeffs, ell)[0]


def _eval_row(coeffs, ell: int) -> np.ndarray:
    t = np.arange(ell, dtype=np.int64)
    acc = np.zeros(ell, dtype=np.int64)
    for c in reversed(tuple(coeffs)):
        acc = (acc * t + c % ell) % ell
    return acc


def _row_sums(a_coeffs, b_coeffs, ell: int):
    chi, cube = prime_trace_tables(ell)
    at = _eval_row(a_coeffs, ell)
    bt = _eval_row(b_coeffs, ell)
    disc = (-16 * (4 * (at * at % ell) * at + 27 * bt * bt)) % ell
    x = np.arange(ell, dtype=np.int64)
    values = np.empty(ell, dtype=np.int64)
    chunk = max(1, 4_000_000 // ell)
    for start in range(0, ell, chunk):
        stop = min(start + chunk, ell)
        f = (cube[None, :] + at[start:stop, None] * x[None, :] + bt[start:stop, None]) % ell
        values[start:stop] = -chi[f].sum(axis=1, dtype=np.int64)
    return values, disc
