"""Polynomial arithmetic over prime fields F_l.

Polynomials are tuples of ints in [0, l), ascending degree, with no trailing
zeros; the zero polynomial is the empty tuple.  All functions take the modulus
explicitly, so values can be shared freely between fields.

Includes exact factorization into monic irreducibles (squarefree split,
distinct-degree, then Cantor-Zassenhaus equal-degree with an RNG seeded from
the input so results are reproducible across runs), irreducibility testing,
and perfect-square detection with square-root extraction.
"""

from __future__ import annotations

import random
from functools import lru_cache

__all__ = [
    "normalize", "degree", "is_zero", "add", "sub", "neg", "scale", "mul",
    "pow_mod", "divmod_poly", "gcd", "monic", "deriv", "eval_at", "shift",
    "valuation", "exact_div", "is_irreducible", "irreducibles",
    "first_irreducible", "factor", "poly_sqrt",
]

Poly = tuple


def normalize(coeffs, ell: int) -> Poly:
    """Reduce coefficients mod ell and strip trailing zeros."""
    c = [int(x) % ell for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(f: Poly) -> int:
    """Degree, with deg 0 = -1 for the zero polynomial."""
    return len(f) - 1


def is_zero(f: Poly) -> bool:
    return not f


def add(f: Poly, g: Poly, ell: int) -> Poly:
    n = max(len(f), len(g))
    out = [0] * n
    for i, c in enumerate(f):
        out[i] = c
    for i, c in enumerate(g):
        out[i] = (out[i] + c) % ell
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def neg(f: Poly, ell: int) -> Poly:
    return tuple((-c) % ell for c in f)


def sub(f: Poly, g: Poly, ell: int) -> Poly:
    return add(f, neg(g, ell), ell)


def scale(f: Poly, c: int, ell: int) -> Poly:
    c %= ell
    if c == 0:
        return ()
    return tuple((a * c) % ell for a in f)


def mul(f: Poly, g: Poly, ell: int) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % ell
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def divmod_poly(f: Poly, g: Poly, ell: int) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, ell)
    q = [0] * max(len(f) - dg, 0)
    i = len(r) - 1
    while i >= dg:
        c = r[i]
        if c:
            factor = (c * inv_lead) % ell
            q[i - dg] = factor
            for j in range(dg + 1):
                r[i - dg + j] = (r[i - dg + j] - factor * g[j]) % ell
        i -= 1
    while r and r[-1] == 0:
        r.pop()
    while q and q[-1] == 0:
        q.pop()
    return tuple(q), tuple(r)


def exact_div(f: Poly, g: Poly, ell: int) -> Poly:
    """Division known to be exact; raises if a remainder appears."""
    q, r = divmod_poly(f, g, ell)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def gcd(f: Poly, g: Poly, ell: int) -> Poly:
    a, b = f, g
    while b:
        a, b = b, divmod_poly(a, b, ell)[1]
    return monic(a, ell)


def monic(f: Poly, ell: int) -> Poly:
    if not f:
        return f
    return scale(f, pow(f[-1], -1, ell), ell)


def deriv(f: Poly, ell: int) -> Poly:
    out = [(i * c) % ell for i, c in enumerate(f)][1:]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def eval_at(f: Poly, x: int, ell: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % ell
    return acc


def shift(f: Poly, k: int) -> Poly:
    """Multiply by T^k."""
    if not f:
        return f
    return (0,) * k + tuple(f)


def valuation(f: Poly, pi: Poly, ell: int) -> int | None:
    """Order of vanishing of f at the place pi; None for f = 0 (infinite)."""
    if not f:
        return None
    v = 0
    while True:
        q, r = divmod_poly(f, pi, ell)
        if r:
            return v
        f = q
        v += 1


def pow_mod(base: Poly, e: int, mod: Poly, ell: int) -> Poly:
    result = (1,)
    base = divmod_poly(base, mod, ell)[1]
    while e:
        if e & 1:
            result = divmod_poly(mul(result, base, ell), mod, ell)[1]
        base = divmod_poly(mul(base, base, ell), mod, ell)[1]
        e >>= 1
    return result


def is_irreducible(f: Poly, ell: int) -> bool:
    """Rabin test: x^(l^d) = x mod f, and no fixed points at proper levels."""
    d = degree(f)
    if d <= 0:
        return False
    if d == 1:
        return True
    x = (0, 1)
    # x^(l^(d/r)) != x mod f for every prime r | d
    for r in _prime_divisors(d):
        h = x
        for _ in range(d // r):
            h = pow_mod(h, ell, f, ell)
        if not gcd(sub(h, x, ell), f, ell) == (1,):
            return False
    h = x
    for _ in range(d):
        h = pow_mod(h, ell, f, ell)
    return sub(h, x, ell) == ()


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def first_irreducible(ell: int, k: int) -> Poly:
    """First monic irreducible of degree k, by lex order on (a_0, ..., a_{k-1})."""
    if k == 1:
        return (0, 1)
    for idx in range(ell ** k):
        digits = []
        v = idx
        for _ in range(k):
            digits.append(v % ell)
            v //= ell
        # idx encodes (a_0, ..., a_{k-1}) with a_0 most significant
        coeffs = tuple(reversed(digits)) + (1,)
        if is_irreducible(coeffs, ell):
            return coeffs
    raise AssertionError("no irreducible found")  # unreachable for prime ell


@lru_cache(maxsize=None)
def irreducibles(ell: int, d: int) -> tuple[Poly, ...]:
    """All monic irreducibles of degree d over F_l, sorted by coefficient tuple."""
    out = []
    for idx in range(ell ** d):
        digits = []
        v = idx
        for _ in range(d):
            digits.append(v % ell)
            v //= ell
        coeffs = tuple(digits) + (1,)
        if is_irreducible(coeffs, ell):
            out.append(coeffs)
    out.sort()
    return tuple(out)


def _squarefree_parts(f: Poly, ell: int) -> list[tuple[Poly, int]]:
    """Yield (squarefree factor, multiplicity) pairs of a monic f."""
    out = []
    df = deriv(f, ell)
    if is_zero(df):
        # f = g(T^l) = h(T)^l since c^l = c on F_l coefficients
        h = normalize([f[i] for i in range(0, len(f), ell)], ell)
        for g, m in _squarefree_parts(h, ell):
            out.append((g, m * ell))
        return out
    c = gcd(f, df, ell)
    w = exact_div(f, c, ell)  # product of squarefree part
    m = 1
    while degree(w) > 0:
        y = gcd(w, c, ell)
        part = exact_div(w, y, ell)
        if degree(part) > 0:
            out.append((part, m))
        w = y
        c = exact_div(c, y, ell)
        m += 1
    if degree(c) > 0:
        # remaining factors all have multiplicity divisible by ell
        out.extend(_squarefree_parts(c, ell))
    return out


def _distinct_degree(f: Poly, ell: int) -> list[tuple[Poly, int]]:
    """Split a squarefree monic f into (product-of-irreducibles, degree) parts."""
    out = []
    h = (0, 1)
    d = 0
    rest = f
    while degree(rest) > 2 * (d + 1) - 1 and degree(rest) > 0:
        d += 1
        h = pow_mod(h, ell, rest, ell)
        g = gcd(sub(h, (0, 1), ell), rest, ell)
        if degree(g) > 0:
            out.append((g, d))
            rest = exact_div(rest, g, ell)
            h = divmod_poly(h, rest, ell)[1]
    if degree(rest) > 0:
        out.append((rest, degree(rest)))
    return out


def _equal_degree_split(f: Poly, d: int, ell: int, rng: random.Random) -> list[Poly]:
    """Cantor-Zassenhaus on a squarefree f that is a product of degree-d factors."""
    n = degree(f)
    if n == d:
        return [f]
    e = (ell ** d - 1) // 2
    while True:
        a = normalize([rng.randrange(ell) for _ in range(n)], ell)
        if degree(a) < 1:
            continue
        g = gcd(a, f, ell)
        if degree(g) > 0:
            pieces = [g, exact_div(f, g, ell)]
        else:
            b = sub(pow_mod(a, e, f, ell), (1,), ell)
            g = gcd(b, f, ell)
            if degree(g) == 0 or degree(g) == n:
                continue
            pieces = [g, exact_div(f, g, ell)]
        out = []
        for piece in pieces:
            out.extend(_equal_degree_split(monic(piece, ell), d, ell, rng))
        return out


def factor(f: Poly, ell: int) -> list[tuple[Poly, int]]:
    """Factor f into monic irreducibles, sorted by (degree, coefficients).

    Returns [(pi, multiplicity), ...]; the leading unit is discarded.
    """
    if is_zero(f):
        raise ValueError("cannot factor the zero polynomial")
    f = monic(f, ell)
    if degree(f) == 0:
        return []
    seed = 0
    for c in f:
        seed = seed * ell + c
    rng = random.Random(seed ^ 0x5F3759DF)
    out = []
    for sqf, mult in _squarefree_parts(f, ell):
        for prod, d in _distinct_degree(sqf, ell):
            for pi in _equal_degree_split(prod, d, ell, rng):
                out.append((pi, mult))
    out.sort(key=lambda t: (degree(t[0]), t[0]))
    return out


def poly_sqrt(f: Poly, ell: int) -> Poly | None:
    """Return g with g*g = f, or None if f is not a perfect square.

    The root is normalized to have leading coefficient in [1, (l-1)/2];
    f = 0 returns the zero polynomial.
    """
    if is_zero(f):
        return ()
    n = degree(f)
    if n % 2:
        return None
    lead = f[-1]
    if pow(lead, (ell - 1) // 2, ell) != 1:
        return None
    s = _sqrt_mod(lead, ell)
    m = n // 2
    g = [0] * (m + 1)
    g[m] = s
    # match coefficients from the top down: f[n-j] determines g[m-j]
    inv2s = pow(2 * s % ell, -1, ell)
    for j in range(1, m + 1):
        acc = 0
        for i in range(1, j):
            acc += g[m - i] * g[m - j + i]
        c = (f[n - j] - acc) % ell
        g[m - j] = (c * inv2s) % ell
    gt = tuple(g)
    if mul(gt, gt, ell) != f:
        return None
    if gt[-1] > ell // 2:
        gt = neg(gt, ell)
    return gt


def _sqrt_mod(a: int, ell: int) -> int:
    """Square root of a quadratic residue a mod odd prime ell (Tonelli-Shanks)."""
    a %= ell
    if a == 0:
        return 0
    if ell % 4 == 3:
        return pow(a, (ell + 1) // 4, ell)
    q, s = ell - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (ell - 1) // 2, ell) != ell - 1:
        z += 1
    m, c, t, r = s, pow(z, q, ell), pow(a, q, ell), pow(a, (q + 1) // 2, ell)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % ell
            i += 1
        b = pow(c, 1 << (m - i - 1), ell)
        m, c = i, b * b % ell
        t, r = t * c % ell, r * b % ell
    return r
