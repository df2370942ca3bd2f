"""Shared oracles and helpers.

The enumeration oracle counts projective points of y^2 = x^3 + ax + b by the
full (x, y) double loop using only field operations, independent of the
character-sum and group-order paths it is used to check.
"""

from __future__ import annotations

import random

import pytest

from surfrank.errors import BadSurfaceReductionError
from surfrank.surfaces import SurfaceFq


def projective_trace_oracle(a, b, F) -> int:
    """q + 1 - #points, counting every projective point (singular included)."""
    n = 1  # the point at infinity
    for x in F.elements():
        fx = F.add(F.mul(F.mul(x, x), x), F.add(F.mul(a, x), b))
        for y in F.elements():
            if F.mul(y, y) == fx:
                n += 1
    return F.q + 1 - n


def random_surface(rng: random.Random, ell: int, m: int, n: int) -> SurfaceFq | None:
    """Random surface with deg A = m, deg B = n, or None if degenerate."""
    a = tuple(rng.randrange(ell) for _ in range(m)) + (rng.randrange(1, ell),)
    b = tuple(rng.randrange(ell) for _ in range(n)) + (rng.randrange(1, ell),)
    try:
        return SurfaceFq(ell, a, b)
    except BadSurfaceReductionError:
        return None


def brute_power_sums(s: SurfaceFq, kmax: int):
    """Independent oracle: sum raw fiber traces over all of P^1(F_{l^k}).

    Walks every point of the projective line over each extension, evaluating
    the fiber there and counting points; shares nothing with the place
    classification and Weil-recursion path it checks.
    """
    from surfrank import fppoly
    from surfrank.ffield import make_extension
    from surfrank.surfaces import infinity_model
    from surfrank.traces import trace_naive

    ell = s.ell
    a_inf, b_inf = infinity_model(s)
    ai, bi = fppoly.eval_at(a_inf, 0, ell), fppoly.eval_at(b_inf, 0, ell)
    out = []
    for k in range(1, kmax + 1):
        F = make_extension(ell, k)
        total = 0
        for t in F.elements():
            av = bv = 0
            for c in reversed(s.a):
                av = F.add(F.mul(av, t), F.from_base(c))
            for c in reversed(s.b):
                bv = F.add(F.mul(bv, t), F.from_base(c))
            total += trace_naive(av, bv, F).a
        total += trace_naive(F.from_base(ai), F.from_base(bi), F).a
        out.append(total)
    return out


@pytest.fixture
def rng():
    return random.Random(20260810)
