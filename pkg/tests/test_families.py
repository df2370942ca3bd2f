import math

import pytest

from surfrank.errors import UnsupportedError
from surfrank.families import (
    BOUNDARY_MARGIN,
    FamilySpec,
    enumerate_family,
    enumerate_Pd,
    filter_SN,
    mahler_measure,
    mahler_measure_full,
    sample_family,
)
from surfrank.surfaces import SurfaceQ

GOLDEN_RATIO = (1 + math.sqrt(5)) / 2


def test_mahler_examples():
    assert mahler_measure((-2, 1)) == pytest.approx(2, abs=1e-10)  # T - 2
    assert mahler_measure((1, 0, 1)) == pytest.approx(1, abs=1e-10)  # T^2 + 1
    assert mahler_measure((-1, -1, 1)) == pytest.approx(GOLDEN_RATIO, abs=1e-10)
    assert mahler_measure((7,)) == 7  # degree 0: |constant|


def test_mahler_error_bound_is_small_and_positive():
    full = mahler_measure_full((-1, -1, 1))
    assert 0 <= full.error_bound < 1e-8


def test_mahler_scaling_and_multiplicativity(rng):
    for _ in range(60):
        d1, d2 = rng.randrange(1, 4), rng.randrange(1, 4)
        p = [rng.randint(-5, 5) for _ in range(d1)] + [rng.randint(1, 5)]
        q = [rng.randint(-5, 5) for _ in range(d2)] + [rng.randint(1, 5)]
        c = rng.choice([-3, -2, 2, 5])
        assert mahler_measure([c * x for x in p]) == pytest.approx(
            abs(c) * mahler_measure(p), rel=1e-8
        )
        from surfrank import intpoly

        prod = intpoly.mul(tuple(p), tuple(q))
        assert mahler_measure(prod) == pytest.approx(
            mahler_measure(p) * mahler_measure(q), rel=1e-8
        )


def test_enumerate_linear_mahler():
    # mu(aT + b) = max(|a|, |b|); strictly below 2 leaves exactly 6
    got = sorted(enumerate_Pd(1, 2, "mahler"))
    assert got == sorted([(0, 1), (0, -1), (1, 1), (-1, 1), (1, -1), (-1, -1)])


def test_enumerate_linear_height():
    got = list(enumerate_Pd(1, 2, "height"))
    assert len(got) == 6
    assert all(abs(c) < 2 for p in got for c in p)
    assert all(p[-1] != 0 for p in got)


def test_enumerate_height_count_matches_closed_form():
    for d, M in [(1, 3), (2, 2), (2, 3)]:
        count = sum(1 for _ in enumerate_Pd(d, M, "height"))
        assert count == 2 * (M - 1) * (2 * M - 1) ** d


def test_enumerate_deterministic_lex_order():
    a = list(enumerate_Pd(1, 3, "height"))
    b = list(enumerate_Pd(1, 3, "height"))
    assert a == b == sorted(a)


def test_mahler_bound_one_has_no_members():
    # mu >= |lead| >= 1 always; strict bound 1 with the boundary margin
    # excludes everything (cyclotomic-like cases land in the ambiguous count)
    it = enumerate_Pd(2, 1, "mahler")
    members = list(it)
    assert members == []
    assert it.boundary_ambiguous > 0


def test_enumerate_family_golden_count():
    spec = FamilySpec(1, 1, 2, "height")
    stream = enumerate_family(spec)
    count = sum(1 for _ in stream)
    # A box: 6 leads x 7 constants; B box: 14 x 15; no vanishing pairs
    # (4A^3 has odd degree 3, 27B^2 has even degree 2, so they never cancel)
    assert count == 42 * 210 == 8820
    assert stream.skipped == 0


def test_family_contains_t_t():
    spec = FamilySpec(1, 1, 2, "height")
    assert SurfaceQ((0, 1), (0, 1)) in set(enumerate_family(spec))


def test_family_monotone_in_M():
    small = set(enumerate_family(FamilySpec(1, 1, 2, "height")))
    large = set(enumerate_family(FamilySpec(1, 1, 3, "height")))
    assert small <= large


def test_filter_sn():
    surfaces = [SurfaceQ((0, 5), (5,)), SurfaceQ((1,), (0, 1))]
    assert list(filter_SN(surfaces, 1)) == surfaces
    kept = list(filter_SN(surfaces, 5))
    assert kept == [SurfaceQ((1,), (0, 1))]
    kept35 = list(filter_SN([SurfaceQ((1,), (0, 1))], 35))
    assert len(kept35) == 1
    for bad in (6, 10, 25, 9):
        with pytest.raises(UnsupportedError):
            list(filter_SN(surfaces, bad))


def test_sample_family_determinism_and_count():
    spec = FamilySpec(1, 1, 5, "height")
    assert sample_family(spec, 0, 1) == []
    a = sample_family(spec, 25, 7)
    b = sample_family(spec, 25, 7)
    assert a == b
    assert len(a) == 25
    for s in a:
        assert len(s.a) == 2 and len(s.b) == 2
        assert all(abs(c) < 25 for c in s.a)
        assert all(abs(c) < 125 for c in s.b)


def test_sample_family_mahler_acceptance_rate():
    # exhaustive fraction of the linear superset box passing the mu filter
    d, bound = 1, 10
    box = [(a0, a1) for a0 in range(-bound, bound + 1)
           for a1 in range(-bound, bound + 1) if a1 != 0]
    inside = sum(
        1 for p in box if mahler_measure_full(p).value < bound - BOUNDARY_MARGIN
    )
    exact = inside / len(box)

    spec = FamilySpec(1, 1, 2, "mahler")  # A bound = 4, B bound = 8 (not used here)
    stats = {}
    sample_family(FamilySpec(d, 1, 1, "mahler"), 0, 0, stats)  # shape check only
    # empirical acceptance for the same (d, bound) box via repeated draws
    import random

    rng = random.Random(11)
    from surfrank.families import _draw_poly

    counters = {"rejected_mahler": 0, "draws": 0, "rejected_discriminant": 0}
    n = 2000
    for _ in range(n):
        _draw_poly(d, bound, "mahler", rng, counters)
    rate = n / (n + counters["rejected_mahler"])
    se = math.sqrt(exact * (1 - exact) / n)
    assert abs(rate - exact) <= 4 * se + 0.02


def test_polyiter_rejects_bad_args():
    with pytest.raises(ValueError):
        enumerate_Pd(0, 2)
    with pytest.raises(ValueError):
        enumerate_Pd(1, 2, "size")
    with pytest.raises(ValueError):
        FamilySpec(0, 1, 1)
