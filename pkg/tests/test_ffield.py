import pytest

from surfrank.errors import InvalidDegreeError
from surfrank.ffield import CharTable, ExtField, PrimeField, char_table, legendre_chi, make_extension
from surfrank import fppoly


def test_prime_field_inverse():
    F = PrimeField(5)
    assert F.inv(2) == 3
    for a in range(1, 5):
        assert F.mul(F.inv(a), a) == 1


def test_additive_identity():
    F = PrimeField(11)
    for a in range(11):
        assert F.add(a, 0) == a


def test_inversion_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        PrimeField(7).inv(0)
    with pytest.raises(ZeroDivisionError):
        make_extension(5, 2).inv(0)


def test_custom_defining_polynomial_multiplication():
    # T * T = -2 = 3 in F_5[T]/(T^2 + 2)
    F = ExtField(5, 2, (2, 0, 1))
    t = F.encode((0, 1))
    assert F.decode(F.mul(t, t)) == (3,)


def test_legendre_examples():
    assert legendre_chi(0, 5) == 0
    assert legendre_chi(4, 5) == 1
    assert legendre_chi(2, 5) == -1


@pytest.mark.parametrize("ell", [5, 7, 11, 13, 31, 101])
def test_legendre_sums_to_zero_and_multiplicative(ell, rng):
    assert sum(legendre_chi(a, ell) for a in range(ell)) == 0
    for _ in range(200):
        a, b = rng.randrange(ell), rng.randrange(ell)
        assert legendre_chi(a * b, ell) == legendre_chi(a, ell) * legendre_chi(b, ell)


@pytest.mark.parametrize("ell", [5, 7, 13, 1009])
def test_char_table_invariants(ell):
    tab = char_table(ell)
    assert tab[0] == 0
    assert int((tab.table == 1).sum()) == (ell - 1) // 2
    for a in range(min(ell, 50)):
        assert tab[a] == legendre_chi(a, ell)


def test_char_table_rejects_malformed():
    import numpy as np

    with pytest.raises(ValueError):
        CharTable(5, np.array([1, 1, -1, -1, 1], dtype=np.int8))


def test_make_extension_degree_one_is_prime_field():
    F = make_extension(5, 1)
    assert isinstance(F, PrimeField)
    assert F.q == 5


def test_make_extension_lex_first_defining_poly():
    # independent scan: first monic quadratic over F_5 without a root,
    # in lex order on (a0, a1)
    expected = None
    for a0 in range(5):
        for a1 in range(5):
            if all((x * x + a1 * x + a0) % 5 for x in range(5)):
                expected = (a0, a1, 1)
                break
        if expected:
            break
    assert make_extension(5, 2).defining == expected == (1, 1, 1)


def test_make_extension_deterministic_and_sized():
    assert make_extension(7, 3).q == 343
    assert make_extension(5, 2) is make_extension(5, 2)
    assert ExtField(5, 2, fppoly.first_irreducible(5, 2)) == make_extension(5, 2)


def test_zero_degree_rejected():
    with pytest.raises(InvalidDegreeError):
        make_extension(5, 0)


@pytest.mark.parametrize("ell,k", [(5, 2), (5, 3), (5, 5), (7, 3), (11, 2), (13, 2)])
def test_frobenius_fixes_exactly_the_prime_subfield(ell, k):
    F = make_extension(ell, k)
    fixed = [x for x in F.elements() if F.frobenius(x) == x]
    assert fixed == list(range(ell))


@pytest.mark.parametrize("field", [PrimeField(13), make_extension(5, 2), make_extension(7, 3)])
def test_field_axioms_on_random_triples(field, rng):
    q = field.q
    for _ in range(1000):
        a, b, c = (rng.randrange(q) for _ in range(3))
        assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
        assert field.add(field.add(a, b), c) == field.add(a, field.add(b, c))
        assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))


@pytest.mark.parametrize("field", [PrimeField(13), make_extension(5, 3)])
def test_sqrt_and_chi_agree(field, rng):
    for _ in range(100):
        a = rng.randrange(field.q)
        s = field.sqrt(a)
        if field.chi(a) == -1:
            assert s is None
        else:
            assert s is not None and field.mul(s, s) == a


def test_ext_field_batch_tables_match_scalar_ops():
    F = make_extension(5, 3)
    digits = F.digits
    sq = F.elementwise_mul(digits, digits) @ F.enc_weights
    for x in range(F.q):
        assert int(sq[x]) == F.mul(x, x)
    cube = F.cube_digits @ F.enc_weights
    for x in range(0, F.q, 7):
        assert int(cube[x]) == F.mul(F.mul(x, x), x)
    mask = F.square_mask
    for x in range(F.q):
        assert bool(mask[x]) == (F.chi(x) == 1)


def test_place_reps_cover_degree_exactly():
    F = make_extension(5, 2)
    reps = set(int(r) for r in F.place_reps)
    # 10 = (25 - 5)/2 orbits of size 2
    assert len(reps) == 10
    for r in reps:
        assert F.frobenius(F.frobenius(r)) == r and F.frobenius(r) != r
    # minimal polynomials are the monic irreducible quadratics, each once
    polys = sorted(F.minimal_poly(r) for r in reps)
    assert polys == sorted(fppoly.irreducibles(5, 2))
