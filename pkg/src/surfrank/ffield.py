"""Prime fields F_l (l > 3), their extensions F_{l^k}, and quadratic characters.

Elements are plain Python ints throughout.  In a PrimeField they are residues
in [0, l); in an ExtField of degree k they are indices in [0, l^k) encoding
the coefficient vector (c_0, ..., c_{k-1}) in base l (little-endian), so the
constant c embeds as the index c.  Using ints keeps inner loops free of
object churn and lets batch code live in numpy.

Extension fields are defined by an explicit monic irreducible; the canonical
field returned by make_extension(l, k) uses the first irreducible of degree k
in ascending lexicographic order of (a_0, ..., a_{k-1}), so construction is
deterministic.  All field objects are immutable after construction and safe
to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import fppoly
from .errors import InvalidDegreeError

__all__ = ["PrimeField", "ExtField", "CharTable", "legendre_chi", "make_extension", "char_table"]

# Scalar trace loops stay exact well below 2^63; table-backed batch paths are
# only built for fields up to this many elements.
MAX_TABLE_FIELD = 10**6


def legendre_chi(a: int, ell: int) -> int:
    """Quadratic character of a mod ell: 0 on multiples of ell, else +/-1."""
    a %= ell
    if a == 0:
        return 0
    return 1 if pow(a, (ell - 1) // 2, ell) == 1 else -1


@dataclass(frozen=True)
class CharTable:
    """Lookup table for the quadratic character mod ell."""

    ell: int
    table: np.ndarray = field(compare=False, repr=False)

    def __post_init__(self):
        t = self.table
        if len(t) != self.ell or t[0] != 0:
            raise ValueError("malformed character table")
        if int(np.count_nonzero(t == 1)) != (self.ell - 1) // 2:
            raise ValueError("wrong square count in character table")

    def __getitem__(self, a: int) -> int:
        return int(self.table[a % self.ell])


def _build_char_table(ell: int) -> CharTable:
    t = np.full(ell, -1, dtype=np.int8)
    t[0] = 0
    x = np.arange(1, ell, dtype=np.int64)
    t[np.unique(x * x % ell)] = 1
    return CharTable(ell, t)


_char_table_small = lru_cache(maxsize=256)(_build_char_table)


def char_table(ell: int) -> CharTable:
    """Character table for a prime ell; small moduli are cached, large rebuilt."""
    if ell <= 65536:
        return _char_table_small(ell)
    return _build_char_table(ell)


class PrimeField:
    """F_l for a prime l > 3; elements are residues in [0, l)."""

    __slots__ = ("ell", "q", "degree")

    def __init__(self, ell: int):
        if ell <= 3 or not _is_prime(ell):
            raise ValueError(f"modulus must be a prime > 3, got {ell}")
        self.ell = ell
        self.q = ell
        self.degree = 1

    def __repr__(self):
        return f"PrimeField({self.ell})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.ell == self.ell

    def __hash__(self):
        return hash(("PrimeField", self.ell))

    @property
    def one(self) -> int:
        return 1

    def add(self, a, b):
        return (a + b) % self.ell

    def sub(self, a, b):
        return (a - b) % self.ell

    def neg(self, a):
        return -a % self.ell

    def mul(self, a, b):
        return a * b % self.ell

    def inv(self, a):
        if a % self.ell == 0:
            raise ZeroDivisionError("inversion of zero")
        return pow(a, -1, self.ell)

    def pow(self, a, e):
        return pow(a, e, self.ell)

    def from_base(self, c: int) -> int:
        return c % self.ell

    def chi(self, a) -> int:
        return legendre_chi(a, self.ell)

    def sqrt(self, a) -> int | None:
        a %= self.ell
        if a == 0:
            return 0
        if self.chi(a) != 1:
            return None
        return fppoly._sqrt_mod(a, self.ell)

    def elements(self):
        return range(self.ell)


class ExtField:
    """F_{l^k} presented as F_l[T]/(defining); elements are base-l indices."""

    def __init__(self, ell: int, k: int, defining: tuple[int, ...]):
        if k < 1:
            raise InvalidDegreeError(f"extension degree must be >= 1, got {k}")
        if ell <= 3 or not _is_prime(ell):
            raise ValueError(f"base characteristic must be a prime > 3, got {ell}")
        defining = fppoly.normalize(defining, ell)
        if fppoly.degree(defining) != k or defining[-1] != 1:
            raise ValueError("defining polynomial must be monic of the stated degree")
        if not fppoly.is_irreducible(defining, ell):
            raise ValueError("defining polynomial is reducible")
        self.ell = ell
        self.degree = k
        self.q = ell**k
        self.defining = defining
        self._cache: dict = {}

    def __repr__(self):
        return f"ExtField({self.ell}^{self.degree}, mod {list(self.defining)})"

    def __eq__(self, other):
        return (
            isinstance(other, ExtField)
            and other.ell == self.ell
            and other.defining == self.defining
        )

    def __hash__(self):
        return hash(("ExtField", self.ell, self.defining))

    # -- encoding ---------------------------------------------------------

    def encode(self, coeffs) -> int:
        idx = 0
        for c in reversed(fppoly.normalize(coeffs, self.ell)):
            idx = idx * self.ell + c
        return idx

    def decode(self, a: int) -> tuple[int, ...]:
        out = []
        while a:
            out.append(a % self.ell)
            a //= self.ell
        return tuple(out)

    def from_base(self, c: int) -> int:
        return c % self.ell

    @property
    def one(self) -> int:
        return 1

    # -- scalar arithmetic --------------------------------------------------

    def add(self, a, b):
        ell = self.ell
        out = 0
        mult = 1
        while a or b:
            out += ((a + b) % ell) * mult
            a //= ell
            b //= ell
            mult *= ell
        return out

    def neg(self, a):
        ell = self.ell
        out = 0
        mult = 1
        while a:
            out += (-a % ell) * mult
            a //= ell
            mult *= ell
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        prod = fppoly.mul(self.decode(a), self.decode(b), self.ell)
        return self.encode(fppoly.divmod_poly(prod, self.defining, self.ell)[1])

    def pow(self, a, e):
        if e < 0:
            return self.pow(self.inv(a), -e)
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inversion of zero")
        return self.pow(a, self.q - 2)

    def chi(self, a) -> int:
        if a == 0:
            return 0
        return 1 if self.pow(a, (self.q - 1) // 2) == 1 else -1

    def sqrt(self, a) -> int | None:
        if a == 0:
            return 0
        if self.chi(a) != 1:
            return None
        q = self.q
        if q % 4 == 3:
            return self.pow(a, (q + 1) // 4)
        # Tonelli-Shanks with the first non-residue in index order
        m2, odd = 0, q - 1
        while odd % 2 == 0:
            odd //= 2
            m2 += 1
        z = 2
        while self.chi(z) != -1:
            z += 1
        m, c, t, r = m2, self.pow(z, odd), self.pow(a, odd), self.pow(a, (odd + 1) // 2)
        while t != 1:
            t2, i = t, 0
            while t2 != 1:
                t2 = self.mul(t2, t2)
                i += 1
            b = self.pow(c, 1 << (m - i - 1))
            m, c = i, self.mul(b, b)
            t, r = self.mul(t, c), self.mul(r, b)
        return r

    def elements(self):
        return range(self.q)

    def frobenius(self, a):
        return self.pow(a, self.ell)

    # -- batch tables ------------------------------------------------------
    #
    # Everything below is lazy and only legal for q <= MAX_TABLE_FIELD.

    def _need_tables(self):
        if self.q > MAX_TABLE_FIELD:
            raise ValueError(f"field of size {self.q} exceeds the table budget")

    @property
    def digits(self) -> np.ndarray:
        """(q, k) matrix of coefficient vectors, row i = decode(i)."""
        if "digits" not in self._cache:
            self._need_tables()
            idx = np.arange(self.q, dtype=np.int64)
            cols = []
            for _ in range(self.degree):
                cols.append(idx % self.ell)
                idx = idx // self.ell
            self._cache["digits"] = np.stack(cols, axis=1)
        return self._cache["digits"]

    @property
    def enc_weights(self) -> np.ndarray:
        if "enc" not in self._cache:
            self._cache["enc"] = np.array(
                [self.ell**i for i in range(self.degree)], dtype=np.int64
            )
        return self._cache["enc"]

    @property
    def _reduction_rows(self) -> np.ndarray:
        """Row m = coefficient vector of T^m mod defining, m = 0..3k-3."""
        if "red" not in self._cache:
            k = self.degree
            rows = np.zeros((max(3 * k - 2, k), k), dtype=np.int64)
            cur = (1,)
            for m in range(rows.shape[0]):
                vec = cur + (0,) * (k - len(cur))
                rows[m, :] = vec
                cur = fppoly.divmod_poly(fppoly.shift(cur, 1), self.defining, self.ell)[1]
            self._cache["red"] = rows
        return self._cache["red"]

    def elementwise_mul(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Row-by-row field product of two (n, k) digit matrices."""
        k = self.degree
        n = u.shape[0]
        conv = np.zeros((n, 2 * k - 1), dtype=np.int64)
        for i in range(k):
            ui = u[:, i]
            for j in range(k):
                conv[:, i + j] += ui * v[:, j]
        return conv % self.ell @ self._reduction_rows[: 2 * k - 1] % self.ell

    def mul_matrix(self, c: int) -> np.ndarray:
        """(k, k) matrix M with (x*c) digits = x digits @ M mod l."""
        k = self.degree
        m = np.zeros((k, k), dtype=np.int64)
        for i in range(k):
            prod = self.decode(self.mul(self.ell**i if i else 1, c))
            m[i, : len(prod)] = prod
        return m

    @property
    def cube_digits(self) -> np.ndarray:
        """(q, k) digit matrix of x^3 for every element index x."""
        if "cube" not in self._cache:
            self._need_tables()
            d = self.digits
            sq = self.elementwise_mul(d, d)
            self._cache["cube"] = self.elementwise_mul(sq, d)
        return self._cache["cube"]

    @property
    def square_mask(self) -> np.ndarray:
        """Boolean mask over indices: True iff the element is a nonzero square."""
        if "sqmask" not in self._cache:
            self._need_tables()
            d = self.digits
            sq_idx = self.elementwise_mul(d, d) @ self.enc_weights
            mask = np.zeros(self.q, dtype=bool)
            mask[sq_idx[1:]] = True
            self._cache["sqmask"] = mask
        return self._cache["sqmask"]

    @property
    def frobenius_map(self) -> np.ndarray:
        """Index map x -> x^l (the l-power Frobenius is F_l-linear)."""
        if "frob" not in self._cache:
            self._need_tables()
            k = self.degree
            m = np.zeros((k, k), dtype=np.int64)
            for i in range(k):
                img = self.decode(self.pow(self.ell**i if i else 1, self.ell))
                m[i, : len(img)] = img
            self._cache["frob"] = (self.digits @ m % self.ell) @ self.enc_weights
        return self._cache["frob"]

    @property
    def place_reps(self) -> np.ndarray:
        """Smallest-index representatives of the degree-k Frobenius orbits.

        These are in bijection with the monic irreducibles of degree k over
        F_l (one orbit per closed point of the affine line of that degree).
        """
        if "reps" not in self._cache:
            frob = self.frobenius_map
            seen = np.zeros(self.q, dtype=bool)
            reps = []
            for i in range(self.q):
                if seen[i]:
                    continue
                orbit = [i]
                j = int(frob[i])
                while j != i:
                    orbit.append(j)
                    j = int(frob[j])
                for o in orbit:
                    seen[o] = True
                if len(orbit) == self.degree:
                    reps.append(i)
            self._cache["reps"] = np.array(reps, dtype=np.int64)
        return self._cache["reps"]

    def minimal_poly(self, a: int) -> tuple[int, ...]:
        """Minimal polynomial of the element a over F_l (monic, F_l coefficients)."""
        conj = []
        x = a
        while x not in conj:
            conj.append(x)
            x = self.frobenius(x)
        coeffs = [1]  # product of (T - c) with coefficients in this field
        for c in conj:
            new = [0] * (len(coeffs) + 1)
            negc = self.neg(c)
            for i, co in enumerate(coeffs):
                new[i + 1] = self.add(new[i + 1], co)
                new[i] = self.add(new[i], self.mul(negc, co))
            coeffs = new
        if any(co >= self.ell for co in coeffs):
            raise AssertionError("minimal polynomial coefficient outside base field")
        return fppoly.normalize(coeffs, self.ell)

    def eval_poly_all(self, coeffs) -> np.ndarray:
        """Indices of P(x) for every element x, for P with F_l coefficients."""
        self._need_tables()
        k = self.degree
        acc = np.zeros((self.q, k), dtype=np.int64)
        for c in reversed(fppoly.normalize(coeffs, self.ell)):
            acc = self.elementwise_mul(acc, self.digits)
            acc[:, 0] += c
        return acc % self.ell @ self.enc_weights


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=None)
def make_extension(ell: int, k: int):
    """Canonical field with l^k elements; the prime field itself for k = 1."""
    if k < 1:
        raise InvalidDegreeError(f"extension degree must be >= 1, got {k}")
    if k == 1:
        return PrimeField(ell)
    return ExtField(ell, k, fppoly.first_irreducible(ell, k))
