"""Exact L-polynomials of non-isotrivial elliptic surfaces over F_l(T).

The pipeline per surface:

 1. classify_places gives the conductor degree deg(n); the L-polynomial has
    degree n = deg(n) - 4.
 2. power_sums accumulates, for k = 1..n,

        c_k = sum over places v with deg(v) | k of deg(v) * a_v^(k / deg v),

    where a_v^(j) is the j-th Weil power of the good-fiber trace, (+-1)^j at
    multiplicative places, and 0 at additive places.  Good places away from
    the discriminant are enumerated as Frobenius orbits of elements of the
    canonical extension fields, so each place costs a single point count over
    its residue field.
 3. Newton's identities turn the power sums p_k = -c_k of the reciprocal
    roots into exact integer coefficients; integrality, the Weil bound
    |gamma| = q, and the functional equation u^n q^n L(1/(q^2 u)) = eps L(u)
    are verified on every polynomial produced.

The analytic rank is the exact multiplicity of (1 - qu) in L, computed by
repeated synthetic division over Z.  find_sections gives a positive-rank
witness by exhaustive search for polynomial sections (x(T), y(T)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fppoly
from .errors import InconsistentDataError, IsotrivialSurfaceError, SearchTooLargeError
from .ffield import PrimeField, make_extension
from .surfaces import (
    ADDITIVE,
    GOOD,
    MULT_NONSPLIT,
    MULT_SPLIT,
    ConductorSummary,
    SurfaceFq,
    classify_places,
    discriminant_poly,
    format_surface_text,
    is_isotrivial,
)
from .traces import _point_order, trace_bsgs, trace_naive, trace_power, trace_row_values

__all__ = [
    "LPolynomial", "RankReport", "power_sums", "newton_lpoly", "analytic_rank",
    "functional_equation_check", "find_sections", "surface_lpolynomial",
    "rank_report", "surface_record", "WEIL_REL_TOL",
]

WEIL_REL_TOL = 1e-6

# find_sections refuses candidate spaces larger than this.
SECTION_SEARCH_BUDGET = 10**9


@dataclass(frozen=True)
class LPolynomial:
    """L(u) with exact integer coefficients, ascending; coeffs[0] = 1."""

    q: int
    coeffs: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, num: int, den: int) -> int:
        """L(num/den) * den^n, exactly."""
        acc = 0
        for j, b in enumerate(self.coeffs):
            acc += b * num**j * den ** (self.n - j)
        return acc


@dataclass(frozen=True)
class RankReport:
    analytic_rank: int
    sections_found: int


def power_sums(s: SurfaceFq, summary: ConductorSummary, kmax: int) -> list[int]:
    """c_1..c_kmax by accumulation over places of P^1, exactly.

    Places dividing the discriminant (and infinity) contribute through the
    reports in `summary.analyzed`, which carry minimal-model traces; all other
    places are good fibers as written.
    """
    if is_isotrivial(s):
        raise IsotrivialSurfaceError("power sums need a nonconstant j-invariant")
    ell = s.ell
    c = [0] * (kmax + 1)
    bad_degrees: dict[int, int] = {}
    for r in summary.analyzed:
        if r.place != "inf":
            bad_degrees[r.degree] = bad_degrees.get(r.degree, 0) + 1
        for k in range(r.degree, kmax + 1, r.degree):
            c[k] += r.degree * _local_power(r.type, r.trace, ell**r.degree, k // r.degree)

    for d in range(1, kmax + 1):
        if d == 1:
            values = trace_row_values(s.a, s.b, ell)
            disc = _disc_row(s, ell)
            for t in range(ell):
                if disc[t] != 0:
                    a1 = int(values[t])
                    for k in range(1, kmax + 1):
                        c[k] += trace_power(a1, ell, k)
            n_bad = int(np.count_nonzero(disc == 0))
        else:
            F = make_extension(ell, d)
            reps = F.place_reps
            a_vals = F.eval_poly_all(s.a)[reps]
            b_vals = F.eval_poly_all(s.b)[reps]
            d_vals = F.eval_poly_all(discriminant_poly(s))[reps]
            n_bad = 0
            for abar, bbar, dv in zip(a_vals, b_vals, d_vals):
                if dv == 0:
                    n_bad += 1
                    continue
                if F.q <= 10**6:
                    a1 = trace_naive(int(abar), int(bbar), F).a
                else:
                    a1 = trace_bsgs(int(abar), int(bbar), F).a
                for k in range(d, kmax + 1, d):
                    c[k] += d * trace_power(a1, F.q, k // d)
        if n_bad != bad_degrees.get(d, 0):
            raise InconsistentDataError(
                f"degree-{d} discriminant places ({bad_degrees.get(d, 0)}) do not "
                f"match singular orbit count ({n_bad})"
            )
    return c[1:]


def _disc_row(s: SurfaceFq, ell: int) -> np.ndarray:
    t = np.arange(ell, dtype=np.int64)
    acc = np.zeros(ell, dtype=np.int64)
    for coeff in reversed(discriminant_poly(s)):
        acc = (acc * t + coeff) % ell
    return acc


def _local_power(typ: str, trace: int, q_v: int, j: int) -> int:
    if typ == GOOD:
        return trace_power(trace, q_v, j)
    if typ == MULT_SPLIT:
        return 1
    if typ == MULT_NONSPLIT:
        return (-1) ** j
    assert typ == ADDITIVE
    return 0


def newton_lpoly(c, q: int, n: int) -> LPolynomial:
    """L(u) of degree n from power sums c_1..c_n via Newton's identities.

    All arithmetic is exact; a non-integral coefficient or a Weil/functional
    equation violation raises InconsistentDataError (an upstream bug, e.g. a
    wrong conductor degree).
    """
    if len(c) < n:
        raise ValueError(f"need {n} power sums, got {len(c)}")
    p = [-ck for ck in c[:n]]
    e = [1]
    for j in range(1, n + 1):
        acc = 0
        sign = 1
        for i in range(1, j + 1):
            acc += sign * e[j - i] * p[i - 1]
            sign = -sign
        if acc % j:
            raise InconsistentDataError(f"Newton identity gave non-integer e_{j}")
        e.append(acc // j)
    coeffs = tuple((-1) ** j * e[j] for j in range(n + 1))
    lpoly = LPolynomial(q, coeffs)
    _validate(lpoly)
    return lpoly


def _validate(lpoly: LPolynomial) -> None:
    if lpoly.coeffs[0] != 1:
        raise InconsistentDataError("L(0) != 1")
    if lpoly.n > 0:
        _weil_circle_check(lpoly)
    functional_equation_check(lpoly)


def _weil_circle_check(lpoly: LPolynomial) -> None:
    """Check every reciprocal root satisfies |gamma| = q to WEIL_REL_TOL.

    Repeated roots ruin companion-matrix accuracy, so the polynomial is first
    split into squarefree layers by exact gcds over Q; each layer has simple
    roots, which Newton polishing then pins far below the tolerance.
    """
    from fractions import Fraction

    f = [Fraction(c) for c in lpoly.coeffs]
    while len(f) > 1:
        df = [i * c for i, c in enumerate(f)][1:]
        g = _qgcd(f, df)
        layer = _qdiv_exact(f, g)
        _check_simple_layer(layer, lpoly.q, lpoly.coeffs)
        f = g


def _qdivmod(a, b):
    from fractions import Fraction

    r = list(a)
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    db = len(b) - 1
    inv = 1 / b[-1]
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] * inv
        quot[i - db] = c
        if c:
            for j in range(db + 1):
                r[i - db + j] -= c * b[j]
    while r and not r[-1]:
        r.pop()
    return quot, r


def _qdiv_exact(a, b):
    quot, rem = _qdivmod(a, b)
    if rem:
        raise InconsistentDataError("inexact division in the Weil check")
    return quot


def _qgcd(a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, _qdivmod(a, b)[1]
    return [c / a[-1] for c in a]  # monic


def _check_simple_layer(layer, q: int, original) -> None:
    n = len(layer) - 1
    if n == 0:
        return
    # scale u = x / q so the roots to test sit on the unit circle
    m = np.array([float(c) * float(q) ** (n - j) for j, c in enumerate(layer)])
    roots = np.roots(m[::-1])
    dm = m[1:] * np.arange(1, n + 1)
    for _ in range(4):
        val = np.polyval(m[::-1], roots)
        dval = np.polyval(dm[::-1], roots)
        roots = roots - np.where(dval != 0, val / np.where(dval == 0, 1, dval), 0)
    err = np.abs(np.abs(roots) - 1.0)
    if np.any(err > WEIL_REL_TOL):
        raise InconsistentDataError(
            f"reciprocal roots off the |gamma| = q circle for L = {original}: "
            f"max relative error {err.max():.3e}"
        )


def functional_equation_check(lpoly: LPolynomial) -> int:
    """Sign eps with u^n q^n L(1/(q^2 u)) = eps L(u), checked exactly."""
    b = lpoly.coeffs
    q = lpoly.q
    n = lpoly.n
    for eps in (1, -1):
        if all(b[n - i] * q ** (2 * i) == eps * b[i] * q**n for i in range(n + 1)):
            return eps
    raise InconsistentDataError("no functional-equation sign matches")


def analytic_rank(lpoly: LPolynomial) -> int:
    """Exact multiplicity of the factor (1 - qu) in L."""
    coeffs = list(lpoly.coeffs)
    q = lpoly.q
    rank = 0
    while len(coeffs) > 1:
        quotient = []
        carry = 0
        for b in coeffs[:-1]:
            carry = b + q * carry
            quotient.append(carry)
        if coeffs[-1] + q * carry != 0:
            break
        # L = (1 - qu) * Q: the synthetic-division prefix is Q's coefficients
        coeffs = quotient
        rank += 1
    return rank


def find_sections(s: SurfaceFq, max_deg: int) -> list[tuple[tuple, tuple]]:
    """All sections (x(T), y(T)) with deg x <= max_deg and y != 0.

    Exhaustive scan over candidate x; a candidate succeeds when
    x^3 + Ax + B is a nonzero perfect square in F_l[T].  Each section is
    reported once with y normalized to leading coefficient in [1, (l-1)/2].
    """
    ell = s.ell
    space = ell ** (max_deg + 1)
    if space > SECTION_SEARCH_BUDGET:
        raise SearchTooLargeError(f"search space {space} exceeds {SECTION_SEARCH_BUDGET}")
    out = []
    for idx in range(space):
        coeffs = []
        v = idx
        for _ in range(max_deg + 1):
            coeffs.append(v % ell)
            v //= ell
        x = fppoly.normalize(coeffs, ell)
        x3 = fppoly.mul(fppoly.mul(x, x, ell), x, ell)
        f = fppoly.add(x3, fppoly.add(fppoly.mul(s.a, x, ell), s.b, ell), ell)
        if fppoly.is_zero(f):
            continue  # y = 0: two-torsion
        y = fppoly.poly_sqrt(f, ell)
        if y is not None:
            out.append((x, y))
    return out


def section_is_nontorsion(s: SurfaceFq, section, probes: int = 3) -> bool:
    """Torsion screen by specializing at good t values.

    A torsion section has one fixed order (at most 12) at every good fiber,
    so the section is certified non-torsion when a specialized point has
    order above 12 or when the orders at different fibers disagree.  Equal
    small orders stay ambiguous and the section is not counted.
    """
    ell = s.ell
    x_poly, y_poly = section
    F = PrimeField(ell)
    disc = discriminant_poly(s)
    orders = []
    for t in range(ell):
        if fppoly.eval_at(disc, t, ell) == 0:
            continue
        point = (fppoly.eval_at(x_poly, t, ell), fppoly.eval_at(y_poly, t, ell))
        a_t = fppoly.eval_at(s.a, t, ell)
        b_t = fppoly.eval_at(s.b, t, ell)
        group_order = ell + 1 - trace_naive(a_t, b_t, F).a
        order = _point_order(point, group_order, a_t, F)
        if order > 12:
            return True
        orders.append(order)
        if len(orders) >= probes:
            break
    return len(set(orders)) > 1


def surface_lpolynomial(s: SurfaceFq, summary: ConductorSummary | None = None):
    """(conductor summary, L-polynomial) for a non-isotrivial surface."""
    if is_isotrivial(s):
        raise IsotrivialSurfaceError(format_surface_text(s))
    if summary is None:
        summary = classify_places(s)
    n = summary.lpoly_degree
    if n < 0:
        raise InconsistentDataError(f"negative L-degree {n} for a non-isotrivial surface")
    c = power_sums(s, summary, n)
    return summary, newton_lpoly(c, s.ell, n)


def rank_report(s: SurfaceFq, section_search_deg: int | None = None) -> RankReport:
    _, lpoly = surface_lpolynomial(s)
    sections = 0
    if section_search_deg is not None:
        found = find_sections(s, section_search_deg)
        sections = sum(1 for sec in found if section_is_nontorsion(s, sec))
    return RankReport(analytic_rank(lpoly), sections)


def surface_record(s: SurfaceFq, section_search_deg: int | None = None) -> dict:
    """Flat per-surface record, the shape emitted by the CLI and experiments."""
    summary, lpoly = surface_lpolynomial(s)
    rec = {
        "surface": format_surface_text(s),
        "ell": s.ell,
        "deg_n": summary.deg_n,
        "lpoly": ",".join(str(b) for b in lpoly.coeffs),
        "analytic_rank": analytic_rank(lpoly),
        "epsilon": functional_equation_check(lpoly),
    }
    if section_search_deg is not None:
        found = find_sections(s, section_search_deg)
        rec["sections_found"] = sum(1 for sec in found if section_is_nontorsion(s, sec))
    return rec
