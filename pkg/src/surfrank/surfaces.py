"""Elliptic surfaces y^2 = x^3 + A(T)x + B(T) over Q and over F_l.

Provides discriminants, reduction mod l, per-place minimalization and
reduction-type classification over P^1 (the affine places are the monic
irreducible factors of the discriminant; the place at infinity is handled on
the S = 1/T model with weight-4/6 twisted coefficients), and the conductor
degree.  Since l > 3 everywhere, additive reduction is tame and the conductor
exponent is 0, 1, or 2.

Place classification reuses the fiber classifier from the trace module: after
local minimalization the reduced fiber over the residue field is smooth
(good), a node (multiplicative, split or not), or a cusp (additive).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil

from . import fppoly, intpoly
from .errors import BadSurfaceReductionError
from .ffield import ExtField, PrimeField
from .traces import CUSP, NODE_NONSPLIT, NODE_SPLIT, SMOOTH, trace_bsgs, trace_naive

__all__ = [
    "SurfaceQ", "SurfaceFq", "PlaceReport", "ConductorSummary",
    "discriminant_poly", "reduce_mod", "classify_places", "is_isotrivial",
    "parse_surface_text", "format_surface_text", "INFINITY",
]

GOOD = "good"
MULT_SPLIT = "mult_split"
MULT_NONSPLIT = "mult_nonsplit"
ADDITIVE = "additive"

INFINITY = "inf"

# Residue fields larger than this use group-order search instead of the
# full character sum for good-fiber traces.
NAIVE_TRACE_LIMIT = 10**6


@dataclass(frozen=True)
class SurfaceQ:
    """Integer-coefficient surface; coefficients ascending, trailing zeros stripped."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    def __init__(self, a, b):
        object.__setattr__(self, "a", intpoly.normalize(a))
        object.__setattr__(self, "b", intpoly.normalize(b))
        if intpoly.is_zero(discriminant_poly(self)):
            raise ValueError("discriminant is identically zero")


@dataclass(frozen=True)
class SurfaceFq:
    """Surface over F_ell; degree_drop records degree lost in a reduction."""

    ell: int
    a: tuple[int, ...]
    b: tuple[int, ...]
    degree_drop: tuple[int, int] = field(default=(0, 0), compare=False)

    def __init__(self, ell, a, b, degree_drop=(0, 0)):
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "a", fppoly.normalize(a, ell))
        object.__setattr__(self, "b", fppoly.normalize(b, ell))
        object.__setattr__(self, "degree_drop", degree_drop)
        if fppoly.is_zero(discriminant_poly(self)):
            raise BadSurfaceReductionError("discriminant vanishes identically")


@dataclass(frozen=True)
class PlaceReport:
    """Local data at a closed point of P^1: reduction type and trace.

    place is the monic irreducible (coefficient tuple) or INFINITY; trace is
    the Frobenius trace of the minimalized fiber over the residue field for
    good places, +1/-1 for split/nonsplit multiplicative, 0 for additive.
    """

    place: tuple[int, ...] | str
    degree: int
    type: str
    cond_exp: int
    trace: int


@dataclass(frozen=True)
class ConductorSummary:
    places: tuple[PlaceReport, ...]  # conductor exponent > 0 only
    deg_n: int
    lpoly_degree: int
    analyzed: tuple[PlaceReport, ...]  # every discriminant place plus infinity


def discriminant_poly(s):
    """Delta(T) = -16(4A^3 + 27B^2), exact over Z or over F_ell."""
    if isinstance(s, SurfaceFq):
        ell = s.ell
        a3 = fppoly.mul(fppoly.mul(s.a, s.a, ell), s.a, ell)
        b2 = fppoly.mul(s.b, s.b, ell)
        return fppoly.add(fppoly.scale(a3, -64, ell), fppoly.scale(b2, -432, ell), ell)
    a3 = intpoly.mul(intpoly.mul(s.a, s.a), s.a)
    b2 = intpoly.mul(s.b, s.b)
    return intpoly.normalize(intpoly.add(intpoly.scale(a3, -64), intpoly.scale(b2, -432)))


def reduce_mod(s: SurfaceQ, ell: int) -> SurfaceFq:
    """Coefficientwise reduction; fails if the reduced discriminant vanishes."""
    a = intpoly.reduce_mod(s.a, ell)
    b = intpoly.reduce_mod(s.b, ell)
    drop = (
        intpoly.degree(s.a) - fppoly.degree(a) if s.a else 0,
        intpoly.degree(s.b) - fppoly.degree(b) if s.b else 0,
    )
    return SurfaceFq(ell, a, b, degree_drop=drop)


def is_isotrivial(s) -> bool:
    """True iff the j-invariant 6912 A^3 / (4A^3 + 27B^2) is constant."""
    if isinstance(s, SurfaceFq):
        ell = s.ell
        if fppoly.is_zero(s.a) or fppoly.is_zero(s.b):
            return True
        if 3 * fppoly.degree(s.a) != 2 * fppoly.degree(s.b):
            return False
        a3 = fppoly.mul(fppoly.mul(s.a, s.a, ell), s.a, ell)
        b2 = fppoly.mul(s.b, s.b, ell)
        return fppoly.sub(fppoly.scale(a3, b2[-1], ell), fppoly.scale(b2, a3[-1], ell), ell) == ()
    if intpoly.is_zero(s.a) or intpoly.is_zero(s.b):
        return True
    if 3 * intpoly.degree(s.a) != 2 * intpoly.degree(s.b):
        return False
    a3 = intpoly.mul(intpoly.mul(s.a, s.a), s.a)
    b2 = intpoly.mul(s.b, s.b)
    diff = intpoly.add(intpoly.scale(a3, b2[-1]), intpoly.scale(b2, -a3[-1]))
    return intpoly.is_zero(diff)


def _residue_field(ell: int, pi):
    if fppoly.degree(pi) == 1:
        return PrimeField(ell)
    return ExtField(ell, fppoly.degree(pi), pi)


def _residue_element(f, pi, ell, F):
    """Image of f in F_ell[T]/(pi), as an element index of F."""
    r = fppoly.divmod_poly(f, pi, ell)[1]
    if isinstance(F, PrimeField):
        return r[0] if r else 0
    return F.encode(r)


def _good_trace(abar: int, bbar: int, F) -> int:
    if F.q <= NAIVE_TRACE_LIMIT:
        return trace_naive(abar, bbar, F).a
    return trace_bsgs(abar, bbar, F).a


_KIND_TO_TYPE = {
    SMOOTH: (GOOD, 0),
    NODE_SPLIT: (MULT_SPLIT, 1),
    NODE_NONSPLIT: (MULT_NONSPLIT, 1),
    CUSP: (ADDITIVE, 2),
}


def _local_report(a, b, pi, ell: int, label) -> PlaceReport:
    """Classify one place: minimalize, reduce the fiber, read off type and trace."""
    while True:
        va = fppoly.valuation(a, pi, ell)
        vb = fppoly.valuation(b, pi, ell)
        if (va is None or va >= 4) and (vb is None or vb >= 6):
            pi4 = fppoly.mul(fppoly.mul(pi, pi, ell), fppoly.mul(pi, pi, ell), ell)
            if not fppoly.is_zero(a):
                a = fppoly.exact_div(a, pi4, ell)
            if not fppoly.is_zero(b):
                b = fppoly.exact_div(b, fppoly.mul(pi4, fppoly.mul(pi, pi, ell), ell), ell)
        else:
            break
    F = _residue_field(ell, pi)
    abar = _residue_element(a, pi, ell, F)
    bbar = _residue_element(b, pi, ell, F)
    from .traces import _classify

    kind, known = _classify(abar, bbar, F)
    typ, f_v = _KIND_TO_TYPE[kind]
    trace = _good_trace(abar, bbar, F) if kind == SMOOTH else known
    return PlaceReport(label, fppoly.degree(pi), typ, f_v, trace)


def infinity_model(s: SurfaceFq) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Twisted coefficients at T = 1/S: (S^{4e} A(1/S), S^{6e} B(1/S))."""
    da = fppoly.degree(s.a)
    db = fppoly.degree(s.b)
    e = max(ceil(da / 4) if da >= 0 else 0, ceil(db / 6) if db >= 0 else 0)
    a_inf = [0] * (4 * e + 1)
    for i, c in enumerate(s.a):
        a_inf[4 * e - i] = c
    b_inf = [0] * (6 * e + 1)
    for i, c in enumerate(s.b):
        b_inf[6 * e - i] = c
    return fppoly.normalize(a_inf, s.ell), fppoly.normalize(b_inf, s.ell)


def classify_places(s: SurfaceFq) -> ConductorSummary:
    """Reduction data at every place of bad reduction, plus the conductor degree.

    `analyzed` additionally retains places where the naive model is singular
    but the minimal model is good (and a good infinity), since their corrected
    fiber traces feed the L-polynomial power sums.
    """
    ell = s.ell
    delta = discriminant_poly(s)
    reports = []
    for pi, _ in fppoly.factor(delta, ell):
        reports.append(_local_report(s.a, s.b, pi, ell, pi))
    a_inf, b_inf = infinity_model(s)
    reports.append(_local_report(a_inf, b_inf, (0, 1), ell, INFINITY))
    bad = tuple(r for r in reports if r.cond_exp > 0)
    deg_n = sum(r.cond_exp * r.degree for r in bad)
    return ConductorSummary(bad, deg_n, deg_n - 4, tuple(reports))


# -- text format ---------------------------------------------------------------


def format_surface_text(s) -> str:
    return "A=%s;B=%s" % (
        ",".join(str(c) for c in s.a) or "0",
        ",".join(str(c) for c in s.b) or "0",
    )


def parse_surface_text(text: str) -> SurfaceQ:
    """Parse 'A=c0,c1,...;B=c0,c1,...' (ascending integer coefficients)."""
    try:
        a_part, b_part = text.strip().split(";")
        if not a_part.startswith("A=") or not b_part.startswith("B="):
            raise ValueError
        a = [int(c) for c in a_part[2:].split(",")] if a_part[2:] else []
        b = [int(c) for c in b_part[2:].split(",")] if b_part[2:] else []
    except ValueError:
        raise ValueError(f"malformed surface text: {text!r}") from None
    return SurfaceQ(a, b)
