"""Exact arithmetic for integer polynomials (tuples of ints, ascending degree)."""

from __future__ import annotations

__all__ = ["normalize", "degree", "is_zero", "add", "mul", "scale", "eval_at", "reduce_mod"]


def normalize(coeffs) -> tuple[int, ...]:
    c = [int(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def degree(f) -> int:
    return len(f) - 1


def is_zero(f) -> bool:
    return not f


def add(f, g) -> tuple[int, ...]:
    n = max(len(f), len(g))
    out = [0] * n
    for i, c in enumerate(f):
        out[i] += c
    for i, c in enumerate(g):
        out[i] += c
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def mul(f, g) -> tuple[int, ...]:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return tuple(out)


def scale(f, c: int) -> tuple[int, ...]:
    if c == 0:
        return ()
    return tuple(a * c for a in f)


def eval_at(f, x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def reduce_mod(f, ell: int) -> tuple[int, ...]:
    """Coefficientwise reduction into F_l (trailing zeros stripped)."""
    c = [x % ell for x in f]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)
