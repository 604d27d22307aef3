"""Sparse integer linear combinations keyed by hashable basis terms.

A combination is a plain ``dict`` mapping a term to a nonzero ``int``.
Functions here never store zero coefficients.
"""

from __future__ import annotations

from typing import Callable, Dict, Hashable, Iterable, Tuple

Comb = Dict[Hashable, int]


def add_into(acc: Comb, term: Hashable, coeff: int) -> None:
    if not coeff:
        return
    v = acc.get(term, 0) + coeff
    if v:
        acc[term] = v
    else:
        del acc[term]


def add_comb(acc: Comb, other: Comb, scale: int = 1) -> None:
    if not scale:
        return
    for t, c in other.items():
        add_into(acc, t, scale * c)


def scale(comb: Comb, k: int) -> Comb:
    if not k:
        return {}
    return {t: k * c for t, c in comb.items()}


def mapped(comb: Comb, fn: Callable[[Hashable], Comb]) -> Comb:
    """Extend ``fn`` (basis term -> combination) linearly to ``comb``."""
    out: Comb = {}
    for t, c in comb.items():
        add_comb(out, fn(t), c)
    return out


def combine(items: Iterable[Tuple[Hashable, int]]) -> Comb:
    out: Comb = {}
    for t, c in items:
        add_into(out, t, c)
    return out


def sub(a: Comb, b: Comb) -> Comb:
    out = dict(a)
    add_comb(out, b, -1)
    return out


def sign(exponent: int) -> int:
    """Return (-1)**exponent."""
    return -1 if exponent & 1 else 1


def koszul(a: int, b: int) -> int:
    """Koszul sign for moving a degree-``a`` object past a degree-``b`` one."""
    return -1 if (a & 1) and (b & 1) else 1
