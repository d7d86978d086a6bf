"""Graded dimensions of irreducible modules from the algebra relations alone.

No character formula enters: the level-n basis of the Verma module is the
set of descending L-monomials indexed by partitions, the contravariant form
is evaluated exactly over Q by normal ordering, and the dimension of the
irreducible quotient's level-n piece is the Gram rank.  This is the
quadratic-cost cross-check the q-series characters are measured against.

States are dicts {partition tuple: Fraction} standing for sums of
coeff * L_{-mu_1} ... L_{-mu_k} |h> with mu descending.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .models import KacLabel, MinimalModel


def level_partitions(n: int, cap: int | None = None) -> list[tuple[int, ...]]:
    if n == 0:
        return [()]
    cap = n if cap is None else min(cap, n)
    out = []
    for first in range(cap, 0, -1):
        out.extend((first,) + rest for rest in level_partitions(n - first, first))
    return out


def _add(state: dict, mono: tuple, coeff: Fraction) -> None:
    if coeff:
        state[mono] = state.get(mono, Fraction(0)) + coeff
        if not state[mono]:
            del state[mono]


def _lower(mono: tuple, k: int) -> dict:
    """Normal ordering of L_{-k} applied to a monomial, k >= 1."""
    assert k >= 1
    if not mono or k >= mono[0]:
        return {(k,) + mono: Fraction(1)}
    head, rest = mono[0], mono[1:]
    out: dict = {}
    for nu, cf in _lower(rest, k).items():
        for nu2, cf2 in _lower(nu, head).items():
            _add(out, nu2, cf * cf2)
    # [L_{-k}, L_{-head}] = (head - k) L_{-(k+head)}
    for nu, cf in _lower(rest, k + head).items():
        _add(out, nu, (head - k) * cf)
    return out


def _raise(mono: tuple, m: int, c: Fraction, h: Fraction) -> dict:
    """Normal ordering of L_m applied to a monomial, m >= 1."""
    assert m >= 1
    if not mono:
        return {}
    head, rest = mono[0], mono[1:]
    out: dict = {}
    # L_m L_{-head} = L_{-head} L_m + (m+head) L_{m-head} + delta c (m^3-m)/12
    for nu, cf in _raise(rest, m, c, h).items():
        for nu2, cf2 in _lower(nu, head).items():
            _add(out, nu2, cf * cf2)
    d = m - head
    if d > 0:
        for nu, cf in _raise(rest, d, c, h).items():
            _add(out, nu, (m + head) * cf)
    elif d == 0:
        _add(out, rest, (m + head) * (h + sum(rest)) + c * Fraction(m**3 - m, 12))
    else:
        for nu, cf in _lower(rest, -d).items():
            _add(out, nu, (m + head) * cf)
    return out


def contravariant_entry(lam: tuple, mu: tuple, c: Fraction, h: Fraction) -> Fraction:
    """<L_{-lam} h, L_{-mu} h> by applying the reversed raising word."""
    state = {mu: Fraction(1)}
    for m in lam:
        new: dict = {}
        for mono, cf in state.items():
            for nu, cf2 in _raise(mono, m, c, h).items():
                _add(new, nu, cf * cf2)
        state = new
    return state.get((), Fraction(0))


def _gram_rank(basis: list[tuple], c: Fraction, h: Fraction) -> int:
    rows = [[contravariant_entry(lam, mu, c, h) for mu in basis] for lam in basis]
    rank, col = 0, 0
    while rank < len(rows) and col < len(rows):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        col += 1
    return rank


@lru_cache(maxsize=None)
def graded_dimension(c: Fraction, h: Fraction, level: int) -> int:
    """dim of the level-n piece of the irreducible quotient of M(c, h)."""
    assert level >= 0
    if level == 0:
        return 1
    return _gram_rank(level_partitions(level), c, h)


def graded_dimensions(model: MinimalModel, label: KacLabel, depth: int) -> tuple[int, ...]:
    """Levels 0..depth of the irreducible module with the given label."""
    c = model.central_charge()
    h = model.conformal_weight(model.fold(label))
    return tuple(graded_dimension(c, h, n) for n in range(depth + 1))
