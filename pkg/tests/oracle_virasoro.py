"""Independent graded-dimension oracle for irreducible Virasoro modules.

Works straight from the commutation relations: build the level-n Verma basis
of L-monomials, evaluate the Shapovalov form exactly over Q, and take the
Gram rank.  No character formula, no q-series; this is the cross-check the
character tests compare against.

States are normal-ordered combinations {partition tuple: Fraction} standing
for sum of coeff * L_{-mu_1} ... L_{-mu_k} |h>, mu descending.
"""

from fractions import Fraction
from functools import lru_cache


def partitions(n: int, cap: int | None = None) -> list[tuple[int, ...]]:
    if n == 0:
        return [()]
    cap = n if cap is None else min(cap, n)
    out = []
    for first in range(cap, 0, -1):
        out.extend((first,) + rest for rest in partitions(n - first, first))
    return out


def _add(state: dict, mono: tuple, coeff: Fraction) -> None:
    if coeff:
        state[mono] = state.get(mono, Fraction(0)) + coeff
        if not state[mono]:
            del state[mono]


def lower(mono: tuple, k: int) -> dict:
    """Normal ordering of L_{-k} applied to a monomial, k >= 1."""
    assert k >= 1
    if not mono or k >= mono[0]:
        return {(k,) + mono: Fraction(1)}
    head, rest = mono[0], mono[1:]
    out: dict = {}
    for nu, cf in lower(rest, k).items():
        for nu2, cf2 in lower(nu, head).items():
            _add(out, nu2, cf * cf2)
    # [L_{-k}, L_{-head}] = (head - k) L_{-(k+head)}
    for nu, cf in lower(rest, k + head).items():
        _add(out, nu, (head - k) * cf)
    return out


def raise_op(mono: tuple, m: int, c: Fraction, h: Fraction) -> dict:
    """Normal ordering of L_m applied to a monomial, m >= 1."""
    assert m >= 1
    if not mono:
        return {}
    head, rest = mono[0], mono[1:]
    out: dict = {}
    # L_m L_{-head} = L_{-head} L_m + (m+head) L_{m-head} + delta c (m^3-m)/12
    for nu, cf in raise_op(rest, m, c, h).items():
        for nu2, cf2 in lower(nu, head).items():
            _add(out, nu2, cf * cf2)
    d = m - head
    if d > 0:
        for nu, cf in raise_op(rest, d, c, h).items():
            _add(out, nu, (m + head) * cf)
    elif d == 0:
        weight = h + sum(rest)  # L_0 eigenvalue on rest|h>
        _add(out, rest, (m + head) * weight)
        _add(out, rest, c * Fraction(m**3 - m, 12))
    else:
        for nu, cf in lower(rest, -d).items():
            _add(out, nu, (m + head) * cf)
    return out


def shapovalov_entry(lam: tuple, mu: tuple, c: Fraction, h: Fraction) -> Fraction:
    """<L_{-lam} h, L_{-mu} h> via successive raising operators."""
    state = {mu: Fraction(1)}
    for m in lam:
        new: dict = {}
        for mono, cf in state.items():
            for nu, cf2 in raise_op(mono, m, c, h).items():
                _add(new, nu, cf * cf2)
        state = new
    return state.get((), Fraction(0))


def _rank(rows: list[list[Fraction]]) -> int:
    rows = [row[:] for row in rows]
    rank, col, ncols = 0, 0, len(rows[0]) if rows else 0
    while rank < len(rows) and col < ncols:
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
    """dim of the level-n graded piece of the irreducible L(c, h)."""
    if level == 0:
        return 1
    basis = partitions(level)
    gram = [[shapovalov_entry(lam, mu, c, h) for mu in basis] for lam in basis]
    return _rank(gram)
