"""Virasoro minimal models M(p, q) and their Kac labels.

Conventions fixed here and relied on everywhere else:

  * p, q are coprime, both >= 2, p != q.
  * A Kac label is a pair (r, s) with 1 <= r <= q - 1 and 1 <= s <= p - 1.
  * (r, s) and (q - r, p - s) name the same irreducible; fold() picks the
    lexicographically smaller member as the canonical representative.
  * kac_transversal() lists one representative per irreducible, sorted by
    ascending conformal weight with (r, s) lexicographic tiebreak, so the
    vacuum (1, 1) comes first.

All weights are exact Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

KacLabel = tuple[int, int]


@dataclass(frozen=True)
class MinimalModel:
    """The minimal model M(p, q); field count is (p-1)(q-1)/2."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 2 or self.q < 2:
            raise ValueError("p and q must both be at least 2")
        if self.p == self.q:
            raise ValueError("p and q must differ")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"p={self.p} and q={self.q} must be coprime")

    def central_charge(self) -> Fraction:
        p, q = self.p, self.q
        return 1 - Fraction(6 * (p - q) ** 2, p * q)

    def is_valid_label(self, label: KacLabel) -> bool:
        r, s = label
        return 1 <= r <= self.q - 1 and 1 <= s <= self.p - 1

    def _require_label(self, label: KacLabel) -> None:
        if not self.is_valid_label(label):
            raise ValueError(f"label {label} outside Kac table of M({self.p},{self.q})")

    def conformal_weight(self, label: KacLabel) -> Fraction:
        self._require_label(label)
        r, s = label
        p, q = self.p, self.q
        return Fraction((r * p - s * q) ** 2 - (p - q) ** 2, 4 * p * q)

    def fold(self, label: KacLabel) -> KacLabel:
        """Canonical representative of {(r, s), (q - r, p - s)}: the lex-min."""
        self._require_label(label)
        r, s = label
        return min(label, (self.q - r, self.p - s))

    def kac_transversal(self) -> list[KacLabel]:
        """One label per irreducible: vacuum first, then ascending conformal
        weight (weights are distinct across orbits, so no further tiebreak is
        ever exercised; (r, s) is kept in the key defensively)."""
        reps = {self.fold((r, s)) for r in range(1, self.q) for s in range(1, self.p)}
        ordered = sorted(reps, key=lambda lab: (lab != (1, 1), self.conformal_weight(lab), lab))
        assert len(ordered) == (self.p - 1) * (self.q - 1) // 2
        assert ordered[0] == (1, 1)
        return ordered

    def minimal_weight(self) -> Fraction:
        return min(self.conformal_weight(lab) for lab in self.kac_transversal())

    def effective_central_charge(self) -> Fraction:
        return self.central_charge() - 24 * self.minimal_weight()

    def __str__(self) -> str:
        return f"M({self.p},{self.q})"


def central_charge(p: int, q: int) -> Fraction:
    return MinimalModel(p, q).central_charge()


def conformal_weight(p: int, q: int, r: int, s: int) -> Fraction:
    return MinimalModel(p, q).conformal_weight((r, s))


def fold(p: int, q: int, r: int, s: int) -> KacLabel:
    return MinimalModel(p, q).fold((r, s))


def kac_transversal(p: int, q: int) -> list[KacLabel]:
    return MinimalModel(p, q).kac_transversal()


def effective_central_charge(p: int, q: int) -> Fraction:
    return MinimalModel(p, q).effective_central_charge()


def coprime_models(bound: int, min_pq: int = 6) -> list[MinimalModel]:
    """All M(p, q) with p > q and min_pq <= p*q <= bound, sorted by (p*q, p)."""
    out = [
        MinimalModel(p, q)
        for p in range(2, bound + 1)
        for q in range(2, p)
        if gcd(p, q) == 1 and min_pq <= p * q <= bound
    ]
    out.sort(key=lambda m: (m.p * m.q, m.p))
    return out
