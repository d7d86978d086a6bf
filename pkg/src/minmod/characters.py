"""Truncated q-series characters of minimal-model modules.

A PuiseuxSeries holds coefficients of q^(offset + n) for n = 0..order, with
offset a rational; every series in scope has exponent support inside a
single coset offset + Z>=0.  The order field is the largest n whose
coefficient is trusted; arithmetic propagates the weakest trusted order of
its inputs rather than pretending to more.

character() expands

    chi_{r,s} = eta-inverse-like prefactor * sum over k of
                q^((2pqk + rp - sq)^2 / 4pq) - q^((2pqk + rp + sq)^2 / 4pq)

relative to the leading exponent h - c/24: the k-term exponents become the
integers pq k^2 + k(rp - sq) and pq k^2 + k(rp + sq) + rs, and the prefactor
is the partition generating function.  The k-window is chosen by exact
exponent comparison, so truncated coefficients are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .models import KacLabel, MinimalModel


@dataclass(frozen=True)
class PuiseuxSeries:
    """Coefficients of q^(offset+n); trusted for n <= order = len(coeffs)-1."""

    offset: Fraction
    coeffs: tuple
    order: int

    def __post_init__(self) -> None:
        assert self.order >= 0 and len(self.coeffs) == self.order + 1

    @staticmethod
    def make(offset, coeffs) -> "PuiseuxSeries":
        coeffs = tuple(c if isinstance(c, int) else Fraction(c) for c in coeffs)
        return PuiseuxSeries(Fraction(offset), coeffs, len(coeffs) - 1)

    @staticmethod
    def one(order: int) -> "PuiseuxSeries":
        return PuiseuxSeries(Fraction(0), (1,) + (0,) * order, order)

    def coefficient(self, exponent) -> Fraction:
        """Coefficient of q^exponent; raises on exponents beyond the order."""
        n = Fraction(exponent) - self.offset
        if n.denominator != 1:
            return Fraction(0)
        n = int(n)
        if n < 0:
            return Fraction(0)
        if n > self.order:
            raise ValueError(f"coefficient q^{exponent} beyond trusted order")
        return Fraction(self.coeffs[n])

    def leading(self) -> tuple[Fraction, Fraction]:
        """(exponent, coefficient) of the first nonzero term."""
        for n, c in enumerate(self.coeffs):
            if c:
                return self.offset + n, Fraction(c)
        raise ValueError("series is zero to its trusted order")

    def truncate(self, order: int) -> "PuiseuxSeries":
        assert 0 <= order <= self.order
        return PuiseuxSeries(self.offset, self.coeffs[: order + 1], order)

    def agrees_with(self, other: "PuiseuxSeries", upto: int | None = None) -> bool:
        """Equality of all coefficients trusted by both (or the first upto+1)."""
        n = min(self.order, other.order) if upto is None else upto
        d = self.offset - other.offset
        if d.denominator != 1:
            return False
        d = int(d)  # self.offset = other.offset + d
        for i in range(n + 1):
            a = self.coeffs[i] if 0 <= i <= self.order else 0
            b = other.coeffs[i + d] if 0 <= i + d <= other.order else 0
            if a != b:
                return False
        # terms of other below self's offset must vanish too
        return all(other.coeffs[j] == 0 for j in range(min(d, other.order + 1)))

    def to_json(self) -> dict:
        return {
            "offset": f"{self.offset.numerator}/{self.offset.denominator}",
            "coefficients": [str(c) for c in self.coeffs],
            "order": self.order,
        }


def series_add(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    d = b.offset - a.offset
    if d.denominator != 1:
        raise ValueError(f"offsets {a.offset} and {b.offset} differ by a non-integer")
    if d < 0:
        return series_add(b, a)
    d = int(d)
    order = min(a.order, b.order + d)
    coeffs = []
    for n in range(order + 1):
        c = a.coeffs[n] if n <= a.order else 0
        if n >= d:
            c = c + b.coeffs[n - d]
        coeffs.append(c)
    return PuiseuxSeries(a.offset, tuple(coeffs), order)


def series_neg(a: PuiseuxSeries) -> PuiseuxSeries:
    return PuiseuxSeries(a.offset, tuple(-c for c in a.coeffs), a.order)


def series_sub(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    return series_add(a, series_neg(b))


def series_mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    order = min(a.order, b.order)
    coeffs = [0] * (order + 1)
    for i in range(min(a.order, order) + 1):
        ai = a.coeffs[i]
        if ai:
            for j in range(min(b.order, order - i) + 1):
                if b.coeffs[j]:
                    coeffs[i + j] += ai * b.coeffs[j]
    return PuiseuxSeries(a.offset + b.offset, tuple(coeffs), order)


def series_div(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    if b.coeffs[0] == 0:
        raise ZeroDivisionError("divisor has zero leading coefficient")
    order = min(a.order, b.order)
    lead = Fraction(b.coeffs[0])
    coeffs: list[Fraction] = []
    for n in range(order + 1):
        acc = Fraction(a.coeffs[n])
        for i in range(n):
            if coeffs[i] and b.coeffs[n - i]:
                acc -= coeffs[i] * b.coeffs[n - i]
        coeffs.append(acc / lead)
    out = tuple(int(c) if c.denominator == 1 else c for c in coeffs)
    return PuiseuxSeries(a.offset - b.offset, out, order)


def partition_counts(n: int) -> list[int]:
    """Partition numbers p(0..n) by the Euler-product DP."""
    counts = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            counts[total] += counts[total - part]
    return counts


def character(model: MinimalModel, label: KacLabel, order: int) -> PuiseuxSeries:
    """Exact character of the irreducible with the given label, to q^(h-c/24+order)."""
    assert order >= 0
    r, s = model.fold(label)  # validates the label
    p, q = model.p, model.q
    a, b = r * p - s * q, r * p + s * q
    offset = model.conformal_weight((r, s)) - model.central_charge() / 24
    assert offset == Fraction(a * a, 4 * p * q) - Fraction(1, 24)

    # k-window: include every k with pq k^2 + k a <= order or
    # pq k^2 + k b + rs <= order; |k| <= (b + sqrt(b^2 + 4 pq order)) / 2pq
    # bounds both branches since b >= |a| and rs > 0
    kmax = (b + isqrt(b * b + 4 * p * q * order)) // (2 * p * q) + 1
    numerator = [0] * (order + 1)
    for k in range(-kmax, kmax + 1):
        e_plus = p * q * k * k + k * a
        e_minus = p * q * k * k + k * b + r * s
        assert e_minus > 0, "subtracted branch never reaches the leading term"
        if 0 <= e_plus <= order:
            numerator[e_plus] += 1
        if e_minus <= order:
            numerator[e_minus] -= 1
    assert numerator[0] == 1

    parts = partition_counts(order)
    coeffs = [0] * (order + 1)
    for m, cm in enumerate(numerator):
        if cm:
            for n in range(m, order + 1):
                coeffs[n] += cm * parts[n - m]
    assert all(c >= 0 for c in coeffs)
    return PuiseuxSeries(offset, tuple(coeffs), order)
