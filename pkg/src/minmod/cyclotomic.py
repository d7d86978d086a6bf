"""Exact arithmetic in cyclotomic fields Q(zeta_n).

A CycNumber is a polynomial in zeta_n reduced mod the n-th cyclotomic
polynomial Phi_n, stored as a dense coefficient tuple of Fractions of
length deg Phi_n = phi(n).  The representation is canonical: equality,
zero tests and rationality tests are coefficient comparisons.

Rational numbers are fractions.Fraction throughout (always reduced,
positive denominator), re-exported here as Rational.

Mixed conductors are a caller error for the ring operations; embed(a, m)
moves a value into the larger field Q(zeta_m) explicitly (n must divide m).

The module also exposes the integer reduction table used by the bulk
verification paths elsewhere in the package: reduction_table(n) holds
x^j mod Phi_n for 0 <= j < n as an integer matrix, so batched "reduce and
test zero" work becomes an integer matrix product.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

import mpmath as mp
import numpy as np

Rational = Fraction

# int64 headroom guard for numpy reduction-table products; table heights for
# the conductors in scope stay far below this (asserted, with exact fallback).
_TABLE_HEIGHT_BOUND = 1 << 40


def _divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def euler_phi(n: int) -> int:
    """Euler's totient."""
    assert n >= 1
    result = n
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_divmod_exact(num: list[int], den: list[int]) -> list[int]:
    # exact division of integer polynomials, remainder asserted zero
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c == 0:
            continue
        assert c % den[dd] == 0
        f = c // den[dd]
        out[i - dd] = f
        for j, dcoef in enumerate(den):
            num[i - dd + j] -= f * dcoef
    assert all(c == 0 for c in num)
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, ascending, computed by dividing x^n - 1 by all
    proper-divisor cyclotomic polynomials."""
    assert n >= 1
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n):
        if d != n:
            poly = _poly_divmod_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def reduction_table(n: int) -> np.ndarray:
    """Integer matrix with row j = coefficients of x^j mod Phi_n, 0 <= j < n."""
    phi_coeffs = cyclotomic_polynomial(n)
    deg = len(phi_coeffs) - 1
    table = np.zeros((n, deg), dtype=np.int64)
    row = np.zeros(deg + 1, dtype=object)  # exact ints; degree-deg scratch slot
    row[0] = 1
    for j in range(n):
        table[j] = row[:deg]
        assert int(np.abs(table[j]).max(initial=0)) < _TABLE_HEIGHT_BOUND
        row[1:] = row[:-1]
        row[0] = 0
        # subtract lead * (x^deg mod Phi_n); Phi_n is monic
        if row[deg] != 0:
            lead = row[deg]
            row[deg] = 0
            for k in range(deg):
                row[k] -= lead * phi_coeffs[k]
    return table


def _reduce_fraction_poly(coeffs: list[Fraction], n: int) -> tuple[Fraction, ...]:
    deg = len(cyclotomic_polynomial(n)) - 1
    table = reduction_table(n)
    out = [Fraction(0)] * deg
    for j, c in enumerate(coeffs):
        if c:
            row = table[j % n]
            for k in range(deg):
                if row[k]:
                    out[k] += c * int(row[k])
    return tuple(out)


class CycNumber:
    """Element of Q(zeta_n) in the power basis mod Phi_n.

    Immutable; arithmetic via operators or the cyc_* module functions.
    Operands must share the conductor (use embed() to move between fields).
    """

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs) -> None:
        assert n >= 1
        deg = euler_phi(n)
        coeffs = tuple(Fraction(c) for c in coeffs)
        assert len(coeffs) == deg
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):  # immutable
        raise AttributeError("CycNumber is immutable")

    # -- construction helpers -------------------------------------------------

    @staticmethod
    def from_rational(n: int, value) -> "CycNumber":
        coeffs = [Fraction(0)] * euler_phi(n)
        coeffs[0] = Fraction(value)
        return CycNumber(n, coeffs)

    # -- predicates ------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("value is not rational")
        return self.coeffs[0]

    # -- ring structure ---------------------------------------------------------

    def _check(self, other: "CycNumber") -> "CycNumber":
        if isinstance(other, (int, Fraction)):
            return CycNumber.from_rational(self.n, other)
        if not isinstance(other, CycNumber):
            raise TypeError(f"cannot combine CycNumber with {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"conductor mismatch: {self.n} vs {other.n}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return CycNumber(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.n, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._check(other)
        return CycNumber(self.n, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        a, b = self.coeffs, other.coeffs
        conv = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        return CycNumber(self.n, _reduce_fraction_poly(conv, self.n))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._check(other)
        return self * cyc_inv(other)

    def __rtruediv__(self, other):
        return cyc_inv(self) * other

    def __pow__(self, k: int):
        if k < 0:
            return cyc_inv(self) ** (-k)
        result = CycNumber.from_rational(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return isinstance(other, CycNumber) and self.n == other.n and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.n, self.coeffs))

    def __repr__(self):
        terms = [f"{c}*z{self.n}^{j}" for j, c in enumerate(self.coeffs) if c]
        return "CycNumber(" + (" + ".join(terms) or "0") + ")"

    def to_json(self) -> dict:
        """Serialization used by reports: conductor plus "a/b" coefficients."""
        return {"n": self.n, "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}


# -- named operations ---------------------------------------------------------


def cyc_root_power(n: int, k: int) -> CycNumber:
    """zeta_n^k reduced mod Phi_n; k is taken mod n."""
    assert n >= 1
    k %= n
    deg = euler_phi(n)
    if k < deg:
        coeffs = [Fraction(0)] * deg
        coeffs[k] = Fraction(1)
        return CycNumber(n, coeffs)
    row = reduction_table(n)[k]
    return CycNumber(n, tuple(Fraction(int(c)) for c in row))


def cyc_add(a: CycNumber, b: CycNumber) -> CycNumber:
    return a + b


def cyc_mul(a: CycNumber, b: CycNumber) -> CycNumber:
    return a * b


def cyc_neg(a: CycNumber) -> CycNumber:
    return -a


def cyc_sub(a: CycNumber, b: CycNumber) -> CycNumber:
    return a - b


def cyc_is_zero(a: CycNumber) -> bool:
    return a.is_zero()


def cyc_inv(a: CycNumber) -> CycNumber:
    """Inverse via extended Euclid against Phi_n over the rationals."""
    if a.is_zero():
        raise ZeroDivisionError("inverse of zero cyclotomic number")
    n = a.n
    if a.is_rational():
        return CycNumber.from_rational(n, Fraction(1) / a.coeffs[0])
    phi = [Fraction(c) for c in cyclotomic_polynomial(n)]

    def degree(p):
        for i in range(len(p) - 1, -1, -1):
            if p[i]:
                return i
        return -1

    def polymod(num, den):
        num = list(num)
        dd = degree(den)
        lead = den[dd]
        for i in range(len(num) - 1, dd - 1, -1):
            if num[i]:
                f = num[i] / lead
                for j in range(dd + 1):
                    num[i - dd + j] -= f * den[j]
        return num[:dd] if dd > 0 else []

    # extended Euclid: r0 = Phi_n, r1 = a; track only the a-cofactor
    r0, r1 = phi, list(a.coeffs)
    t0, t1 = [Fraction(0)], [Fraction(1)]
    while degree(r1) > 0:
        d0, d1 = degree(r0), degree(r1)
        quo = [Fraction(0)] * (d0 - d1 + 1)
        rem = list(r0)
        for i in range(d0, d1 - 1, -1):
            if rem[i]:
                f = rem[i] / r1[d1]
                quo[i - d1] = f
                for j in range(d1 + 1):
                    rem[i - d1 + j] -= f * r1[j]
        rem = rem[:d1] if d1 > 0 else []
        # t_next = t0 - quo * t1
        prod = [Fraction(0)] * (len(quo) + len(t1) - 1)
        for i, qi in enumerate(quo):
            if qi:
                for j, tj in enumerate(t1):
                    if tj:
                        prod[i + j] += qi * tj
        tnext = [Fraction(0)] * max(len(t0), len(prod))
        for i, c in enumerate(t0):
            tnext[i] += c
        for i, c in enumerate(prod):
            tnext[i] -= c
        r0, r1 = r1, rem
        t0, t1 = t1, polymod(tnext, phi)
    d = degree(r1)
    if d < 0:
        raise ZeroDivisionError("inverse of zero cyclotomic number")
    scale = Fraction(1) / r1[0]
    inv_coeffs = [(c * scale) for c in t1]
    result = CycNumber(n, _reduce_fraction_poly(inv_coeffs, n))
    assert (result * a).is_rational() and (result * a).coeffs[0] == 1
    return result


def cyc_conj(a: CycNumber) -> CycNumber:
    """Complex conjugation zeta -> zeta^-1 (a field automorphism)."""
    n = a.n
    conv = [Fraction(0)] * n
    for j, c in enumerate(a.coeffs):
        conv[(n - j) % n] += c
    return CycNumber(n, _reduce_fraction_poly(conv, n))


def cyc_cos(k: int, N: int) -> CycNumber:
    """cos(pi*k/N) as (zeta_{2N}^k + zeta_{2N}^-k) / 2 in Q(zeta_{2N})."""
    assert N >= 1
    half = Fraction(1, 2)
    return (cyc_root_power(2 * N, k) + cyc_root_power(2 * N, -k)) * half


def embed(a: CycNumber, m: int) -> CycNumber:
    """Embed Q(zeta_n) into Q(zeta_m) via zeta_n = zeta_m^(m/n); n must divide m."""
    if m % a.n != 0:
        raise ValueError(f"conductor {a.n} does not divide {m}")
    step = m // a.n
    conv = [Fraction(0)] * m
    for j, c in enumerate(a.coeffs):
        conv[(j * step) % m] += c
    return CycNumber(m, _reduce_fraction_poly(conv, m))


def common_conductor(n1: int, n2: int) -> int:
    return n1 * n2 // gcd(n1, n2)


def float_approx(a: CycNumber, precision: int = 128):
    """High-precision complex enclosure of a at the principal embedding.

    Returns (value, radius): an mpmath mpc and an mpf with
    |true value - value| <= radius.  Evaluation uses mpmath (elementary
    operations correct to within ~1 ulp); the radius charges 8 ulps per term
    at working precision, a deliberately loose bound.
    """
    assert precision >= 53
    n = a.n
    wp = precision + 16
    with mp.workprec(wp):
        two_pi_over_n = 2 * mp.pi / n
        value = mp.mpc(0)
        max_abs_term = mp.mpf(0)
        terms = 0
        for j, c in enumerate(a.coeffs):
            if c:
                angle = two_pi_over_n * j
                term = mp.mpc(mp.cos(angle), mp.sin(angle)) * mp.mpf(c.numerator) / mp.mpf(c.denominator)
                value += term
                max_abs_term = max(max_abs_term, abs(term))
                terms += 1
        radius = (terms + 1) * 8 * max(max_abs_term, abs(value), mp.mpf(1)) * mp.mpf(2) ** (-wp)
        return value, radius


def float_real(a: CycNumber, precision: int = 128):
    """As float_approx, for values known real (conj-invariant); returns (mpf, radius)."""
    value, radius = float_approx(a, precision)
    assert abs(value.imag) <= radius
    return value.real, radius
