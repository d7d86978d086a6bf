"""Fusion coefficients: truncated window formula against exact Verlinde.

The window formula is evaluated on folded labels, checking both orbit
representatives of the target; a parity argument (p and q cannot both be
even) shows at most one representative can land, so coefficients stay in
{0, 1}.  The Verlinde side is exact: per triple through cyclotomic division
by the vacuum row, and for whole tables through the division-free sweep

    S_am S_bm = sum_c N_ab^c S_cm S_0m   for every column m,

which is equivalent to the Verlinde formula because the rows of the
normalized S form an orthonormal basis (S symmetric, S^2 = Id).  The sweep
compares integer monomial vectors, so a full table check costs integer
convolutions only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cyclotomic import CycNumber, cyc_conj, cyc_inv
from .models import KacLabel, MinimalModel
from .modular import SMatrixHat, _reduce_is_zero, build_s_hat


class FusionMismatch(AssertionError):
    """Window and Verlinde coefficients disagree at one triple."""

    def __init__(self, model, a, b, c, window: int, verlinde: int):
        self.model = model
        self.triple = (a, b, c)
        self.window = window
        self.verlinde = verlinde
        super().__init__(
            f"{model}: window gives {window} but Verlinde gives {verlinde} "
            f"at {a} x {b} -> {c}"
        )


def _window(x1: int, x2: int, bound: int) -> range:
    lo = abs(x1 - x2) + 1
    hi = min(x1 + x2 - 1, 2 * bound - 1 - x1 - x2)
    return range(lo, hi + 1, 2)


def fusion_coeff(model: MinimalModel, a: KacLabel, b: KacLabel, c: KacLabel) -> int:
    """Window-formula coefficient, 0 or 1; fold-invariant in every label."""
    r1, s1 = model.fold(a)
    r2, s2 = model.fold(b)
    rc, sc = model.fold(c)
    rwin = _window(r1, r2, model.q)
    swin = _window(s1, s2, model.p)
    hits = sum(
        int(r in rwin and s in swin)
        for r, s in ((rc, sc), (model.q - rc, model.p - sc))
    )
    assert hits <= 1, "both orbit representatives landed in the window"
    return hits


def verlinde_coeff(
    model: MinimalModel,
    a: KacLabel,
    b: KacLabel,
    c: KacLabel,
    s: SMatrixHat | None = None,
) -> int:
    """Exact Verlinde coefficient over Q(zeta_2pq); asserted a nonneg integer."""
    if s is None:
        s = build_s_hat(model)
    index = {lab: i for i, lab in enumerate(s.labels)}
    ia, ib, ic = (index[model.fold(lab)] for lab in (a, b, c))
    total = CycNumber.from_rational(s.conductor, 0)
    for m in range(s.dim):
        term = s.entry(ia, m) * s.entry(ib, m) * cyc_conj(s.entry(ic, m))
        total = total + term * cyc_inv(s.entry(0, m))
    total = total * Fraction(8, model.p * model.q)
    assert total.is_rational(), "Verlinde sum did not reduce to a rational"
    value = total.as_rational()
    assert value.denominator == 1 and value >= 0, f"bad Verlinde value {value}"
    return int(value)


@dataclass(frozen=True)
class FusionTable:
    model: MinimalModel
    labels: tuple
    tensor: tuple  # tensor[a][b][c], indexed by the transversal

    @property
    def dim(self) -> int:
        return len(self.labels)

    def coeff(self, a: KacLabel, b: KacLabel, c: KacLabel) -> int:
        index = {lab: i for i, lab in enumerate(self.labels)}
        fold = self.model.fold
        return self.tensor[index[fold(a)]][index[fold(b)]][index[fold(c)]]

    def targets(self, a: KacLabel, b: KacLabel) -> list:
        index = {lab: i for i, lab in enumerate(self.labels)}
        fold = self.model.fold
        row = self.tensor[index[fold(a)]][index[fold(b)]]
        return [self.labels[k] for k in range(self.dim) if row[k]]

    def as_array(self) -> np.ndarray:
        return np.array(self.tensor, dtype=np.int64)

    def nonzero_count(self) -> int:
        return int(self.as_array().sum())

    def to_json(self) -> dict:
        nz = {}
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    if self.tensor[i][j][k]:
                        nz[f"{self.labels[i]}*{self.labels[j]}->{self.labels[k]}"] = (
                            self.tensor[i][j][k]
                        )
        return {
            "p": self.model.p,
            "q": self.model.q,
            "nonzero": len(nz),
            "triples": nz,
        }


def _conv_fold(m1, m2, half: int, sign: int, out: np.ndarray) -> None:
    # accumulate sign * m1 * m2 into out, folding by zeta^half = -1
    for e1, c1 in m1:
        for e2, c2 in m2:
            e = e1 + e2
            cc = sign * c1 * c2
            if e >= half:
                e -= half
                cc = -cc
            out[e] += cc


def fusion_table(model: MinimalModel, s: SMatrixHat | None = None) -> FusionTable:
    """All coefficients by the window formula, certified against Verlinde.

    The certificate checks S_am S_bm = sum_c N_ab^c S_cm S_0m exactly for
    every (a, b, m); a failure is narrowed to a triple and raised as a
    FusionMismatch.
    """
    if s is None:
        s = build_s_hat(model)
    labels = s.labels
    d, half = s.dim, s.half_conductor
    tensor = [
        [
            [fusion_coeff(model, labels[i], labels[j], labels[k]) for k in range(d)]
            for j in range(d)
        ]
        for i in range(d)
    ]

    pairs = [(i, j) for i in range(d) for j in range(i, d)]
    rows = np.zeros((len(pairs) * d, half), dtype=np.int64)
    for row_at, (i, j) in enumerate(pairs):
        targets = [k for k in range(d) if tensor[i][j][k]]
        for m in range(d):
            vec = rows[row_at * d + m]
            _conv_fold(s.monomials[i][m], s.monomials[j][m], half, 1, vec)
            for k in targets:
                _conv_fold(s.monomials[k][m], s.monomials[0][m], half, -1, vec)
    if not _reduce_is_zero(rows, 2 * half):
        for row_at, (i, j) in enumerate(pairs):
            block = rows[row_at * d : (row_at + 1) * d]
            if _reduce_is_zero(block, 2 * half):
                continue
            for k in range(d):
                direct = verlinde_coeff(model, labels[i], labels[j], labels[k], s)
                if direct != tensor[i][j][k]:
                    raise FusionMismatch(
                        model, labels[i], labels[j], labels[k], tensor[i][j][k], direct
                    )
        raise AssertionError("sweep failed but no triple disagrees; S is degenerate")
    return FusionTable(model, tuple(labels), tuple(map(lambda M: tuple(map(tuple, M)), tensor)))


def check_fusion_properties(table: FusionTable) -> dict:
    """Unit, commutativity, associativity, and the multiplicity bound."""
    n = table.as_array()
    d = table.dim
    unit = bool((n[0] == np.eye(d, dtype=np.int64)).all())
    commutative = bool((n == n.transpose(1, 0, 2)).all())
    associative = bool(
        (np.einsum("abe,ecd->abcd", n, n) == np.einsum("bce,aed->abcd", n, n)).all()
    )
    bounded = bool((n <= 1).all() and (n >= 0).all())
    checks = {
        "unit": unit,
        "commutative": commutative,
        "associative": associative,
        "multiplicity_bound": bounded,
    }
    return {
        "model": str(table.model),
        "checks": checks,
        "passed": all(checks.values()),
        "failures": [k for k, v in checks.items() if not v],
    }
