"""Minimal model bookkeeping: weights, folding, transversal order."""

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minmod.models import (
    MinimalModel,
    central_charge,
    conformal_weight,
    coprime_models,
    effective_central_charge,
    fold,
    kac_transversal,
)


def coprime_pairs(max_val=18):
    return st.tuples(
        st.integers(min_value=2, max_value=max_val),
        st.integers(min_value=2, max_value=max_val),
    ).filter(lambda t: t[0] != t[1] and gcd(t[0], t[1]) == 1)


class TestValidation:
    def test_rejects_common_factor(self):
        with pytest.raises(ValueError):
            MinimalModel(4, 2)

    def test_rejects_equal(self):
        with pytest.raises(ValueError):
            MinimalModel(3, 3)

    def test_rejects_too_small(self):
        with pytest.raises(ValueError):
            MinimalModel(1, 5)

    def test_rejects_bad_label(self):
        m = MinimalModel(4, 3)
        with pytest.raises(ValueError):
            m.conformal_weight((3, 1))
        with pytest.raises(ValueError):
            m.conformal_weight((1, 4))
        with pytest.raises(ValueError):
            m.conformal_weight((0, 1))


class TestCentralCharge:
    def test_known_values(self):
        assert central_charge(4, 3) == Fraction(1, 2)
        assert central_charge(5, 2) == Fraction(-22, 5)
        assert central_charge(6, 5) == Fraction(4, 5)
        assert central_charge(5, 4) == Fraction(7, 10)
        assert central_charge(12, 11) == Fraction(21, 22)
        assert central_charge(30, 29) == Fraction(144, 145)

    def test_symmetric_in_p_q(self):
        for p, q in [(4, 3), (5, 2), (12, 11)]:
            assert central_charge(p, q) == central_charge(q, p)


class TestConformalWeight:
    def test_ising_weights(self):
        assert conformal_weight(4, 3, 1, 1) == 0
        assert conformal_weight(4, 3, 1, 2) == Fraction(1, 16)
        assert conformal_weight(4, 3, 1, 3) == Fraction(1, 2)

    def test_lee_yang_weight(self):
        assert conformal_weight(5, 2, 1, 2) == Fraction(-1, 5)

    def test_large_integer_weights(self):
        assert conformal_weight(12, 11, 1, 7) == 8
        assert conformal_weight(30, 59, 1, 11) == 54

    def test_vacuum_weight_zero(self):
        for p, q in [(4, 3), (5, 2), (30, 29), (31, 30)]:
            assert conformal_weight(p, q, 1, 1) == 0


class TestFold:
    def test_orbit_agreement(self):
        # (2,2) and (1,2) of M(4,3) are fold partners
        assert fold(4, 3, 2, 2) == fold(4, 3, 1, 2)

    def test_lee_yang_vacuum_partner(self):
        assert fold(5, 2, 1, 4) == fold(5, 2, 1, 1) == (1, 1)

    def test_idempotent_on_6_5(self):
        m = MinimalModel(6, 5)
        for r in range(1, m.q):
            for s in range(1, m.p):
                assert m.fold(m.fold((r, s))) == m.fold((r, s))

    def test_weight_constant_on_orbit(self):
        m = MinimalModel(8, 5)
        for r in range(1, 5):
            for s in range(1, 8):
                assert m.conformal_weight((r, s)) == m.conformal_weight((m.q - r, m.p - s))


class TestTransversal:
    def test_ising_order(self):
        assert kac_transversal(4, 3) == [(1, 1), (1, 2), (1, 3)]

    def test_lee_yang_vacuum_first(self):
        # vacuum leads even though (1,2) has the smaller weight
        assert kac_transversal(5, 2) == [(1, 1), (1, 2)]

    def test_sizes_on_scan_range(self):
        for p in range(2, 31):
            for q in range(2, 31):
                if p != q and gcd(p, q) == 1:
                    assert len(kac_transversal(p, q)) == (p - 1) * (q - 1) // 2

    def test_weights_injective_on_transversal(self):
        for m in coprime_models(60):
            labels = m.kac_transversal()
            weights = [m.conformal_weight(lab) for lab in labels]
            assert len(set(weights)) == len(weights)

    def test_ascending_after_vacuum(self):
        for m in coprime_models(60):
            weights = [m.conformal_weight(lab) for lab in m.kac_transversal()]
            assert weights[1:] == sorted(weights[1:])


class TestEffectiveCentralCharge:
    def test_known_values(self):
        assert effective_central_charge(5, 2) == Fraction(2, 5)
        assert effective_central_charge(4, 3) == Fraction(1, 2)
        assert effective_central_charge(5, 3) == Fraction(3, 5)

    def test_minimal_weight_5_3(self):
        m = MinimalModel(5, 3)
        assert m.minimal_weight() == Fraction(-1, 20)

    def test_unitary_series_unchanged(self):
        for k in range(3, 10):
            m = MinimalModel(k + 1, k)
            assert m.effective_central_charge() == m.central_charge()

    def test_below_one_for_nonunitary(self):
        for m in coprime_models(60):
            if abs(m.p - m.q) != 1:
                assert m.effective_central_charge() < 1


@settings(max_examples=60, deadline=None)
@given(coprime_pairs(), st.data())
def test_fold_properties(pq, data):
    m = MinimalModel(*pq)
    r = data.draw(st.integers(min_value=1, max_value=m.q - 1))
    s = data.draw(st.integers(min_value=1, max_value=m.p - 1))
    rep = m.fold((r, s))
    assert rep in {(r, s), (m.q - r, m.p - s)}
    assert m.fold(rep) == rep
    assert m.conformal_weight(rep) == m.conformal_weight((r, s))


@settings(max_examples=40, deadline=None)
@given(coprime_pairs())
def test_transversal_covers_orbits(pq):
    m = MinimalModel(*pq)
    trans = m.kac_transversal()
    assert len(set(trans)) == len(trans)
    for r in range(1, m.q):
        for s in range(1, m.p):
            assert m.fold((r, s)) in trans


def test_coprime_models_listing():
    models = coprime_models(12)
    assert MinimalModel(4, 3) in models
    assert MinimalModel(3, 2) in models
    assert all(m.p > m.q for m in models)
    assert all(6 <= m.p * m.q <= 12 for m in models)
