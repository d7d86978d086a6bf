"""Window fusion rules against the exact Verlinde formula."""

import pytest

import minmod.fusion as fusion
from minmod.fusion import (
    FusionMismatch,
    check_fusion_properties,
    fusion_coeff,
    fusion_table,
    verlinde_coeff,
)
from minmod.models import MinimalModel, coprime_models


class TestWindowFormula:
    def test_ising_sigma_squared(self):
        m = MinimalModel(4, 3)
        targets = [c for c in m.kac_transversal() if fusion_coeff(m, (2, 2), (2, 2), c)]
        assert targets == [(1, 1), (1, 3)]

    def test_vacuum_is_the_unit(self):
        m = MinimalModel(5, 4)
        labels = m.kac_transversal()
        for a in labels:
            for c in labels:
                assert fusion_coeff(m, (1, 1), a, c) == int(a == c)

    def test_lee_yang_phi_squared(self):
        m = MinimalModel(5, 2)
        assert fusion_coeff(m, (1, 3), (1, 3), (1, 1)) == 1
        assert fusion_coeff(m, (1, 3), (1, 3), (1, 3)) == 1

    def test_symmetric_in_first_two_arguments(self):
        m = MinimalModel(7, 4)
        labels = m.kac_transversal()
        for a in labels:
            for b in labels:
                for c in labels:
                    assert fusion_coeff(m, a, b, c) == fusion_coeff(m, b, a, c)

    def test_fold_invariant_in_every_argument(self):
        m = MinimalModel(6, 5)
        a, b, c = (1, 2), (2, 3), (3, 4)
        flip = lambda lab: (m.q - lab[0], m.p - lab[1])
        base = fusion_coeff(m, a, b, c)
        assert fusion_coeff(m, flip(a), b, c) == base
        assert fusion_coeff(m, a, flip(b), c) == base
        assert fusion_coeff(m, a, b, flip(c)) == base


class TestVerlinde:
    def test_ising_sigma_sigma_epsilon(self):
        assert verlinde_coeff(MinimalModel(4, 3), (2, 2), (2, 2), (1, 3)) == 1

    def test_vacuum_row_is_kronecker(self):
        m = MinimalModel(5, 3)
        labels = m.kac_transversal()
        for a in labels:
            for b in labels:
                assert verlinde_coeff(m, (1, 1), a, b) == int(a == b)

    def test_lee_yang(self):
        assert verlinde_coeff(MinimalModel(5, 2), (1, 2), (1, 2), (1, 2)) == 1

    @pytest.mark.parametrize("p,q", [(3, 2), (4, 3), (5, 2), (5, 3), (5, 4), (7, 2)])
    def test_direct_agreement_small_models(self, p, q):
        m = MinimalModel(p, q)
        labels = m.kac_transversal()
        from minmod.modular import build_s_hat

        s = build_s_hat(m)
        for a in labels:
            for b in labels:
                for c in labels:
                    assert verlinde_coeff(m, a, b, c, s) == fusion_coeff(m, a, b, c)


class TestFusionTable:
    def test_ising_has_ten_nonzero_entries(self):
        assert fusion_table(MinimalModel(4, 3)).nonzero_count() == 10

    def test_targets_listing(self):
        t = fusion_table(MinimalModel(4, 3))
        assert t.targets((2, 2), (2, 2)) == [(1, 1), (1, 3)]

    def test_properties_up_to_40(self):
        for m in coprime_models(40):
            table = fusion_table(m)
            report = check_fusion_properties(table)
            assert report["passed"], (m, report["failures"])

    def test_certificate_names_a_corrupted_triple(self, monkeypatch):
        real = fusion.fusion_coeff

        def corrupted(model, a, b, c):
            if (a, b, c) == ((1, 2), (1, 2), (1, 1)):
                return 0
            return real(model, a, b, c)

        monkeypatch.setattr(fusion, "fusion_coeff", corrupted)
        with pytest.raises(FusionMismatch) as err:
            fusion_table(MinimalModel(4, 3))
        assert err.value.triple == ((1, 2), (1, 2), (1, 1))
        assert err.value.verlinde == 1 and err.value.window == 0

    def test_json_shape(self):
        data = fusion_table(MinimalModel(4, 3)).to_json()
        assert data["nonzero"] == 10
        assert all(v == 1 for v in data["triples"].values())
