"""Catalog rows, the (M1)-(M3) verifier, commutant, and classify."""

import pytest

from minmod.invariants import (
    CATALOG_TAGS,
    InvariantMatrix,
    applicable_rows,
    build_all_catalog,
    build_catalog,
    classify,
    commutant_basis,
    integer_kernel,
    match_catalog_row,
    verify_invariant,
)
from minmod.models import MinimalModel

from oracle_invariants import brute_force_invariants


class TestApplicability:
    def test_any_model_has_a_row(self):
        assert applicable_rows(MinimalModel(5, 2)) == ["A"]

    def test_d_rows_key_on_the_named_variable(self):
        assert "D_q_odd" in applicable_rows(MinimalModel(5, 6))
        assert "D_q_even" in applicable_rows(MinimalModel(5, 8))
        assert "D_p_odd" in applicable_rows(MinimalModel(6, 5))
        assert "D_p_even" in applicable_rows(MinimalModel(8, 5))

    def test_exceptional_rows(self):
        assert applicable_rows(MinimalModel(12, 11)) == ["A", "D_p_even", "E6_q12"]
        assert "E6_p12" in applicable_rows(MinimalModel(13, 12))
        assert "E7_q18" in applicable_rows(MinimalModel(18, 5))
        assert "E7_p18" in applicable_rows(MinimalModel(5, 18))
        assert "E8_q30" in applicable_rows(MinimalModel(30, 29))
        assert "E8_p30" in applicable_rows(MinimalModel(31, 30))

    def test_d_series_needs_at_least_six(self):
        # p = 2 is 2(2m+1) only for m = 0, which the table excludes
        assert "D_p_odd" not in applicable_rows(MinimalModel(2, 5))

    def test_inapplicable_row_rejected(self):
        with pytest.raises(ValueError):
            build_catalog(MinimalModel(4, 3), "E6_q12")
        with pytest.raises(ValueError):
            build_catalog(MinimalModel(4, 3), "no_such_row")


class TestBuildCatalog:
    def test_a_row_is_the_identity(self):
        inv = build_catalog(MinimalModel(4, 3), "A")
        assert inv.X == ((1, 0, 0), (0, 1, 0), (0, 0, 1))

    def test_d_p_even_at_4_3_equals_a(self):
        m = MinimalModel(4, 3)
        assert build_catalog(m, "D_p_even").X == build_catalog(m, "A").X

    def test_d_p_odd_at_6_5_has_doubled_middle_column_diagonal(self):
        m = MinimalModel(6, 5)
        inv = build_catalog(m, "D_p_odd")
        labels = m.kac_transversal()
        for i, (r, s) in enumerate(labels):
            expected = 2 if s == 3 else None  # s = p/2 labels self-pair
            if expected:
                assert inv.X[i][i] == expected

    def test_e6_vacuum_row_at_12_11(self):
        m = MinimalModel(12, 11)
        inv = build_catalog(m, "E6_q12")
        labels = m.kac_transversal()
        cells = {labels[j]: inv.X[0][j] for j in range(inv.dim) if inv.X[0][j]}
        assert cells == {(1, 1): 1, (1, 7): 1}

    def test_rows_at_12_11_pairwise_distinct(self):
        rows = build_all_catalog(MinimalModel(12, 11))
        assert len({inv.X for inv in rows}) == 3

    def test_e7_rows_carry_the_reading_note(self):
        inv = build_catalog(MinimalModel(18, 5), "E7_q18")
        assert any("readings differ" in note for note in inv.notes)

    def test_e7_cross_terms_are_off_diagonal_blocks(self):
        m = MinimalModel(18, 5)
        inv = build_catalog(m, "E7_q18")
        labels = m.kac_transversal()
        idx = {lab: i for i, lab in enumerate(labels)}
        i39 = idx[m.fold((1, 3))]
        i99 = idx[m.fold((1, 9))]
        assert inv.X[i39][i99] == 1
        assert inv.X[i99][i39] == 1

    def test_match_catalog_row(self):
        m = MinimalModel(6, 5)
        inv = build_catalog(m, "D_p_odd")
        assert match_catalog_row(m, inv.X) == "D_p_odd"
        assert match_catalog_row(m, build_catalog(m, "A").X) == "A"


REGRESSION_MODELS = [
    (4, 3),
    (5, 2),
    (5, 4),
    (6, 5),
    (5, 6),
    (5, 8),
    (8, 5),
    (7, 6),
    (12, 11),
    (18, 5),
    (5, 18),
]


class TestVerify:
    @pytest.mark.parametrize("p,q", REGRESSION_MODELS)
    def test_every_applicable_row_passes(self, p, q):
        model = MinimalModel(p, q)
        for inv in build_all_catalog(model):
            report = verify_invariant(inv)
            assert report["passed"], (inv.row_tag, report["failures"])

    def test_identity_passes_everywhere(self):
        for p, q in [(3, 2), (5, 3), (7, 2)]:
            report = verify_invariant(build_catalog(MinimalModel(p, q), "A"))
            assert report["passed"]

    def test_weight_gap_violation_caught(self):
        # Ising A-matrix with an extra 1 linking h = 0 to h = 1/16
        m = MinimalModel(4, 3)
        labels = m.kac_transversal()
        j = labels.index(m.fold((2, 2)))
        X = [[int(a == b) for b in range(3)] for a in range(3)]
        X[0][j] += 1
        report = verify_invariant(InvariantMatrix(m, tuple(map(tuple, X))))
        assert not report["passed"]
        assert "M3_T" in report["failures"]

    def test_s_commutation_violation_caught(self):
        # integer weight gap but not in the commutant
        m = MinimalModel(6, 5)
        labels = m.kac_transversal()
        weights = [m.conformal_weight(lab) for lab in labels]
        j = weights.index(3)  # h = 3 pairs integrally with the vacuum
        X = [[int(a == b) for b in range(len(labels))] for a in range(len(labels))]
        X[0][j] += 1
        report = verify_invariant(InvariantMatrix(m, tuple(map(tuple, X))))
        assert report["checks"]["M3_T"]
        assert not report["checks"]["M3_S"]

    def test_ball_method_agrees_with_exact(self):
        m = MinimalModel(12, 11)
        inv = build_catalog(m, "E6_q12")
        exact = verify_invariant(inv, method="exact")
        ball = verify_invariant(inv, method="ball")
        assert exact["passed"] and ball["passed"]
        assert float(ball["radius"]) < 1e-40

    def test_ball_method_catches_violations(self):
        m = MinimalModel(6, 5)
        labels = m.kac_transversal()
        weights = [m.conformal_weight(lab) for lab in labels]
        j = weights.index(3)
        X = [[int(a == b) for b in range(len(labels))] for a in range(len(labels))]
        X[0][j] += 1
        report = verify_invariant(InvariantMatrix(m, tuple(map(tuple, X))), method="ball")
        assert not report["checks"]["M3_S"]


class TestIntegerKernel:
    def test_saturation(self):
        # kernel of [1, 1, -2] contains (1,1,1); a non-saturated basis misses it
        basis = integer_kernel([[1, 1, -2]], 3)
        assert len(basis) == 2
        span_checks = [(1, 1, 1), (2, 0, 1), (0, 2, 1)]
        import numpy as np

        arr = np.array(basis)
        for target in span_checks:
            sol, residual, *_ = np.linalg.lstsq(arr.T, np.array(target), rcond=None)
            rounded = np.rint(sol).astype(int)
            assert (rounded @ arr == np.array(target)).all()

    def test_empty_system_gives_full_lattice(self):
        assert len(integer_kernel([], 4)) == 4


class TestCommutant:
    def test_dimensions(self):
        assert len(commutant_basis(MinimalModel(4, 3))) == 1
        assert len(commutant_basis(MinimalModel(5, 2))) == 1
        assert len(commutant_basis(MinimalModel(6, 5))) == 2

    def test_catalog_matrices_lie_in_the_lattice(self):
        import numpy as np

        m = MinimalModel(6, 5)
        basis = commutant_basis(m)
        arr = np.array([np.array(b).ravel() for b in basis])
        for tag in ("A", "D_p_odd"):
            target = np.array(build_catalog(m, tag).X).ravel()
            sol, *_ = np.linalg.lstsq(arr.T.astype(float), target.astype(float), rcond=None)
            rounded = np.rint(sol).astype(int)
            assert (rounded @ arr == target).all(), tag

    def test_one_dimensional_commutant_is_spanned_by_identity(self):
        basis = commutant_basis(MinimalModel(5, 2))
        mat = basis[0]
        assert mat in (((1, 0), (0, 1)), ((-1, 0), (0, -1)))


class TestClassify:
    @pytest.mark.parametrize(
        "p,q,tags",
        [(4, 3, ["A"]), (5, 2, ["A"]), (6, 5, ["A", "D_p_odd"])],
    )
    def test_matches_catalog(self, p, q, tags):
        result = classify(MinimalModel(p, q), cap=4)
        assert [inv.row_tag for inv in result.invariants] == tags
        assert result.complete
        assert not result.truncated

    @pytest.mark.parametrize("p,q", [(4, 3), (5, 2), (6, 5)])
    def test_matches_brute_force_oracle(self, p, q):
        result = classify(MinimalModel(p, q), cap=4)
        mine = {inv.X for inv in result.invariants}
        assert all(max(map(max, X)) <= 3 for X in mine)
        assert mine == brute_force_invariants(p, q, cap=4, entry_max=3)

    def test_output_transpose_closed_and_contains_a(self):
        result = classify(MinimalModel(6, 5), cap=4)
        xs = {inv.X for inv in result.invariants}
        assert all(tuple(zip(*x)) in xs for x in xs)
        d = result.invariants[0].dim
        assert tuple(tuple(int(i == j) for j in range(d)) for i in range(d)) in xs

    def test_every_output_reverifies(self):
        result = classify(MinimalModel(6, 5), cap=4)
        for inv in result.invariants:
            assert verify_invariant(inv)["passed"]


def test_tag_list_is_stable():
    assert CATALOG_TAGS[0] == "A" and len(CATALOG_TAGS) == 11
