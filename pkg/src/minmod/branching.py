"""Character branching for complementary model pairs and extension families.

Fix coprime p, p' >= 2.  Three models are in play: the base (p', p) with
labels (m, m'), m <= p-1 and m' <= p'-1, and the two factors (p+p', p) and
(p', p+p').  Summing factor-character products

    F_{m,m'} = sum over n of chi^{p+p',p}_{m,n} * chi^{p',p+p'}_{n,m'}

over the alternating window 0 < n < p+p', n = m+m'-1 mod 2, yields a series
proportional to the base character with a ratio independent of (m, m'):
the cross-ratio identity

    F_{m,m'} * chi^{p',p}_{m0,m0'} = F_{m0,m0'} * chi^{p',p}_{m,m'}

holds coefficient by coefficient, so the common ratio

    chi_U = F_{1,1} / chi^{p',p}_{1,1}

is well defined.  Its leading exponent is 5/24, forced by the exact
central-charge bookkeeping

    c_{p+p',p} + c_{p',p+p'} - c_{p',p} = -5,

and its coefficients are nonnegative integers (the leading one is 2: two
window terms tie at the leading exponent).  extract_chi_u asserts these
facts rather than trusting them.

The extension families catalogued here attach to one minimal model a short
list of module labels (vacuum first) whose non-vacuum weights are positive
integers.  Summing the summand characters gives the extended vacuum
character, and the summand set must reproduce the vacuum row of the matching
exceptional invariant; invariant_of_family checks that bridge entry by
entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .characters import PuiseuxSeries, character, series_add, series_div, series_mul
from .invariants import InvariantMatrix, build_catalog, verify_invariant
from .models import KacLabel, MinimalModel


@dataclass(frozen=True)
class BranchingInstance:
    """Coprime pair (p, p_prime) with its base and factor models."""

    p: int
    p_prime: int

    def __post_init__(self) -> None:
        # MinimalModel validates each pair; p = p_prime is caught early with
        # a message in terms of the instance rather than a derived model.
        if self.p == self.p_prime:
            raise ValueError("p and p_prime must differ")
        for model in (self.base, self.left_factor, self.right_factor):
            assert model.p >= 2 and model.q >= 2

    @property
    def base(self) -> MinimalModel:
        return MinimalModel(self.p_prime, self.p)

    @property
    def left_factor(self) -> MinimalModel:
        return MinimalModel(self.p + self.p_prime, self.p)

    @property
    def right_factor(self) -> MinimalModel:
        return MinimalModel(self.p_prime, self.p + self.p_prime)

    def require_base_label(self, m: int, m_prime: int) -> None:
        """(m, m') must lie in the full label rectangle of the base model.

        Both orbit representatives are accepted: the two members of a fold
        orbit carry windows of opposite parity but produce the same ratio.
        """
        if not (1 <= m <= self.p - 1 and 1 <= m_prime <= self.p_prime - 1):
            raise ValueError(
                f"label ({m}, {m_prime}) outside the rectangle of {self.base}"
            )

    def window(self, m: int, m_prime: int) -> list[int]:
        self.require_base_label(m, m_prime)
        total = self.p + self.p_prime
        start = 1 if (m + m_prime - 1) % 2 else 2
        return list(range(start, total, 2))


def decomposition_list(
    p: int, p_prime: int, m: int, m_prime: int
) -> list[tuple[KacLabel, KacLabel]]:
    """Factor-label pairs ((m,n), (n,m')) over the window, folded, in n order.

    Each pair appears with multiplicity one: when n and p+p'-n both lie in
    the window their left components sit in different fold orbits, so the
    folded pairs stay distinct.
    """
    inst = BranchingInstance(p, p_prime)
    pairs = [
        (inst.left_factor.fold((m, n)), inst.right_factor.fold((n, m_prime)))
        for n in inst.window(m, m_prime)
    ]
    assert len(set(pairs)) == len(pairs), "decomposition pair repeated"
    return pairs


@lru_cache(maxsize=None)
def _chi(model: MinimalModel, label: KacLabel, order: int) -> PuiseuxSeries:
    return character(model, label, order)


def branching_series(
    p: int, p_prime: int, m: int, m_prime: int, order: int
) -> PuiseuxSeries:
    """F_{m,m'}: window sum of left-factor times right-factor characters.

    Term offsets differ by integers (series_add raises otherwise), so the
    sum lives on a single exponent coset and stays trusted to the requested
    order past its own leading exponent.
    """
    inst = BranchingInstance(p, p_prime)
    total: PuiseuxSeries | None = None
    for n in inst.window(m, m_prime):
        term = series_mul(
            _chi(inst.left_factor, inst.left_factor.fold((m, n)), order),
            _chi(inst.right_factor, inst.right_factor.fold((n, m_prime)), order),
        )
        total = term if total is None else series_add(total, term)
    assert total is not None, "empty decomposition window"
    return total


def branching_identity_check(
    p: int,
    p_prime: int,
    pair1: tuple[int, int],
    pair2: tuple[int, int],
    order: int = 20,
) -> bool:
    """Cross-ratio identity F_1 * chi_2 = F_2 * chi_1 on the trusted range."""
    inst = BranchingInstance(p, p_prime)
    for m, m_prime in (pair1, pair2):
        inst.require_base_label(m, m_prime)
    f1 = branching_series(p, p_prime, *pair1, order)
    f2 = branching_series(p, p_prime, *pair2, order)
    chi1 = _chi(inst.base, inst.base.fold(pair1), order)
    chi2 = _chi(inst.base, inst.base.fold(pair2), order)
    return series_mul(f1, chi2).agrees_with(series_mul(f2, chi1))


def extract_chi_u(p: int, p_prime: int, order: int) -> PuiseuxSeries:
    """Common ratio F_{1,1} / chi^{p',p}_{1,1} with its postconditions asserted."""
    inst = BranchingInstance(p, p_prime)
    c_excess = (
        inst.left_factor.central_charge()
        + inst.right_factor.central_charge()
        - inst.base.central_charge()
    )
    assert c_excess == Fraction(-5), f"central charge excess {c_excess} != -5"
    ratio = series_div(
        branching_series(p, p_prime, 1, 1, order),
        _chi(inst.base, (1, 1), order),
    )
    exponent, _ = ratio.leading()
    assert exponent == Fraction(5, 24), f"leading exponent {exponent} != 5/24"
    bad = [c for c in ratio.coeffs if not (isinstance(c, int) and c >= 0)]
    assert not bad, f"non-integral or negative ratio coefficients: {bad[:3]}"
    return ratio


# Families of exceptional extensions: one slot of the model is pinned, the
# other runs over a congruence class, and the summands place a fixed block
# of odd labels in the pinned slot's companion position.
_FAMILIES: dict[str, dict] = {
    "e6q": {"slot": "s", "pinned": 12, "residue": 11, "block": (1, 7)},
    "e6r": {"slot": "r", "pinned": 12, "residue": 1, "block": (1, 7)},
    "e8q": {"slot": "s", "pinned": 30, "residue": 29, "block": (1, 11, 19, 29)},
    "e8r": {"slot": "r", "pinned": 30, "residue": 1, "block": (1, 11, 19, 29)},
}

_FAMILY_ROW = {
    "e6q": "E6_q12",
    "e6r": "E6_p12",
    "e8q": "E8_q30",
    "e8r": "E8_p30",
}


@dataclass(frozen=True)
class ExtensionDescriptor:
    """A model plus the summand labels and weights of one extension family."""

    family: str
    model: MinimalModel
    summands: tuple[KacLabel, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        assert self.summands[0] == (1, 1), "vacuum summand must come first"
        assert len(set(self.summands)) == len(self.summands)
        assert len(self.weights) == len(self.summands)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "model": [self.model.p, self.model.q],
            "summands": [list(lab) for lab in self.summands],
            "weights": [str(w) for w in self.weights],
        }


def family_descriptor(family: str, parameter: int) -> ExtensionDescriptor:
    """Descriptor for one family member; rejects bad names and congruences."""
    if family not in _FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {sorted(_FAMILIES)}")
    fam = _FAMILIES[family]
    if parameter % fam["pinned"] != fam["residue"]:
        raise ValueError(
            f"family {family} needs parameter = {fam['residue']} "
            f"mod {fam['pinned']}, got {parameter}"
        )
    if fam["slot"] == "s":
        model = MinimalModel(fam["pinned"], parameter)
        raw = [(1, b) for b in fam["block"]]
    else:
        model = MinimalModel(parameter, fam["pinned"])
        raw = [(b, 1) for b in fam["block"]]
    summands = tuple(model.fold(lab) for lab in raw)
    return ExtensionDescriptor(
        family=family,
        model=model,
        summands=summands,
        weights=tuple(model.conformal_weight(lab) for lab in summands),
    )


def check_integrality(desc: ExtensionDescriptor) -> dict:
    """Non-vacuum summand weights must be positive integers."""
    offenders = [
        {"label": list(lab), "weight": str(w)}
        for lab, w in zip(desc.summands[1:], desc.weights[1:])
        if w.denominator != 1 or w <= 0
    ]
    return {
        "family": desc.family,
        "model": [desc.model.p, desc.model.q],
        "weights": [str(w) for w in desc.weights],
        "offenders": offenders,
        "passed": not offenders,
    }


def extension_character(desc: ExtensionDescriptor, order: int) -> PuiseuxSeries:
    """Sum of the summand characters, anchored at exponent -c/24."""
    total: PuiseuxSeries | None = None
    for lab in desc.summands:
        term = _chi(desc.model, lab, order)
        total = term if total is None else series_add(total, term)
    assert total is not None
    assert total.offset == -desc.model.central_charge() / 24, (
        "extended character does not start at the vacuum exponent"
    )
    assert all(isinstance(c, int) and c >= 0 for c in total.coeffs)
    return total


def invariant_of_family(desc: ExtensionDescriptor) -> InvariantMatrix:
    """Catalog row whose vacuum row is the indicator of the summand set.

    Runs the full invariant verification before comparing the vacuum row,
    so a descriptor pointing at a non-invariant matrix fails loudly.
    """
    inv = build_catalog(desc.model, _FAMILY_ROW[desc.family])
    report = verify_invariant(inv)
    assert report["passed"], f"catalog row failed verification: {report['failures']}"
    labels = desc.model.kac_transversal()
    vac = labels.index((1, 1))
    summand_set = set(desc.summands)
    for j, lab in enumerate(labels):
        want = 1 if lab in summand_set else 0
        got = inv.X[vac][j]
        assert got == want, (
            f"vacuum row entry at {lab}: matrix has {got}, summand set wants {want}"
        )
    return inv
