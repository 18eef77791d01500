import numpy as np
import pytest

from gradekit import (
    GradeId, RegimeMismatchError, SizeCapError, check_conformance, equivalence_report, gallery,
    grade_matrix, lattice,
)
from gradekit.gallery import NAMES
from gradekit.grades import ALL, EQUIVALENCES, PAIRWISE, parse_grade
from gradekit.lattice import (
    ENTAILMENT_LEMMA, NON_ENTAILMENTS, Regime, check_matrix, parse_regime,
    transitivity_counterexample,
)

G = GradeId


def test_twelve_grades():
    assert len(ALL) == 12
    assert parse_grade("≈ₜ") is G.symTotal and parse_grade("relBare") is G.relBare


def test_matrix_examples():
    a = grade_matrix(gallery("A")).row(1, 2)
    assert a == {g.value: g is not G.id for g in ALL}
    b = grade_matrix(gallery("B"))
    assert b.get(G.symTotal, 1, 2) and not b.get(G.indiscNeqFull, 1, 2)
    c = grade_matrix(gallery("C"))
    assert c.get(G.relTotal, 1, 2) and not c.get(G.indiscEqMon, 1, 2)


def test_matrix_json_shape():
    import json
    data = json.loads(grade_matrix(gallery("A")).to_json(("1", "2")))
    assert data["pairs"][0]["a"] == "1" and data["pairs"][0]["grades"]["id"] is False


def test_matrix_witnesses():
    m = grade_matrix(gallery("D"), witnesses=True)
    assert str(m.witnesses[(G.symPair, "1", "3")]) == "(1 3)(2 4)"
    assert (G.symPair, "1", "2") not in m.witnesses


def test_size_cap():
    with pytest.raises(SizeCapError):
        grade_matrix(gallery("I"), cap=8)


def test_regime_names():
    assert parse_regime("finite-relational") is Regime.finiteRelational
    assert parse_regime("generalArbitrary") is Regime.generalArbitrary


@pytest.mark.parametrize("regime", list(Regime))
def test_diagrams_are_acyclic_with_identity_on_top(regime):
    d = lattice(regime)
    assert d.is_acyclic()
    assert all(d.entails(G.id, g) for g in ALL)
    assert sum(len(n) for n in d.nodes) == 12


def test_general_arbitrary():
    d = lattice("general-arbitrary")
    assert not d.entails(G.indiscNeqFull, G.symTotal)
    assert not d.entails(G.symTotal, G.indiscNeqFull)
    assert len(d.nodes) == 12
    assert d.to_dot().count("label=") == 12


def test_finite_relational_chain():
    d = lattice("finite-relational")
    chain = [G.id, G.indiscNeqFull, G.symTotal, G.symPair, G.symBare, G.relBare]
    assert all(d.entails(x, y) for x, y in zip(chain, chain[1:]))
    assert d.node_of(G.indiscEqPair) == d.node_of(G.symPair)


@pytest.mark.parametrize("premise, conclusion, arbitrary", ENTAILMENT_LEMMA)
def test_entailment_lemma_transcribed(premise, conclusion, arbitrary):
    regimes = list(Regime) if arbitrary else [Regime.generalRelational, Regime.finiteRelational]
    for r in regimes:
        assert lattice(r).entails(premise, conclusion)


@pytest.mark.parametrize("ne", NON_ENTAILMENTS, ids=lambda ne: f"{ne.premise}-{ne.conclusion}")
def test_non_entailments(ne):
    regimes = [Regime.generalRelational] if ne.relational else []
    regimes.append(Regime.generalArbitrary)
    for r in regimes:
        assert not lattice(r).entails(ne.premise, ne.conclusion)
    if ne.structure is None:
        pytest.skip(ne.note)
    m = grade_matrix(gallery(ne.structure))
    assert m.get(ne.premise, *ne.pair) and not m.get(ne.conclusion, *ne.pair)


@pytest.mark.parametrize("name", NAMES)
def test_gallery_conformance(name):
    s = gallery(name)
    regimes = [Regime.finiteArbitrary, Regime.generalArbitrary]
    if s.signature.relational:
        regimes += [Regime.finiteRelational, Regime.generalRelational]
    for r in regimes:
        assert check_conformance(s, r) == []


def test_regime_mismatch():
    with pytest.raises(RegimeMismatchError):
        check_conformance(gallery("F"), "finite-relational")


def test_adversarial_violation():
    m = grade_matrix(gallery("D"))
    m.values[G.indiscEqPair] = m.values[G.indiscEqPair].copy()
    m.values[G.indiscEqPair][0, 2] = False
    m.values[G.symPair] = m.values[G.symPair].copy()
    m.values[G.symPair][0, 2] = True
    bad = check_matrix(m, "general-arbitrary")
    assert len(bad) == 1
    assert (bad[0].a, bad[0].b, bad[0].premise, bad[0].conclusion) == ("1", "3", G.symPair, G.indiscEqPair)


def test_g_equivalence_report():
    rep = equivalence_report(gallery("G"))
    for g in ALL:
        assert rep[g].reflexive and rep[g].symmetric
    for g in EQUIVALENCES:
        assert rep[g].transitive
    for g in PAIRWISE:
        assert not rep[g].transitive
    m = grade_matrix(gallery("G"))
    r = m.values[G.symPair]
    assert r[0, 1] and r[1, 2] and not r[0, 2]
    assert transitivity_counterexample(r, gallery("G").domain) is not None


@pytest.mark.parametrize("name", NAMES)
def test_coincidences(name):
    m = grade_matrix(gallery(name))
    for g, h in [(G.indiscEqPair, G.symPair), (G.indiscEqMon, G.symBare),
                 (G.indiscNeqPair, G.relPair), (G.indiscNeqMon, G.relBare)]:
        assert np.array_equal(m.values[g], m.values[h])
