import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradekit import (
    CAPTURABILITY, GradeId, RandomSpec, Signature, capture_set_indisc_full,
    capture_set_rel_total, capture_set_sym_total, enumerate_formulas, evaluate, extension,
    gallery, grade_matrix, make_structure, random_structure, verify_capture,
)
from gradekit.capture import CaptureCounterexample, FormulaSet
from gradekit.formula import Eq, Var, free_vars, uses_identity
from gradekit.gallery import NAMES
from gradekit.separators import type_table

from streams import function_stream, relational_stream

RELATIONAL = [RandomSpec(Signature((("R", 2),)), 0.5),
              RandomSpec(Signature((("P", 1), ("R", 2))), 0.3),
              RandomSpec(Signature((("T", 3),)), 0.2)]
relational = st.builds(lambda seed, size, spec: random_structure(seed, size, spec),
                       st.integers(0, 10_000), st.integers(1, 5), st.sampled_from(RELATIONAL))


def test_sym_total_set_without_parameters():
    gamma = capture_set_sym_total(Signature((("R", 2),)), param_bound=0)
    assert [str(f) for f in gamma] == [
        "R(x,x) <-> R(y,y)", "R(x,y) <-> R(y,x)", "R(y,x) <-> R(x,y)", "R(y,y) <-> R(x,x)"]
    assert gamma.language == "L="


def test_sym_total_captures_b():
    b = gallery("B")
    assert verify_capture(b, GradeId.symTotal, capture_set_sym_total(b.signature)) is True


def test_sym_total_empty_signature():
    s = make_structure(Signature(), [1, 2, 3])
    gamma = capture_set_sym_total(s.signature)
    assert len(gamma) == 0
    assert verify_capture(s, GradeId.symTotal, gamma) is True


@pytest.mark.parametrize("name", NAMES)
def test_sym_total_gallery(name):
    s = gallery(name)
    gamma = capture_set_sym_total(s.signature)
    assert gamma.approximate == (not s.signature.relational)
    assert verify_capture(s, GradeId.symTotal, gamma) is True


@given(relational)
def test_sym_total_sound_and_complete(s):
    gamma = capture_set_sym_total(s.signature)
    total = grade_matrix(s).values[GradeId.symTotal]
    for phi in gamma:
        assert (extension(s, phi, ["x", "y"]) >= total).all()
    assert verify_capture(s, GradeId.symTotal, gamma) is True


@pytest.mark.parametrize("name", ["C", "D", "G", "I", "F", "Ac", "A", "B"])
def test_rel_total_gallery(name):
    s = gallery(name)
    gamma = capture_set_rel_total(s)
    assert gamma.language == "L-"
    assert not any(uses_identity(phi) for phi in gamma)
    assert all(free_vars(phi) <= {"x", "y"} for phi in gamma)
    assert verify_capture(s, GradeId.relTotal, gamma) is True


def test_rel_total_d_refutes_1_3():
    d = gallery("D")
    gamma = capture_set_rel_total(d)
    assert any(not evaluate(d, phi, {"x": "1", "y": "3"}) for phi in gamma)


def test_rel_total_singleton():
    s = make_structure(Signature((("R", 2),)), ["e"])
    gamma = capture_set_rel_total(s)
    assert len(gamma) == 0 and verify_capture(s, GradeId.relTotal, gamma) is True


@pytest.mark.parametrize("s", relational_stream()[:40] + function_stream()[:40])
def test_rel_total_stream(s):
    assert verify_capture(s, GradeId.relTotal, capture_set_rel_total(s)) is True


@pytest.mark.parametrize("name", NAMES)
def test_indisc_full(name):
    s = gallery(name)
    assert verify_capture(s, GradeId.indiscNeqFull, capture_set_indisc_full(s)) is True


def test_identity_captures_itself():
    gamma = FormulaSet((Eq(Var("x"), Var("y")),), "L=")
    for name in NAMES:
        assert verify_capture(gallery(name), GradeId.id, gamma) is True


def test_identity_not_captured_without_identity_on_i():
    i = gallery("I")
    for q, c in [(2, 1), (1, 2)]:
        gamma = FormulaSet(tuple(enumerate_formulas(i.signature, ["x", "y"], q, c, False)), "L-")
        for phi in gamma:
            assert evaluate(i, phi, {"x": 1, "y": 4}) == evaluate(i, phi, {"x": 1, "y": 7})
        verdict = verify_capture(i, GradeId.id, gamma)
        assert isinstance(verdict, CaptureCounterexample) and not verdict


def test_i_pairs_agree_on_depth_two_types():
    types = type_table(gallery("I"), identity=False)
    assert types.same((0, 3), (0, 6), 2) and types.same((0, 1), (6, 7), 2)
    with_id = type_table(gallery("I"), identity=True)
    assert not with_id.same((0, 3), (0, 6), 2)


def test_counterexample_reporting():
    c = gallery("C")
    verdict = verify_capture(c, GradeId.id, FormulaSet((), "L-"))
    assert not verdict and (verdict.a, verdict.b) == ("1", "2")
    assert "every formula holds" in str(verdict)


def test_capturability_table_complete():
    assert set(CAPTURABILITY) == set(GradeId)
    assert CAPTURABILITY[GradeId.relTotal] == ("✓", "✓")
    assert CAPTURABILITY[GradeId.symTotal][1] == "×"
