import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gradekit import (
    DepthCapExceeded, GradeId, PairPartition, PreconditionError, RandomSpec, Signature,
    defining_formula, discerning_formula, evaluate, extension, find_isomorphism, full_indisc,
    gallery, indisc_grade, indisc_matrix, make_structure, quotient, random_structure,
)
from gradekit.formula import quantifier_depth, uses_identity
from gradekit.gallery import NAMES
from gradekit.indiscernibility import (
    closure_certificate, closure_indiscernible, relational_indiscernible,
)
from gradekit.semantics import enumerate_formulas, random_formula
from gradekit.grades import INDISCERNIBILITY

from streams import function_stream, relational_stream

REL = RandomSpec(Signature((("P", 1), ("R", 2))), 0.5)
FUN = RandomSpec(Signature((("R", 2),), (("f", 1),)), 0.4)
FUN2 = RandomSpec(Signature((("P", 1),), (("g", 2), ("c", 0))), 0.5)

structures = st.builds(
    lambda seed, size, spec: random_structure(seed, size, spec),
    st.integers(0, 10_000), st.integers(1, 6), st.sampled_from([REL, FUN, FUN2]),
)


def classes(s):
    return {frozenset(c) for c in full_indisc(s).classes}


def test_gallery_classes():
    assert classes(gallery("A")) == {frozenset({"1", "2"})}
    assert classes(gallery("B")) == {frozenset({"1"}), frozenset({"2"})}
    assert classes(gallery("C")) == {frozenset({"1", "3"}), frozenset({"2"})}
    assert classes(gallery("D")) == {frozenset({e}) for e in "1234"}
    assert classes(gallery("I")) == {frozenset(c) for c in
                                      [{"1"}, {"2"}, {"3", "6"}, {"4"}, {"5"}, {"7", "9"}, {"8"}]}


def test_f_is_vacuously_total():
    assert classes(gallery("F")) == {frozenset({"1", "2"})}


def test_quotient_c_is_b():
    q = quotient(gallery("C"))
    assert len(q.quotient) == 2
    assert find_isomorphism(q.quotient, gallery("B")) is not None
    assert q.class_of == {"1": "1", "2": "2", "3": "1"}
    assert q.members("1") == ("1", "3")


def test_quotient_with_singleton_classes():
    for name in ("B", "D", "G"):
        s = gallery(name)
        assert quotient(s).quotient == s


def test_indisc_grade_examples():
    assert not indisc_grade(gallery("C"), GradeId.indiscEqMon, 1, 2)
    assert not indisc_grade(gallery("G"), GradeId.indiscNeqPair, 1, 3)
    assert indisc_grade(gallery("A"), "indiscNeqFull", 1, 2)
    with pytest.raises(PreconditionError):
        indisc_grade(gallery("A"), GradeId.symTotal, 1, 2)


@pytest.mark.parametrize("name", NAMES)
def test_reflexive(name):
    s = gallery(name)
    for a in s.domain:
        assert all(indisc_grade(s, g, a, a) for g in INDISCERNIBILITY)


@given(structures)
def test_equivalence_relation(s):
    m = indisc_matrix(s)
    assert m.diagonal().all() and (m == m.T).all()
    assert (((m.astype(int) @ m.astype(int)) > 0) <= m).all()
    assert PairPartition.from_matrix(s.domain, m).matrix().tolist() == m.tolist()


@given(structures)
def test_congruence(s):
    m = indisc_matrix(s)
    for name, arity in s.signature.functions:
        if arity == 0:
            continue
        for i, j in zip(*np.nonzero(m)):
            a, b = s.domain[i], s.domain[j]
            for rest in itertools.product(s.domain, repeat=arity - 1):
                for pos in range(arity):
                    args_a = rest[:pos] + (a,) + rest[pos:]
                    args_b = rest[:pos] + (b,) + rest[pos:]
                    fa, fb = s.apply(name, *args_a), s.apply(name, *args_b)
                    assert m[s.idx(fa), s.idx(fb)]


@given(structures, st.integers(0, 10_000))
def test_quotient_preservation(s, seed):
    q = quotient(s)
    rng = np.random.default_rng(seed)
    for _ in range(5):
        phi = random_formula(s.signature, ["x", "y"], 3, rng)
        for _ in range(4):
            a = {v: s.domain[rng.integers(len(s))] for v in ("x", "y")}
            qa = {v: q.class_of[e] for v, e in a.items()}
            assert evaluate(s, phi, a) == evaluate(q.quotient, phi, qa)


@given(structures)
def test_quotient_is_reduced(s):
    assert full_indisc(quotient(s).quotient).is_identity()


@given(st.integers(0, 10_000), st.integers(1, 6))
def test_fast_path_matches_closure(seed, size):
    s = random_structure(seed, size, RandomSpec(Signature((("P", 1), ("R", 2), ("T", 3))), 0.5))
    for a, b in itertools.product(s.domain, repeat=2):
        assert relational_indiscernible(s, a, b) == closure_indiscernible(s, a, b)


def test_closure_arity_cap():
    s = make_structure(Signature((("Q", 4),)), [1, 2], {"Q": [(1, 1, 2, 2)]})
    with pytest.raises(PreconditionError):
        closure_indiscernible(s, 1, 2)


def test_defining_formula_a():
    eps = defining_formula(gallery("A"))
    assert not uses_identity(eps)
    assert extension(gallery("A"), eps, ["x", "y"]).all()


@pytest.mark.parametrize("name", NAMES)
def test_defining_formula_gallery(name):
    s = gallery(name)
    eps = defining_formula(s)
    assert not uses_identity(eps)
    assert (extension(s, eps, ["x", "y"]) == indisc_matrix(s)).all()


def test_defining_formula_singleton():
    s = make_structure(Signature((("R", 2),)), ["e"], {"R": [("e", "e")]})
    assert extension(s, defining_formula(s), ["x", "y"]).tolist() == [[True]]


@pytest.mark.parametrize("s", relational_stream()[:60] + function_stream()[:60])
def test_defining_formula_stream(s):
    assert (extension(s, defining_formula(s), ["x", "y"]) == indisc_matrix(s)).all()


def separates(s, phi, a, b):
    return evaluate(s, phi, {"x": a, "y": a}) != evaluate(s, phi, {"x": a, "y": b})


def test_discerning_formula_examples():
    b = gallery("B")
    phi = discerning_formula(b, 1, 2)
    assert str(phi) == "!R(x,y)" and separates(b, phi, "1", "2")
    c = gallery("C")
    phi = discerning_formula(c, 1, 2)
    assert quantifier_depth(phi) <= 1 and separates(c, phi, "1", "2")
    assert discerning_formula(c, 1, 3) is None
    assert discerning_formula(c, 2, 2) is None


def test_depth_cap():
    i = gallery("I")
    assert discerning_formula(i, 7, 8) is not None
    with pytest.raises(DepthCapExceeded) as info:
        discerning_formula(i, 1, 4, depth_cap=0)
    assert info.value.pair == ("1", "4")


@given(structures)
def test_discerning_formula_sound(s):
    m = indisc_matrix(s)
    for i, j in itertools.product(range(len(s)), repeat=2):
        a, b = s.domain[i], s.domain[j]
        try:
            phi = discerning_formula(s, a, b)
        except DepthCapExceeded:
            assert not m[i, j]
            continue
        assert (phi is None) == bool(m[i, j])
        if phi is not None:
            assert not uses_identity(phi) and separates(s, phi, a, b)


@given(structures)
def test_closure_certificate(s):
    m = indisc_matrix(s)
    for i, j in itertools.product(range(len(s)), repeat=2):
        cert = closure_certificate(s, s.domain[i], s.domain[j])
        assert (cert is None) == bool(m[i, j])
        if cert is not None:
            assert separates(s, cert, s.domain[i], s.domain[j])


@pytest.mark.parametrize("s", relational_stream()[:40])
def test_enumeration_oracle(s):
    m = indisc_matrix(s)
    phis = list(enumerate_formulas(s.signature, ["x", "y"], 1, 1, False))
    ext = [extension(s, phi, ["x", "y"]) for phi in phis]
    for i, j in itertools.product(range(len(s)), repeat=2):
        if any(e[i, i] != e[i, j] for e in ext):
            assert not m[i, j]
