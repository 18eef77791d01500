"""Capturing grades with sets of two-variable formulas.

A set Γ of formulas in x, y captures a grade on a structure when the grade
holds of (a, b) exactly when every member of Γ is true at (a, b).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .formula import (
    And, Eq, Formula, Func, Iff, Implies, Not, Var, atom, conj, forall, free_vars, negate,
    substitute,
)
from .grades import GradeId, parse_grade
from .indiscernibility import defining_formula, discerning_formula, indisc_matrix, quotient
from .semantics import evaluate, extension
from .structure import Signature, Structure
from .symmetry import Permutation, is_automorphism

L_EQ = "L="
L_NEQ = "L-"


@dataclass(frozen=True)
class FormulaSet:
    formulas: tuple
    language: str
    note: str = ""
    approximate: bool = False

    def __iter__(self):
        return iter(self.formulas)

    def __len__(self):
        return len(self.formulas)

    def to_text(self) -> str:
        return "".join(f"{phi}\n" for phi in self.formulas)


def _placements(arity: int, params: int):
    """Argument fillings from x, y, u1..; parameters appear in first-use order
    and at least one of x, y occurs."""
    def rec(prefix, used):
        if len(prefix) == arity:
            if "x" in prefix or "y" in prefix:
                yield tuple(prefix), used
            return
        options = ["x", "y"] + [f"u{i + 1}" for i in range(used)]
        if used < params:
            options.append(f"u{used + 1}")
        for o in options:
            yield from rec(prefix + [o], max(used, int(o[1:]) if o.startswith("u") else 0))
    yield from rec([], 0)


def _swap(phi: Formula) -> Formula:
    return substitute(phi, {"x": Var("y"), "y": Var("x")})


def _guarded(phi: Formula, used: int) -> Formula:
    params = [f"u{i + 1}" for i in range(used)]
    body = Iff(phi, _swap(phi))
    if not params:
        return body
    guard = conj(And(Not(Eq(Var(u), Var("x"))), Not(Eq(Var(u), Var("y")))) for u in params)
    return forall(params, Implies(guard, body))


def capture_set_sym_total(signature: Signature, param_bound: int | None = None) -> FormulaSet:
    """The guarded biconditionals ≃_φ for every atomic placement of x, y and at
    most ``param_bound`` parameters (default: largest arity minus one, which
    is enough for relational signatures)."""
    arities = [a for _, a in signature.predicates] + [a + 1 for _, a in signature.functions]
    if param_bound is None:
        param_bound = max(arities, default=1) - 1
    out: list[Formula] = []
    for name, arity in signature.predicates:
        for slots, used in _placements(arity, param_bound):
            out.append(_guarded(atom(name, *slots), used))
    approximate = not signature.relational
    for name, arity in signature.functions:
        # f(args) = w at term depth one
        for slots, used in _placements(arity + 1, param_bound):
            phi = Eq(Func(name, tuple(Var(v) for v in slots[:-1])), Var(slots[-1]))
            out.append(_guarded(phi, used))
    note = f"atomic placements with up to {param_bound} parameter(s)"
    if approximate:
        note += "; function terms limited to depth 1"
    return FormulaSet(tuple(dict.fromkeys(out)), L_EQ, note, approximate)


def _normalized(s: Structure, phi: Formula, a: str, e: str) -> Formula:
    """Orient a separator so that it holds at (a, a) and fails at (a, e)."""
    return phi if evaluate(s, phi, {"x": a, "y": a}) else negate(phi)


def _violation(s: Structure, a: str, b: str):
    """A quotient tuple on which swapping [a] and [b] changes the answer.

    Returns (kind, name, classes, value_class) where kind is "pred" or "func".
    """
    q = quotient(s)
    Q = q.quotient
    ca, cb = q.class_of[a], q.class_of[b]
    tau = {ca: cb, cb: ca}
    for name, arity in s.signature.predicates:
        for t in itertools.product(Q.domain, repeat=arity):
            if Q.holds(name, *t) != Q.holds(name, *(tau.get(x, x) for x in t)):
                return "pred", name, t, None
    for name, arity in s.signature.functions:
        for t in itertools.product(Q.domain, repeat=arity):
            w = Q.apply(name, *t)
            if Q.apply(name, *(tau.get(x, x) for x in t)) != tau.get(w, w):
                return "func", name, t, w
    return None


def _gamma_for(s: Structure, a: str, b: str, depth_cap: int, eps: Formula | None) -> Formula | None:
    q = quotient(s)
    hit = _violation(s, a, b)
    if hit is None:
        return None
    kind, name, classes, value = hit
    ca, cb = q.class_of[a], q.class_of[b]
    slot: dict[str, str] = {ca: "x", cb: "y"}
    reps: list[str] = []

    def term_for(c):
        if c not in slot:
            reps.append(q.members(c)[0])
            slot[c] = f"u{len(reps)}"
        return Var(slot[c])

    args = tuple(term_for(c) for c in classes)
    if kind == "pred":
        theta = atom(name, *args)
    else:
        target = term_for(value)
        theta = substitute(eps, {"x": Func(name, args), "y": target})
    guards = []
    for i, e in enumerate(reps):
        u = Var(f"u{i + 1}")
        phi = _normalized(s, discerning_formula(s, a, e, depth_cap), a, e)
        psi = _normalized(s, discerning_formula(s, b, e, depth_cap), b, e)
        guards += [substitute(phi, {"y": Var("x")}), negate(substitute(phi, {"y": u})),
                   substitute(psi, {"x": Var("y")}), negate(substitute(psi, {"x": Var("y"), "y": u}))]
    body = Iff(theta, _swap(theta))
    params = [f"u{i + 1}" for i in range(len(reps))]
    return forall(params, Implies(conj(guards), body)) if guards else body


def capture_set_rel_total(s: Structure, depth_cap: int = 3) -> FormulaSet:
    """Finitely many members of the guarded schema for ~ₜ, one refuting each
    pair of ``s`` that is not ~ₜ-related. Every member is sound on every
    structure; together they capture ~ₜ on ``s``."""
    from .relativity import rel_grade
    eps = None if s.signature.relational else defining_formula(s, depth_cap)
    out: list[Formula] = []
    for a, b in itertools.product(s.domain, repeat=2):
        if rel_grade(s, GradeId.relTotal, a, b)[0]:
            continue
        gamma = _gamma_for(s, a, b, depth_cap, eps)
        assert gamma is not None
        out.append(gamma)
    note = f"one guarded formula per refuted pair; separators within depth {depth_cap}"
    return FormulaSet(tuple(dict.fromkeys(out)), L_NEQ, note)


def capture_set_indisc_full(s: Structure, depth_cap: int = 3) -> FormulaSet:
    return FormulaSet((defining_formula(s, depth_cap),), L_NEQ, "defining formula of ≈⁻")


@dataclass(frozen=True)
class CaptureCounterexample:
    a: str
    b: str
    grade_holds: bool
    set_holds: bool

    def __bool__(self):
        return False

    def __str__(self):
        if self.grade_holds:
            return f"({self.a},{self.b}): grade holds but some formula fails"
        return f"({self.a},{self.b}): grade fails but every formula holds"


def grade_relation(s: Structure, g) -> np.ndarray:
    from .lattice import grade_matrix
    g = parse_grade(g)
    if g is GradeId.id:
        return np.eye(len(s), dtype=bool)
    if g is GradeId.indiscNeqFull:
        return np.array(indisc_matrix(s))
    if g is GradeId.symTotal:
        n = len(s)
        return np.array([[is_automorphism(s, Permutation.transposition(s, a, b)) for b in s.domain]
                         for a in s.domain]).reshape(n, n)
    return grade_matrix(s, cap=12).values[g]


def verify_capture(s: Structure, g, gamma) -> bool | CaptureCounterexample:
    """True if Γ captures grade ``g`` on ``s``; otherwise the first pair in
    domain order where they disagree."""
    truth = grade_relation(s, g)
    joint = np.ones((len(s), len(s)), dtype=bool)
    for phi in gamma:
        if not free_vars(phi) <= {"x", "y"}:
            raise ValueError(f"formula {phi} has free variables beyond x, y")
        joint &= extension(s, phi, ["x", "y"])
    bad = np.argwhere(truth != joint)
    if len(bad) == 0:
        return True
    i, j = bad[0]
    return CaptureCounterexample(s.domain[i], s.domain[j], bool(truth[i, j]), bool(joint[i, j]))


# capturability of each grade: (with identity, without identity)
# "✓" universally capturable, "×" not capturable in some structure,
# "f" capturable on finite structures, "fq" capturable when the quotient is finite
CAPTURABILITY = {
    GradeId.id: ("✓", "×"),
    GradeId.indiscEqPair: ("✓", "×"),
    GradeId.indiscEqMon: ("✓", "×"),
    GradeId.indiscNeqFull: ("✓", "✓"),
    GradeId.indiscNeqPair: ("✓", "✓"),
    GradeId.indiscNeqMon: ("✓", "✓"),
    GradeId.symTotal: ("✓", "×"),
    GradeId.symPair: ("f", "×"),
    GradeId.symBare: ("f", "×"),
    GradeId.relTotal: ("✓", "✓"),
    GradeId.relPair: ("fq", "fq"),
    GradeId.relBare: ("fq", "fq"),
}
