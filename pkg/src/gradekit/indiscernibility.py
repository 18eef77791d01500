"""Complete identity-free indiscernibility, the quotient, and defining formulas.

``a ≈⁻ b`` is decided through the closure set C(a, b): the least set of pairs
containing (a, b) and every (e, e) that is closed under applying each function
coordinatewise. C(a, b) is exactly the set of pairs (t(a, ē), t(b, ē)) over all
terms t and parameters ē, so a ≈⁻ b holds iff every predicate gives the same
answer on the left and right components of every tuple of C-pairs.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import DepthCapExceeded, PreconditionError, QuotientConsistencyError
from .formula import (
    Formula, Func, Iff, Var, atom, conj, forall, free_vars, quantifier_depth, substitute,
)
from .grades import GradeId, INDISCERNIBILITY
from .structure import Structure
from .separators import type_table

MAX_CLOSURE_ARITY = 3
DEFAULT_DEPTH_CAP = 3


@dataclass(frozen=True)
class PairPartition:
    """An equivalence relation on a domain, stored as a class map.

    Class ids are assigned in domain order of each class's first member.
    """

    domain: tuple
    class_of: Mapping[str, int]

    @classmethod
    def from_matrix(cls, domain: Iterable, matrix: np.ndarray) -> "PairPartition":
        domain = tuple(domain)
        ids: dict[str, int] = {}
        for i, e in enumerate(domain):
            if e in ids:
                continue
            members = np.flatnonzero(matrix[i])
            cid = len(set(ids.values()))
            for j in members:
                other = domain[j]
                if other in ids:
                    raise QuotientConsistencyError(f"relation is not transitive at {e}, {other}")
                ids[other] = cid
        part = cls(domain, ids)
        if not np.array_equal(part.matrix(), np.asarray(matrix, dtype=bool)):
            raise QuotientConsistencyError("relation is not an equivalence relation")
        return part

    @classmethod
    def from_classes(cls, domain: Iterable, classes: Iterable[Iterable]) -> "PairPartition":
        domain = tuple(domain)
        index = {e: i for i, e in enumerate(domain)}
        ordered = sorted((sorted((str(x) for x in c), key=index.__getitem__) for c in classes),
                         key=lambda c: index[c[0]])
        return cls(domain, {e: i for i, c in enumerate(ordered) for e in c})

    def same(self, a, b) -> bool:
        return self.class_of[str(a)] == self.class_of[str(b)]

    def __contains__(self, pair) -> bool:
        a, b = pair
        return self.same(a, b)

    @property
    def classes(self) -> tuple[tuple[str, ...], ...]:
        out: dict[int, list[str]] = {}
        for e in self.domain:
            out.setdefault(self.class_of[e], []).append(e)
        return tuple(tuple(v) for _, v in sorted(out.items()))

    def matrix(self) -> np.ndarray:
        ids = np.array([self.class_of[e] for e in self.domain])
        return ids[:, None] == ids[None, :]

    def pairs(self) -> list[tuple[str, str]]:
        return [(a, b) for a in self.domain for b in self.domain if self.same(a, b)]

    def is_identity(self) -> bool:
        return len(self.classes) == len(self.domain)


# ---------------------------------------------------------------------------
# closure algorithm


@dataclass
class _Closure:
    pairs: list[tuple[int, int]]
    # pair -> term over "x" (the pair (a, b) itself) and parameter variables
    terms: dict[tuple[int, int], object]


def closure_pairs(s: Structure, a: int, b: int) -> _Closure:
    """C(a, b) as index pairs, each with a term witnessing it."""
    n = len(s)
    terms: dict[tuple[int, int], object] = {(a, b): Var("x")}
    for e in range(n):
        terms.setdefault((e, e), Var(f"p{e}"))
    order = list(terms)
    funs = [(name, k, s.fun_arrays[name]) for name, k in s.signature.functions if k > 0]
    processed: list[tuple[int, int]] = []
    queue = list(order)
    while queue:
        p = queue.pop(0)
        processed.append(p)
        for name, k, table in funs:
            for combo in itertools.product(processed, repeat=k):
                if p not in combo:
                    continue
                left = int(table[tuple(c[0] for c in combo)])
                right = int(table[tuple(c[1] for c in combo)])
                if (left, right) not in terms:
                    terms[(left, right)] = Func(name, tuple(terms[c] for c in combo))
                    order.append((left, right))
                    queue.append((left, right))
    return _Closure(order, terms)


def _first_disagreement(s: Structure, pairs: list[tuple[int, int]]):
    """First (predicate, pair tuple) whose left and right memberships differ."""
    lefts = np.array([p[0] for p in pairs])
    rights = np.array([p[1] for p in pairs])
    for name, arity in s.signature.predicates:
        if arity > MAX_CLOSURE_ARITY:
            raise PreconditionError(
                f"predicate {name} has arity {arity}; closure check is limited to arity "
                f"{MAX_CLOSURE_ARITY}", module="indiscernibility")
        rel = s.rel_arrays[name]
        lv = rel[np.ix_(*([lefts] * arity))]
        rv = rel[np.ix_(*([rights] * arity))]
        bad = np.argwhere(lv != rv)
        if len(bad):
            return name, [pairs[i] for i in bad[0]]
    return None


def closure_indiscernible(s: Structure, a, b) -> bool:
    """``a ≈⁻ b`` by the general closure algorithm."""
    ia, ib = s.idx(a), s.idx(b)
    if ia == ib:
        return True
    c = closure_pairs(s, ia, ib)
    return _first_disagreement(s, c.pairs) is None


def relational_indiscernible(s: Structure, a, b) -> bool:
    """``a ≈⁻ b`` for relational signatures: place the element at every
    nonempty set of argument positions, with free parameters elsewhere."""
    if not s.signature.relational:
        raise PreconditionError("fast path needs a relational signature", module="indiscernibility")
    ia, ib = s.idx(a), s.idx(b)
    for name, arity in s.signature.predicates:
        rel = s.rel_arrays[name]
        for size in range(1, arity + 1):
            for S in itertools.combinations(range(arity), size):
                ka = tuple(ia if i in S else slice(None) for i in range(arity))
                kb = tuple(ib if i in S else slice(None) for i in range(arity))
                if not np.array_equal(rel[ka], rel[kb]):
                    return False
    return True


def indisc_matrix(s: Structure) -> np.ndarray:
    """Boolean n×n matrix of ≈⁻ (cached on the structure)."""
    if "indisc" not in s._memo:
        n = len(s)
        m = np.eye(n, dtype=bool)
        decide = relational_indiscernible if s.signature.relational else closure_indiscernible
        for i in range(n):
            for j in range(i + 1, n):
                m[i, j] = m[j, i] = decide(s, s.domain[i], s.domain[j])
        m.setflags(write=False)
        s._memo["indisc"] = m
    return s._memo["indisc"]


def full_indisc(s: Structure) -> PairPartition:
    if "indisc_part" not in s._memo:
        s._memo["indisc_part"] = PairPartition.from_matrix(s.domain, indisc_matrix(s))
    return s._memo["indisc_part"]


# ---------------------------------------------------------------------------
# quotient


@dataclass(frozen=True)
class QuotientResult:
    quotient: Structure
    class_of: Mapping[str, str]

    def members(self, q) -> tuple[str, ...]:
        return tuple(e for e, c in self.class_of.items() if c == str(q))


def quotient(s: Structure) -> QuotientResult:
    """The structure of ≈⁻-classes; each class is named by its first member."""
    if "quotient" in s._memo:
        return s._memo["quotient"]
    part = full_indisc(s)
    reps = [c[0] for c in part.classes]
    cls = {e: part.classes[part.class_of[e]][0] for e in s.domain}
    rels = {}
    for name, arity in s.signature.predicates:
        image = {tuple(cls[x] for x in t) for t in s.relations[name]}
        # every tuple of class-mates must agree with its image
        for t in itertools.product(s.domain, repeat=arity):
            if (t in s.relations[name]) != (tuple(cls[x] for x in t) in image):
                raise QuotientConsistencyError(
                    f"predicate {name} does not respect ≈⁻ at {t}")
        rels[name] = image
    funs = {}
    for name, arity in s.signature.functions:
        table: dict[tuple, str] = {}
        for args in itertools.product(s.domain, repeat=arity):
            key = tuple(cls[x] for x in args)
            value = cls[s.apply(name, *args)]
            if table.setdefault(key, value) != value:
                raise QuotientConsistencyError(
                    f"function {name} is not well defined on classes at {args}")
        funs[name] = table
    q = Structure(s.signature, tuple(reps), rels, funs)
    result = QuotientResult(q, cls)
    s._memo["quotient"] = result
    return result


# ---------------------------------------------------------------------------
# grades


def indisc_grade(s: Structure, g, a, b) -> bool:
    """Decide one of the six indiscernibility grades on a finite structure."""
    from .grades import parse_grade
    g = parse_grade(g)
    if g not in INDISCERNIBILITY:
        raise PreconditionError(f"{g} is not an indiscernibility grade", module="indiscernibility")
    ia, ib = s.idx(a), s.idx(b)
    if g is GradeId.id:
        return ia == ib
    if g is GradeId.indiscNeqFull:
        return bool(indisc_matrix(s)[ia, ib])
    # on finite structures these coincide with symmetry / relativity grades
    if g in (GradeId.indiscEqPair, GradeId.indiscEqMon):
        from .symmetry import sym_grade
        target = GradeId.symPair if g is GradeId.indiscEqPair else GradeId.symBare
        return sym_grade(s, target, a, b)[0]
    from .relativity import rel_grade
    target = GradeId.relPair if g is GradeId.indiscNeqPair else GradeId.relBare
    return rel_grade(s, target, a, b)[0]


# ---------------------------------------------------------------------------
# formulas


def _relational_defining(s: Structure) -> Formula:
    parts = []
    for name, arity in s.signature.predicates:
        for size in range(1, arity + 1):
            for S in itertools.combinations(range(arity), size):
                params = [f"v{i + 1}" for i in range(arity - size)]
                it = iter(params)
                slots = ["@" if i in S else next(it) for i in range(arity)]
                left = atom(name, *["x" if t == "@" else t for t in slots])
                right = atom(name, *["y" if t == "@" else t for t in slots])
                parts.append(forall(params, Iff(left, right)))
    return conj(parts)


def defining_formula(s: Structure, depth_cap: int = DEFAULT_DEPTH_CAP) -> Formula:
    """An identity-free formula ε(x, y) whose extension in ``s`` is ≈⁻."""
    if s.signature.relational:
        return _relational_defining(s)
    reps = [c[0] for c in full_indisc(s).classes]
    parts = []
    for ei, ej in itertools.permutations(reps, 2):
        phi = discerning_formula(s, ei, ej, depth_cap)
        assert phi is not None
        parts.append(Iff(substitute(phi, {"y": Var("x")}), phi))
    return conj(parts)


def closure_certificate(s: Structure, a, b) -> Formula | None:
    """∀v̄(θ(x, v̄) ↔ θ(y, v̄)) for an atom θ read off the failed closure check;
    it holds at (a, a) and fails at (a, b). None when a ≈⁻ b."""
    ia, ib = s.idx(a), s.idx(b)
    if ia == ib:
        return None
    c = closure_pairs(s, ia, ib)
    hit = _first_disagreement(s, c.pairs)
    if hit is None:
        return None
    name, pairs = hit
    theta = atom(name, *[c.terms[p] for p in pairs])
    params = sorted((v for v in free_vars(theta) if v != "x"), key=lambda v: int(v[1:]))
    rename = {p: Var(f"v{i + 1}") for i, p in enumerate(params)}
    theta = substitute(theta, rename)
    return forall([f"v{i + 1}" for i in range(len(params))],
                  Iff(theta, substitute(theta, {"x": Var("y")})))


def discerning_formula(s: Structure, a, b, depth_cap: int = DEFAULT_DEPTH_CAP,
                       term_depth: int | None = None) -> Formula | None:
    """An identity-free φ(x, y) with φ(a, a) and φ(a, b) differing in truth,
    of least quantifier depth among those the search can see; None when
    ``a ≈⁻ b``. Raises :class:`DepthCapExceeded` when ``a ≉⁻ b`` but no
    separator is found within ``depth_cap``."""
    ia, ib = s.idx(a), s.idx(b)
    if indisc_matrix(s)[ia, ib]:
        return None
    found = type_table(s, identity=False, term_depth=term_depth).separate(
        (ia, ia), (ia, ib), ("x", "y"), depth_cap)
    if found is not None:
        return found
    cert = closure_certificate(s, a, b)
    if cert is not None and quantifier_depth(cert) <= depth_cap:
        return cert
    raise DepthCapExceeded(
        f"no separator for ({s.domain[ia]}, {s.domain[ib]}) within depth {depth_cap}",
        pair=(s.domain[ia], s.domain[ib]))
