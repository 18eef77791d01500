"""Grade matrices, entailment diagrams as data, and conformance checks."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

import numpy as np

from .errors import PreconditionError, RegimeMismatchError, SizeCapError
from .grades import ALL, EQUIVALENCES, PAIRWISE, GradeId
from .indiscernibility import indisc_matrix, quotient
from .structure import Structure
from .symmetry import Permutation, is_automorphism, orbits, sym_grade

G = GradeId
MATRIX_SIZE_CAP = 10


class Regime(str, Enum):
    generalArbitrary = "generalArbitrary"
    generalRelational = "generalRelational"
    finiteArbitrary = "finiteArbitrary"
    finiteRelational = "finiteRelational"

    @property
    def kebab(self) -> str:
        return {"generalArbitrary": "general-arbitrary", "generalRelational": "general-relational",
                "finiteArbitrary": "finite-arbitrary", "finiteRelational": "finite-relational"}[self.value]

    @property
    def relational(self) -> bool:
        return self in (Regime.generalRelational, Regime.finiteRelational)


def parse_regime(text) -> Regime:
    if isinstance(text, Regime):
        return text
    for r in Regime:
        if text in (r.value, r.kebab):
            return r
    raise PreconditionError(
        f"unknown regime {text!r}; choose from {', '.join(r.kebab for r in Regime)}",
        module="grade-lattice")


# ---------------------------------------------------------------------------
# matrices


@dataclass
class GradeMatrix:
    structure: Structure
    values: dict  # GradeId -> bool array (n, n)
    witnesses: dict = field(default_factory=dict)  # (GradeId, a, b) -> witness

    def get(self, g, a, b) -> bool:
        s = self.structure
        return bool(self.values[GradeId(g)][s.idx(a), s.idx(b)])

    def row(self, a, b) -> dict[str, bool]:
        return {g.value: self.get(g, a, b) for g in ALL}

    def pairs(self):
        return list(itertools.product(self.structure.domain, repeat=2))

    def to_dict(self, pair=None) -> dict:
        pairs = [tuple(str(x) for x in pair)] if pair else self.pairs()
        return {"pairs": [{"a": a, "b": b, "grades": self.row(a, b)} for a, b in pairs]}

    def to_json(self, pair=None) -> str:
        return json.dumps(self.to_dict(pair), indent=2)


def _sym_matrices(s: Structure) -> dict:
    n = len(s)
    total = np.eye(n, dtype=bool)
    pair = np.eye(n, dtype=bool)
    bare = orbits(s).matrix()
    for i, j in itertools.combinations(range(n), 2):
        a, b = s.domain[i], s.domain[j]
        total[i, j] = total[j, i] = is_automorphism(s, Permutation.transposition(s, a, b))
        if total[i, j]:
            pair[i, j] = pair[j, i] = True
        elif bare[i, j]:
            pair[i, j] = pair[j, i] = sym_grade(s, G.symPair, a, b)[0]
    return {G.symTotal: total, G.symPair: pair, G.symBare: bare}


def grade_matrix(s: Structure, cap: int = MATRIX_SIZE_CAP, witnesses: bool = False) -> GradeMatrix:
    """All twelve grades on every ordered pair of ``s``."""
    n = len(s)
    if n > cap:
        raise SizeCapError(f"structure has {n} elements; the matrix cap is {cap}")
    vals = {G.id: np.eye(n, dtype=bool), G.indiscNeqFull: np.array(indisc_matrix(s))}
    vals.update(_sym_matrices(s))
    q = quotient(s)
    qsym = _sym_matrices(q.quotient)
    cls = np.array([q.quotient.idx(q.class_of[e]) for e in s.domain])
    for rg, sg in ((G.relTotal, G.symTotal), (G.relPair, G.symPair), (G.relBare, G.symBare)):
        vals[rg] = qsym[sg][np.ix_(cls, cls)]
    # finite-structure coincidences
    vals[G.indiscEqPair] = vals[G.symPair].copy()
    vals[G.indiscEqMon] = vals[G.symBare].copy()
    vals[G.indiscNeqPair] = vals[G.relPair].copy()
    vals[G.indiscNeqMon] = vals[G.relBare].copy()
    m = GradeMatrix(s, {g: vals[g] for g in ALL})
    if witnesses:
        from .relativity import rel_grade
        for a, b in m.pairs():
            for g in (G.symTotal, G.symPair, G.symBare):
                if m.get(g, a, b):
                    m.witnesses[(g, a, b)] = sym_grade(s, g, a, b)[1]
            for g in (G.relTotal, G.relPair, G.relBare):
                if m.get(g, a, b):
                    m.witnesses[(g, a, b)] = rel_grade(s, g, a, b)[1]
    return m


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True)
class EntailmentDiagram:
    regime: Regime
    nodes: tuple  # tuple of tuples of GradeId (coincidence classes)
    edges: tuple  # (upper node index, lower node index)

    def node_of(self, g) -> int:
        g = GradeId(g)
        for i, node in enumerate(self.nodes):
            if g in node:
                return i
        raise KeyError(g)

    def _reach(self) -> np.ndarray:
        k = len(self.nodes)
        r = np.eye(k, dtype=bool)
        for u, v in self.edges:
            r[u, v] = True
        for m in range(k):
            r |= r[:, [m]] & r[[m], :]
        return r

    def entails(self, g, h) -> bool:
        """Is there a downward path from g to h (same node counts)?"""
        return bool(self._reach()[self.node_of(g), self.node_of(h)])

    def grade_edges(self) -> list[tuple[GradeId, GradeId]]:
        """Entailments between individual grades that conformance must check:
        every Hasse edge, plus both directions inside coincidence classes."""
        out = []
        for node in self.nodes:
            out.extend((g, h) for g, h in itertools.permutations(node, 2))
        for u, v in self.edges:
            out.extend(itertools.product(self.nodes[u], self.nodes[v]))
        return out

    def label(self, i: int) -> str:
        return ", ".join(g.symbol for g in self.nodes[i])

    def to_dot(self) -> str:
        lines = [f'digraph "{self.regime.kebab}" {{', "  rankdir=TB;", "  node [shape=plaintext];"]
        for i, node in enumerate(self.nodes):
            lines.append(f'  n{i} [label="{self.label(i)}", grades="{" ".join(g.value for g in node)}"];')
        for u, v in self.edges:
            lines.append(f"  n{u} -> n{v};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def is_acyclic(self) -> bool:
        r = self._reach()
        return not any(r[u, v] and r[v, u] for u in range(len(self.nodes))
                       for v in range(len(self.nodes)) if u != v)


def _diagram(regime: Regime, nodes, edges) -> EntailmentDiagram:
    nodes = tuple(tuple(n) if isinstance(n, tuple) else (n,) for n in nodes)
    index = {g: i for i, node in enumerate(nodes) for g in node}
    return EntailmentDiagram(regime, nodes, tuple((index[u], index[v]) for u, v in edges))


_GENERAL_SHARED = [
    (G.symTotal, G.symPair), (G.symTotal, G.relTotal),
    (G.symPair, G.indiscEqPair), (G.symPair, G.symBare), (G.symPair, G.relPair),
    (G.relTotal, G.relPair),
    (G.symBare, G.indiscEqMon), (G.symBare, G.relBare),
    (G.relPair, G.indiscNeqPair), (G.relPair, G.relBare),
    (G.indiscEqPair, G.indiscEqMon), (G.indiscEqPair, G.indiscNeqPair),
    (G.relBare, G.indiscNeqMon), (G.indiscEqMon, G.indiscNeqMon), (G.indiscNeqPair, G.indiscNeqMon),
]


def lattice(regime) -> EntailmentDiagram:
    """The Hasse diagram of entailments for ``regime``."""
    regime = parse_regime(regime)
    if regime is Regime.generalArbitrary:
        edges = [(G.id, G.symTotal), (G.id, G.indiscNeqFull), (G.indiscNeqFull, G.relTotal)]
        return _diagram(regime, ALL, edges + _GENERAL_SHARED)
    if regime is Regime.generalRelational:
        edges = [(G.id, G.indiscNeqFull), (G.indiscNeqFull, G.symTotal)]
        return _diagram(regime, ALL, edges + _GENERAL_SHARED)
    pair = (G.indiscEqPair, G.symPair)
    mon = (G.indiscEqMon, G.symBare)
    npair = (G.indiscNeqPair, G.relPair)
    nmon = (G.indiscNeqMon, G.relBare)
    nodes = [G.id, G.symTotal, G.indiscNeqFull, pair, G.relTotal, mon, npair, nmon]
    tail = [(G.symTotal, G.indiscEqPair), (G.indiscEqPair, G.indiscEqMon),
            (G.indiscEqMon, G.indiscNeqMon), (G.relTotal, G.indiscNeqPair),
            (G.indiscNeqPair, G.indiscNeqMon), (G.symTotal, G.relTotal),
            (G.indiscEqPair, G.indiscNeqPair)]
    if regime is Regime.finiteArbitrary:
        head = [(G.id, G.symTotal), (G.id, G.indiscNeqFull), (G.indiscNeqFull, G.relTotal)]
    else:
        head = [(G.id, G.indiscNeqFull), (G.indiscNeqFull, G.symTotal)]
    return _diagram(regime, nodes, head + tail)


# the itemized entailments: (premise, conclusion, holds for arbitrary signatures?)
ENTAILMENT_LEMMA = [
    (G.id, G.indiscNeqFull, True), (G.id, G.symTotal, True),
    (G.indiscNeqFull, G.relTotal, True),
    (G.indiscEqPair, G.indiscNeqPair, True), (G.indiscEqMon, G.indiscNeqMon, True),
    (G.indiscEqPair, G.indiscEqMon, True), (G.indiscNeqPair, G.indiscNeqMon, True),
    (G.symPair, G.indiscEqPair, True), (G.symBare, G.indiscEqMon, True),
    (G.relPair, G.indiscNeqPair, True), (G.relBare, G.indiscNeqMon, True),
    (G.symTotal, G.relTotal, True), (G.symPair, G.relPair, True), (G.symBare, G.relBare, True),
    (G.symTotal, G.symPair, True), (G.symPair, G.symBare, True),
    (G.relTotal, G.relPair, True), (G.relPair, G.relBare, True),
    (G.indiscNeqFull, G.symTotal, False),
]


@dataclass(frozen=True)
class NonEntailment:
    premise: GradeId
    conclusion: GradeId
    structure: str | None  # gallery name, None when only an infinite witness exists
    pair: tuple | None
    relational: bool  # witnessed within relational signatures
    note: str = ""


NON_ENTAILMENTS = [
    NonEntailment(G.indiscNeqFull, G.id, "A", ("1", "2"), True),
    NonEntailment(G.symTotal, G.indiscNeqFull, "B", ("1", "2"), True),
    NonEntailment(G.relTotal, G.indiscEqMon, "C", ("1", "2"), True),
    NonEntailment(G.symBare, G.indiscNeqPair, "D", ("1", "2"), True),
    NonEntailment(G.symPair, G.relTotal, "D", ("1", "3"), True),
    NonEntailment(G.indiscEqPair, G.relBare, None, None, True,
                  "needs an infinite structure: complete graphs of different infinite sizes"),
    NonEntailment(G.indiscNeqFull, G.indiscEqMon, "Ac", ("1", "2"), False),
]


# ---------------------------------------------------------------------------
# conformance and equivalence statuses


@dataclass(frozen=True)
class Violation:
    a: str
    b: str
    premise: GradeId
    conclusion: GradeId

    def __str__(self):
        return f"({self.a},{self.b}): {self.premise} holds but {self.conclusion} fails"


def check_matrix(m: GradeMatrix, regime) -> list[Violation]:
    diagram = lattice(regime)
    out = []
    dom = m.structure.domain
    for g, h in diagram.grade_edges():
        bad = m.values[g] & ~m.values[h]
        for i, j in np.argwhere(bad):
            out.append(Violation(dom[i], dom[j], g, h))
    out.sort(key=lambda v: (m.structure.idx(v.a), m.structure.idx(v.b), v.premise.value, v.conclusion.value))
    return out


def check_conformance(s: Structure, regime, matrix: GradeMatrix | None = None) -> list[Violation]:
    regime = parse_regime(regime)
    if regime.relational and not s.signature.relational:
        raise RegimeMismatchError(f"{regime.kebab} needs a relational signature")
    return check_matrix(matrix or grade_matrix(s), regime)


@dataclass(frozen=True)
class Status:
    reflexive: bool
    symmetric: bool
    transitive: bool

    @property
    def equivalence(self) -> bool:
        return self.reflexive and self.symmetric and self.transitive


def relation_status(r: np.ndarray) -> Status:
    r = np.asarray(r, dtype=bool)
    composed = (r.astype(int) @ r.astype(int)) > 0
    return Status(bool(r.diagonal().all()), bool((r == r.T).all()), bool((~composed | r).all()))


def equivalence_report(s: Structure | GradeMatrix) -> dict[GradeId, Status]:
    m = s if isinstance(s, GradeMatrix) else grade_matrix(s)
    return {g: relation_status(m.values[g]) for g in ALL}


def transitivity_counterexample(r: np.ndarray, domain: Iterable) -> tuple | None:
    domain = tuple(domain)
    n = len(domain)
    for i, j, k in itertools.product(range(n), repeat=3):
        if r[i, j] and r[j, k] and not r[i, k]:
            return domain[i], domain[j], domain[k]
    return None


__all__ = [
    "Regime", "parse_regime", "GradeMatrix", "grade_matrix", "EntailmentDiagram", "lattice",
    "ENTAILMENT_LEMMA", "NON_ENTAILMENTS", "NonEntailment", "Violation", "check_matrix",
    "check_conformance", "Status", "relation_status", "equivalence_report",
    "transitivity_counterexample", "EQUIVALENCES", "PAIRWISE", "MATRIX_SIZE_CAP",
]
