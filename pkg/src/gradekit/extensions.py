"""Inflation by clones, and ≈⁻-elementary extensions of finite structures.

Inflating ``a`` adds fresh elements that copy it: a tuple belongs to a
relation of the extension exactly when its image under the retraction σ
(clones to ``a``, everything else fixed) belongs to the base relation, and
functions are computed after applying σ. The base is an identity-free
elementary substructure of the result and every clone is completely
indiscernible from ``a``.

For finite structures, ``M ≺⁻ N`` along an embedding is decided on quotients:
the embedding must induce an isomorphism from the quotient of M onto the
quotient of N. This suffices because truth of identity-free formulas
survives passage to the quotient. It is necessary because ≈⁻ is definable
without identity on a finite structure, so identity-free sentences can
describe the quotient up to isomorphism.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .dsl import CLONE_MARK
from .errors import PreconditionError
from .grades import GradeId
from .indiscernibility import full_indisc, indisc_matrix, quotient
from .structure import Signature, Structure, make_structure, symmetric_closure
from .symmetry import is_isomorphism, sym_grade


@dataclass(frozen=True)
class InflationResult:
    base: Structure
    extended: Structure
    clones: tuple
    retraction: Mapping[str, str]

    @property
    def embedding(self) -> dict[str, str]:
        return {e: e for e in self.base.domain}


def _clone_names(s: Structure, a: str, k: int) -> list[str]:
    taken = set(s.domain)
    names = []
    for i in itertools.count(1):
        if len(names) == k:
            return names
        name = f"{a}{CLONE_MARK}{i}"
        if name not in taken:
            names.append(name)


def inflate(s: Structure, a, k: int = 1) -> InflationResult:
    """Add ``k`` clones of ``a``, named ``a$1`` .. ``a$k``."""
    a = str(a)
    if a not in s.index:
        raise PreconditionError(f"{a} is not in the domain", module="extensions")
    if k < 1:
        raise PreconditionError("the number of copies must be at least 1", module="extensions")
    clones = _clone_names(s, a, k)
    sigma = {e: e for e in s.domain}
    sigma.update({d: a for d in clones})
    domain = list(s.domain) + clones
    rels = {}
    for name, arity in s.signature.predicates:
        rels[name] = [t for t in itertools.product(domain, repeat=arity)
                      if tuple(sigma[x] for x in t) in s.relations[name]]
    funs = {}
    for name, arity in s.signature.functions:
        funs[name] = {t: s.apply(name, *(sigma[x] for x in t))
                      for t in itertools.product(domain, repeat=arity)}
    ext = make_structure(s.signature, domain, rels, funs)
    return InflationResult(s, ext, tuple(clones), sigma)


def _check_embedding(M: Structure, N: Structure, h: Mapping[str, str]) -> None:
    if M.signature != N.signature:
        raise PreconditionError("structures have different signatures", module="extensions")
    if set(h) != set(M.domain) or any(v not in N.index for v in h.values()):
        raise PreconditionError("embedding must map the whole domain of M into N",
                                module="extensions")
    if len(set(h.values())) != len(h):
        raise PreconditionError("embedding is not injective", module="extensions")
    for name, arity in M.signature.predicates:
        for t in itertools.product(M.domain, repeat=arity):
            if M.holds(name, *t) != N.holds(name, *(h[x] for x in t)):
                raise PreconditionError(f"embedding does not preserve {name} at {t}",
                                        module="extensions")
    for name, arity in M.signature.functions:
        for t in itertools.product(M.domain, repeat=arity):
            if h[M.apply(name, *t)] != N.apply(name, *(h[x] for x in t)):
                raise PreconditionError(f"embedding does not commute with {name} at {t}",
                                        module="extensions")


def is_elementary_ext_noid(M: Structure, N: Structure, embedding: Mapping | None = None) -> bool:
    """Is N an identity-free elementary extension of M along ``embedding``?

    ``embedding`` defaults to the inclusion of domains.
    """
    h = {str(k): str(v) for k, v in (embedding or {e: e for e in M.domain}).items()}
    _check_embedding(M, N, h)
    qm, qn = quotient(M), quotient(N)
    cmap: dict[str, str] = {}
    for e in M.domain:
        c = qn.class_of[h[e]]
        if cmap.setdefault(qm.class_of[e], c) != c:
            return False
    if len(set(cmap.values())) != len(cmap) or set(cmap.values()) != set(qn.quotient.domain):
        return False
    return is_isomorphism(qm.quotient, qn.quotient, cmap)


def check_ext_main(s: Structure, a, b) -> bool:
    """Inflate ``a`` beyond the size of the class of ``b`` and confirm that no
    automorphism of the result sends ``a`` to ``b``."""
    a, b = s.domain[s.idx(a)], s.domain[s.idx(b)]
    part = full_indisc(s)
    if part.same(a, b):
        raise PreconditionError(f"{a} and {b} are completely indiscernible", module="extensions")
    size_b = len(part.classes[part.class_of[b]])
    N = inflate(s, a, size_b + 1).extended
    return not sym_grade(N, GradeId.symBare, a, b)[0]


def check_ext_total(s: Structure, a, b) -> bool:
    """With one clone of ``a``: a total symmetry of (a, b) forces a ≈⁻ b in ``s``."""
    a, b = s.domain[s.idx(a)], s.domain[s.idx(b)]
    N = inflate(s, a, 1).extended
    if not sym_grade(N, GradeId.symTotal, a, b)[0]:
        return True
    return bool(indisc_matrix(s)[s.idx(a), s.idx(b)])


def k_analogue() -> Structure:
    """A finite stand-in for a structure where one clone restores a pairwise
    symmetry between discernible elements.

    Vertex 1 lies on the triangle 1-3-5. Vertex 2 has a non-adjacent twin 4
    inside the four-clique on 2, 4, 6, 7 missing the edge 2-4. Cloning 1 turns its triangle
    into the same shape, so 1 and 2 can be swapped, yet the clone never makes
    that swap fix everything else.
    """
    sig = Signature(predicates=(("R", 2),))
    edges = [(1, 3), (3, 5), (5, 1), (2, 6), (2, 7), (4, 6), (4, 7), (6, 7)]
    return make_structure(sig, range(1, 8), {"R": symmetric_closure(edges)})
