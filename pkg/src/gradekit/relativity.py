"""Relativeness and near-correspondences, the maps e and c, relativity grades.

A near-correspondence is decided through quotients: a total, surjective
relation preserves every identity-free formula exactly when it induces a
well-defined, injective map of ≈⁻-classes that is an isomorphism of the
quotient structures.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import PreconditionError
from .grades import GradeId, parse_grade
from .indiscernibility import quotient
from .structure import Structure
from .symmetry import automorphisms, is_isomorphism, sym_grade

Correspondence = frozenset  # of (element of M, element of N) pairs


def correspondence(pairs: Iterable) -> frozenset:
    return frozenset((str(a), str(b)) for a, b in pairs)


def _matrix(M: Structure, N: Structure, pi) -> np.ndarray | None:
    P = np.zeros((len(M), len(N)), dtype=bool)
    for a, b in pi:
        a, b = str(a), str(b)
        if a not in M.index or b not in N.index:
            return None
        P[M.index[a], N.index[b]] = True
    return P


def _total_surjective(P: np.ndarray) -> bool:
    return bool(P.any(axis=1).all() and P.any(axis=0).all())


def is_relativeness_correspondence(M: Structure, N: Structure, pi) -> bool:
    """Total, surjective, preserves predicates on linked tuples, and links
    function values of linked arguments."""
    if M.signature != N.signature:
        return False
    P = _matrix(M, N, pi)
    if P is None or not _total_surjective(P):
        return False
    li, ri = np.nonzero(P)
    for name, k in M.signature.predicates:
        lhs = M.rel_arrays[name][np.ix_(*([li] * k))]
        rhs = N.rel_arrays[name][np.ix_(*([ri] * k))]
        if not np.array_equal(lhs, rhs):
            return False
    for name, k in M.signature.functions:
        fm, fn = M.fun_arrays[name], N.fun_arrays[name]
        if k == 0:
            if not P[fm, fn]:
                return False
            continue
        vals_m = fm[np.ix_(*([li] * k))]
        vals_n = fn[np.ix_(*([ri] * k))]
        if not P[vals_m, vals_n].all():
            return False
    return True


def _class_map(M: Structure, N: Structure, pi) -> dict[str, str] | None:
    """The induced map of quotient elements, or None if not a bijection."""
    P = _matrix(M, N, pi)
    if P is None or not _total_surjective(P):
        return None
    qm, qn = quotient(M), quotient(N)
    cmap: dict[str, str] = {}
    for a, b in pi:
        ca, cb = qm.class_of[str(a)], qn.class_of[str(b)]
        if cmap.setdefault(ca, cb) != cb:
            return None
    if len(set(cmap.values())) != len(cmap):
        return None
    return cmap


def is_near_correspondence(M: Structure, N: Structure, pi) -> bool:
    if M.signature != N.signature:
        return False
    cmap = _class_map(M, N, pi)
    return cmap is not None and is_isomorphism(quotient(M).quotient, quotient(N).quotient, cmap)


def is_quotient_iso(M: Structure, N: Structure, pi_hat: Mapping) -> bool:
    return is_isomorphism(quotient(M).quotient, quotient(N).quotient,
                          {str(k): str(v) for k, v in pi_hat.items()})


def galois_e(M: Structure, N: Structure, pi_hat: Mapping) -> frozenset:
    """``a e(π) b`` iff π([a]) = [b]."""
    if not is_quotient_iso(M, N, pi_hat):
        raise PreconditionError("map is not an isomorphism of the quotients", module="relativity")
    qm, qn = quotient(M), quotient(N)
    pi_hat = {str(k): str(v) for k, v in pi_hat.items()}
    return frozenset((a, b) for a in M.domain for b in N.domain
                     if pi_hat[qm.class_of[a]] == qn.class_of[b])


def galois_c(M: Structure, N: Structure, pi) -> dict[str, str]:
    """The quotient isomorphism induced by a near-correspondence."""
    if not is_near_correspondence(M, N, pi):
        raise PreconditionError("relation is not a near-correspondence", module="relativity")
    cmap = _class_map(M, N, pi)
    return {q: cmap[q] for q in quotient(M).quotient.domain}


def maximal_extension(M: Structure, N: Structure, pi) -> frozenset:
    """e(c(Π)): the unique maximal relativeness correspondence extending Π."""
    return galois_e(M, N, galois_c(M, N, pi))


def quotient_automorphisms(s: Structure, limit: int | None = None):
    """Automorphisms of the quotient of ``s`` as maps of class names."""
    for perm in automorphisms(quotient(s).quotient, limit=limit):
        yield perm.as_dict()


_SYM_OF = {GradeId.relTotal: GradeId.symTotal, GradeId.relPair: GradeId.symPair,
           GradeId.relBare: GradeId.symBare}


def rel_grade(s: Structure, g, a, b) -> tuple[bool, frozenset | None]:
    """Decide a relativity grade via the matching symmetry grade of the quotient.

    The witness is e of the least quotient automorphism that does the job.
    """
    g = parse_grade(g)
    if g not in _SYM_OF:
        raise PreconditionError(f"{g} is not a relativity grade", module="relativity")
    q = quotient(s)
    qa, qb = q.class_of[s.domain[s.idx(a)]], q.class_of[s.domain[s.idx(b)]]
    ok, perm = sym_grade(q.quotient, _SYM_OF[g], qa, qb)
    if not ok:
        return False, None
    return True, galois_e(s, s, perm.as_dict())


def witnesses_grade(s: Structure, g, a, b, pi) -> bool:
    """Does ``pi`` meet the defining conditions of relativity grade ``g`` at (a, b)?"""
    from .indiscernibility import indisc_matrix
    g = parse_grade(g)
    a, b = str(a), str(b)
    if not is_relativeness_correspondence(s, s, pi):
        return False
    pi = set(pi)
    if (a, b) not in pi:
        return False
    if g is GradeId.relBare:
        return True
    if (b, a) not in pi:
        return False
    if g is GradeId.relPair:
        return True
    ind = indisc_matrix(s)
    ia, ib = s.idx(a), s.idx(b)
    return all((x, x) in pi for i, x in enumerate(s.domain) if not ind[i, ia] and not ind[i, ib])


def single_pair_extensions(M: Structure, N: Structure, pi) -> Iterable[tuple[str, str]]:
    """Pairs outside ``pi`` whose addition keeps it a near-correspondence."""
    base = set(pi)
    for a, b in itertools.product(M.domain, N.domain):
        if (a, b) not in base and is_near_correspondence(M, N, base | {(a, b)}):
            yield (a, b)


@dataclass(frozen=True)
class LawCheck:
    law: str
    instances: int
    failures: int
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def __str__(self):
        mark = "ok" if self.passed else "FAIL"
        tail = f"  first failure: {self.detail}" if self.detail else ""
        return f"{mark:4} {self.law}: {self.instances - self.failures}/{self.instances}{tail}"


def _sub_correspondence(s: Structure, full: frozenset, rng: np.random.Generator) -> frozenset:
    """A random total, surjective subset of ``full``."""
    pairs = sorted(full)
    keep = {p for p in pairs if rng.random() < 0.5}
    for side in (0, 1):
        for e in s.domain:
            if not any(p[side] == e for p in keep):
                options = [p for p in pairs if p[side] == e]
                keep.add(options[rng.integers(len(options))])
    return frozenset(keep)


def galois_law_checks(s: Structure, max_autos: int = 50, samples: int = 20, seed: int = 0,
                      probe_uniqueness: bool | None = None) -> list[LawCheck]:
    """Check the Galois laws between quotient automorphisms and
    correspondences of ``s`` with itself.

    Uniqueness of the maximal extension is probed pair by pair, by default
    only for structures with at most four elements.
    """
    if probe_uniqueness is None:
        probe_uniqueness = len(s) <= 4
    rng = np.random.default_rng(seed)
    tallies: dict[str, list] = {}

    def record(law, ok, detail):
        t = tallies.setdefault(law, [0, 0, ""])
        t[0] += 1
        if not ok:
            t[1] += 1
            t[2] = t[2] or detail

    for pi in quotient_automorphisms(s, limit=max_autos):
        e = galois_e(s, s, pi)
        tag = " ".join(f"{k}>{v}" for k, v in pi.items())
        record("e(pi) is a relativeness correspondence", is_relativeness_correspondence(s, s, e), tag)
        record("c(e(pi)) = pi", galois_c(s, s, e) == pi, tag)
        record("e(pi) is maximal", next(iter(single_pair_extensions(s, s, e)), None) is None, tag)
        for _ in range(samples):
            sub = _sub_correspondence(s, e, rng)
            detail = str(sorted(sub))
            ok = is_near_correspondence(s, s, sub)
            record("subsets of e(pi) are near-correspondences", ok, detail)
            if not ok:
                continue
            ec = maximal_extension(s, s, sub)
            record("e(c(P)) contains P and is idempotent",
                   sub <= ec and maximal_extension(s, s, ec) == ec, detail)
            if probe_uniqueness:
                outside = [p for p in itertools.product(s.domain, repeat=2) if p not in ec]
                record("e(c(P)) is the unique maximal extension",
                       not any(is_near_correspondence(s, s, sub | {p}) for p in outside), detail)
    return [LawCheck(law, n, f, d) for law, (n, f, d) in tallies.items()]
