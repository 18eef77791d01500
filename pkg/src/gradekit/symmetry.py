"""Automorphism and isomorphism search.

The search assigns source elements in domain order and tries target elements
in domain order, so the first map found is the lexicographically least one.
Two prunings keep it fast at desk scale.

* Colour refinement run jointly on source and target. Colours are isomorphism
  invariant, so an element may only go to an element of the same colour.
* After each assignment, every relation restricted to the assigned sources
  must equal the same relation restricted to their images. Functions are
  treated as their graphs, so constants become fixed unary relations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import PreconditionError
from .grades import GradeId, parse_grade
from .indiscernibility import PairPartition
from .structure import Structure


@dataclass(frozen=True)
class Permutation:
    """A bijection given by the images of the domain, in domain order."""

    domain: tuple
    images: tuple

    @classmethod
    def from_indices(cls, s: Structure, idx: Sequence[int]) -> "Permutation":
        return cls(s.domain, tuple(s.domain[i] for i in idx))

    @classmethod
    def identity(cls, s: Structure) -> "Permutation":
        return cls(s.domain, s.domain)

    @classmethod
    def transposition(cls, s: Structure, a, b) -> "Permutation":
        a, b = str(a), str(b)
        swap = {a: b, b: a}
        return cls(s.domain, tuple(swap.get(e, e) for e in s.domain))

    def __call__(self, e) -> str:
        return self.images[self.domain.index(str(e))]

    def as_dict(self) -> dict[str, str]:
        return dict(zip(self.domain, self.images))

    def indices(self) -> np.ndarray:
        pos = {e: i for i, e in enumerate(self.domain)}
        return np.array([pos[e] for e in self.images], dtype=np.intp)

    def cycles(self) -> list[tuple[str, ...]]:
        seen, out = set(), []
        mapping = self.as_dict()
        for e in self.domain:
            if e in seen:
                continue
            cyc = [e]
            seen.add(e)
            nxt = mapping[e]
            while nxt != e:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = mapping[nxt]
            out.append(tuple(cyc))
        return out

    def __str__(self):
        moving = [c for c in self.cycles() if len(c) > 1]
        return "".join("(" + " ".join(c) + ")" for c in moving) or "id"


@dataclass(frozen=True)
class SearchConstraint:
    """Pinned images, and optionally a pair (a, b) outside which every element is fixed."""

    required: Mapping[str, str] = field(default_factory=dict)
    fix_outside: tuple | None = None

    def __post_init__(self):
        req = {str(k): str(v) for k, v in dict(self.required).items()}
        object.__setattr__(self, "required", req)
        if self.fix_outside is not None:
            object.__setattr__(self, "fix_outside", tuple(str(x) for x in self.fix_outside))
        if len(set(req.values())) != len(req):
            raise PreconditionError("required images are not injective", module="symmetry")

    def pins(self, s: Structure) -> dict[int, int] | None:
        """Pinned index images, or None if the constraint cannot be met."""
        pins = {s.idx(k): s.idx(v) for k, v in self.required.items()}
        if self.fix_outside is not None:
            keep = {s.idx(x) for x in self.fix_outside}
            for i in range(len(s)):
                if i not in keep:
                    if pins.get(i, i) != i:
                        return None
                    pins[i] = i
        if len(set(pins.values())) != len(pins):
            return None
        return pins

    def satisfied_by(self, perm: Permutation) -> bool:
        m = perm.as_dict()
        if any(m[k] != v for k, v in self.required.items()):
            return False
        if self.fix_outside is not None:
            return all(m[e] == e for e in perm.domain if e not in self.fix_outside)
        return True


# ---------------------------------------------------------------------------
# relation encoding and colour refinement


def _relation_arrays(s: Structure) -> list[np.ndarray]:
    arrays = [s.rel_arrays[name] for name, _ in s.signature.predicates]
    n = len(s)
    for name, k in s.signature.functions:
        table = s.fun_arrays[name]
        graph = np.asarray(table)[..., None] == np.arange(n).reshape((1,) * k + (n,))
        arrays.append(graph)
    return arrays


def _pair_projections(arr: np.ndarray) -> list[np.ndarray]:
    """Counts of tuples with element e at position i and f at position j."""
    r = arr.ndim
    out = []
    for i, j in itertools.product(range(r), repeat=2):
        if i == j:
            axes = tuple(k for k in range(r) if k != i)
            out.append(np.diag(arr.sum(axis=axes) if axes else arr.astype(int)))
        else:
            axes = tuple(k for k in range(r) if k not in (i, j))
            m = arr.sum(axis=axes) if axes else arr.astype(int)
            out.append(m if i < j else m.T)
    diag_idx = (np.arange(arr.shape[0]),) * r
    out.append(np.diag(arr[diag_idx].astype(int)))
    return out


def _refine(structures: Sequence[Structure]) -> list[np.ndarray]:
    """Joint stable colouring; returns one colour array per structure."""
    mats = [[p for a in _relation_arrays(s) for p in _pair_projections(a)] for s in structures]
    colours = [np.zeros(len(s), dtype=np.intp) for s in structures]
    count = 1
    while True:
        keys = []
        for s, ms, col in zip(structures, mats, colours):
            for e in range(len(s)):
                sig = [int(col[e])]
                for m in ms:
                    row = m[e]
                    sig.append(tuple(sorted(
                        (int(row[f]), int(col[f])) for f in range(len(s)) if row[f])))
                keys.append(tuple(sig))
        table = {k: i for i, k in enumerate(sorted(set(keys)))}
        flat = np.array([table[k] for k in keys], dtype=np.intp)
        new, start = [], 0
        for s in structures:
            new.append(flat[start:start + len(s)])
            start += len(s)
        colours = new
        if len(table) == count:
            return colours
        count = len(table)


# ---------------------------------------------------------------------------
# search


def _search(src: Structure, tgt: Structure, pins: Mapping[int, int]) -> Iterator[tuple[int, ...]]:
    n = len(src)
    if n != len(tgt) or src.signature != tgt.signature:
        return
    col_s, col_t = _refine([src, tgt]) if src is not tgt else (_refine([src]) * 2)
    if sorted(col_s.tolist()) != sorted(col_t.tolist()):
        return
    for i, j in pins.items():
        if col_s[i] != col_t[j]:
            return
    rs, rt = _relation_arrays(src), _relation_arrays(tgt)
    image = [-1] * n
    used = [False] * n

    def consistent(k: int) -> bool:
        dom = np.arange(k + 1)
        img = np.array(image[: k + 1])
        for a, b in zip(rs, rt):
            if not np.array_equal(a[np.ix_(*([dom] * a.ndim))], b[np.ix_(*([img] * b.ndim))]):
                return False
        return True

    def extend(k: int):
        if k == n:
            yield tuple(image)
            return
        options = [pins[k]] if k in pins else range(n)
        for j in options:
            if used[j] or col_t[j] != col_s[k]:
                continue
            if k not in pins and j in pinned_targets:
                continue
            image[k] = j
            used[j] = True
            if consistent(k):
                yield from extend(k + 1)
            used[j] = False
            image[k] = -1

    pinned_targets = set(pins.values())
    yield from extend(0)


def automorphisms(s: Structure, constraint: SearchConstraint | None = None,
                  limit: int | None = None) -> Iterator[Permutation]:
    """All automorphisms satisfying ``constraint``, in lexicographic order."""
    pins = {} if constraint is None else constraint.pins(s)
    if pins is None:
        return
    gen = _search(s, s, pins)
    for idx in itertools.islice(gen, limit):
        yield Permutation.from_indices(s, idx)


def find_automorphism(s: Structure, constraint: SearchConstraint | None = None) -> Permutation | None:
    return next(automorphisms(s, constraint, 1), None)


def find_isomorphism(src: Structure, tgt: Structure,
                     required: Mapping | None = None) -> dict[str, str] | None:
    """The lexicographically least isomorphism from ``src`` to ``tgt``, as a map."""
    pins = {src.idx(k): tgt.idx(v) for k, v in (required or {}).items()}
    idx = next(_search(src, tgt, pins), None)
    if idx is None:
        return None
    return {src.domain[i]: tgt.domain[j] for i, j in enumerate(idx)}


def isomorphisms(src: Structure, tgt: Structure, limit: int | None = None) -> Iterator[dict[str, str]]:
    for idx in itertools.islice(_search(src, tgt, {}), limit):
        yield {src.domain[i]: tgt.domain[j] for i, j in enumerate(idx)}


def is_isomorphism(src: Structure, tgt: Structure, mapping: Mapping[str, str]) -> bool:
    """Check the two isomorphism clauses for a map between domains."""
    if len(src) != len(tgt) or src.signature != tgt.signature:
        return False
    try:
        p = np.array([tgt.idx(mapping[e]) for e in src.domain], dtype=np.intp)
    except KeyError:
        return False
    if len(set(p.tolist())) != len(p):
        return False
    for name, k in src.signature.predicates:
        if not np.array_equal(src.rel_arrays[name], tgt.rel_arrays[name][np.ix_(*([p] * k))]):
            return False
    for name, k in src.signature.functions:
        fs, ft = src.fun_arrays[name], tgt.fun_arrays[name]
        lhs = p[fs]
        rhs = ft[np.ix_(*([p] * k))] if k else ft
        if not np.array_equal(lhs, rhs):
            return False
    return True


def is_automorphism(s: Structure, perm: Permutation | Mapping[str, str]) -> bool:
    mapping = perm.as_dict() if isinstance(perm, Permutation) else {str(k): str(v) for k, v in perm.items()}
    if set(mapping) != set(s.domain):
        return False
    return is_isomorphism(s, s, mapping)


# ---------------------------------------------------------------------------
# grades


def sym_grade(s: Structure, g, a, b) -> tuple[bool, Permutation | None]:
    """Decide a symmetry grade; the witness is the least automorphism found."""
    g = parse_grade(g)
    a, b = s.domain[s.idx(a)], s.domain[s.idx(b)]
    if g is GradeId.symTotal:
        perm = Permutation.transposition(s, a, b)
        return (True, perm) if is_automorphism(s, perm) else (False, None)
    if g is GradeId.symPair:
        c = SearchConstraint({a: b, b: a})
    elif g is GradeId.symBare:
        c = SearchConstraint({a: b})
    else:
        raise PreconditionError(f"{g} is not a symmetry grade", module="symmetry")
    key = ("sym", g.value, a, b)
    if key not in s._memo:
        s._memo[key] = find_automorphism(s, c)
    w = s._memo[key]
    return (w is not None, w)


def orbits(s: Structure) -> PairPartition:
    """Orbits of the automorphism group, by merging the cycles of witnesses."""
    if "orbits" in s._memo:
        return s._memo["orbits"]
    parent = list(range(len(s)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in itertools.combinations(range(len(s)), 2):
        if find(i) == find(j):
            continue
        w = find_automorphism(s, SearchConstraint({s.domain[i]: s.domain[j]}))
        if w is None:
            continue
        for cyc in w.cycles():
            for e in cyc[1:]:
                ri, rj = find(s.idx(cyc[0])), find(s.idx(e))
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    classes: dict[int, list[str]] = {}
    for i, e in enumerate(s.domain):
        classes.setdefault(find(i), []).append(e)
    part = PairPartition.from_classes(s.domain, classes.values())
    s._memo["orbits"] = part
    return part
