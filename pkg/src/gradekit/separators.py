"""Depth-bounded formula types and explicit separating formulas.

Two k-tuples satisfy the same formulas of quantifier depth at most d exactly
when the d-round refinement below gives them the same id. Depth 0 compares
atomic formulas (over terms of bounded nesting when functions are present).
Depth d+1 compares the sets of depth-d ids of all one-element extensions.

When ids differ, ``separate`` turns the disagreement into a formula that is
true at the first tuple and false at the second, following the same recursion:
some extension of one tuple has a type that no extension of the other has, so
an existential over the conjunction of the child separators does the job.
"""
from __future__ import annotations

from functools import cached_property
from typing import Sequence

import numpy as np

from .formula import Exists, Formula, Var, conj, negate, substitute
from .semantics import atoms_over, evaluate, extension
from .structure import Structure


def _row_ids(rows: np.ndarray) -> np.ndarray:
    """Dense ids for the distinct rows of a 2-d array, in first-seen order."""
    rows = np.ascontiguousarray(rows)
    if rows.shape[1] == 0:
        return np.zeros(rows.shape[0], dtype=np.intp)
    flat = rows.view(np.dtype((np.void, rows.dtype.itemsize * rows.shape[1]))).ravel()
    _, first, inverse = np.unique(flat, return_index=True, return_inverse=True)
    # renumber so ids follow the order in which rows first appear
    order = np.argsort(np.argsort(first))
    return order[inverse.ravel()].astype(np.intp)


def _set_rows(child: np.ndarray) -> np.ndarray:
    """Rows of ``child`` as canonical sets: sorted, repeats replaced by -1."""
    rows = np.sort(child, axis=1)
    dup = np.zeros_like(rows, dtype=bool)
    dup[:, 1:] = rows[:, 1:] == rows[:, :-1]
    rows = np.where(dup, -1, rows)
    return np.sort(rows, axis=1)


class TypeTable:
    """Memoized type ids of tuples of ``s`` in one language."""

    def __init__(self, s: Structure, identity: bool, term_depth: int | None = None):
        self.s = s
        self.identity = identity
        self.term_depth = (0 if s.signature.relational else 1) if term_depth is None else term_depth
        self._ids: dict[tuple[int, int], np.ndarray] = {}
        self._atoms: dict[int, tuple[list[Formula], np.ndarray]] = {}

    @cached_property
    def n(self) -> int:
        return len(self.s)

    def atoms(self, length: int):
        """Atomic formulas over ``v1..v<length>`` and their truth table
        (one row per atom, one column per tuple in row-major order)."""
        if length not in self._atoms:
            names = [f"v{i + 1}" for i in range(length)]
            atoms = atoms_over(self.s.signature, names, self.identity, self.term_depth)
            if atoms:
                table = np.stack([extension(self.s, a, names).reshape(-1) for a in atoms])
            else:
                table = np.zeros((0, self.n ** length), dtype=bool)
            self._atoms[length] = (atoms, table)
        return self._atoms[length]

    def ids(self, length: int, depth: int) -> np.ndarray:
        """Int array of shape (n,)*length holding depth-``depth`` type ids."""
        key = (length, depth)
        if key not in self._ids:
            n = self.n
            if depth == 0:
                _, table = self.atoms(length)
                flat = _row_ids(np.packbits(table.T, axis=1))
            else:
                child = self.ids(length + 1, depth - 1).reshape(n ** length, n)
                flat = _row_ids(_set_rows(child))
            self._ids[key] = np.asarray(flat, dtype=np.intp).reshape((n,) * length)
        return self._ids[key]

    def same(self, u: Sequence[int], v: Sequence[int], depth: int) -> bool:
        ids = self.ids(len(u), depth)
        return ids[tuple(u)] == ids[tuple(v)]

    def first_difference(self, u: Sequence[int], v: Sequence[int], max_depth: int) -> int | None:
        for d in range(max_depth + 1):
            if not self.same(u, v, d):
                return d
        return None

    # ------------------------------------------------------------------

    def separate(self, u: Sequence[int], v: Sequence[int], variables: Sequence[str],
                 max_depth: int) -> Formula | None:
        """A formula over ``variables`` true at ``u`` and false at ``v`` with
        the least possible quantifier depth, or None if none exists within
        ``max_depth``. ``u`` and ``v`` are tuples of domain indices."""
        u, v = tuple(int(i) for i in u), tuple(int(i) for i in v)
        d = self.first_difference(u, v, max_depth)
        if d is None:
            return None
        self._free = len(variables)
        phi = self._build(u, v, tuple(variables), d)
        assert self._separates(phi, u, v, variables)
        return phi

    def _assign(self, names, tup):
        return {name: self.s.domain[i] for name, i in zip(names, tup)}

    def _separates(self, phi, u, v, names) -> bool:
        return evaluate(self.s, phi, self._assign(names, u)) and not evaluate(
            self.s, phi, self._assign(names, v))

    def _build(self, u, v, names, depth) -> Formula:
        d = self.first_difference(u, v, depth)
        if d == 0:
            atoms, table = self.atoms(len(u))
            iu = np.ravel_multi_index(u, (self.n,) * len(u))
            iv = np.ravel_multi_index(v, (self.n,) * len(v))
            hit = int(np.flatnonzero(table[:, iu] != table[:, iv])[0])
            generic = {f"v{i + 1}": Var(name) for i, name in enumerate(names)}
            phi = substitute(atoms[hit], generic)
            return phi if table[hit, iu] else negate(phi)
        z = f"z{len(names) - self._free + 1}"
        while z in names:
            z += "'"
        child = self.ids(len(u) + 1, d - 1)
        kids_u = [int(child[u + (c,)]) for c in range(self.n)]
        kids_v = [int(child[v + (c,)]) for c in range(self.n)]
        lonely = [c for c in range(self.n) if kids_u[c] not in kids_v]
        if lonely:
            return self._exists(u, v, lonely[0], kids_v, names, z, d)
        lonely = [c for c in range(self.n) if kids_v[c] not in kids_u]
        return negate(self._exists(v, u, lonely[0], kids_u, names, z, d))

    def _exists(self, u, v, c, kids_v, names, z, d) -> Formula:
        reps: dict[int, int] = {}
        for c2, t in enumerate(kids_v):
            reps.setdefault(t, c2)
        inner = names + (z,)
        parts = [self._build(u + (c,), v + (c2,), inner, d - 1) for c2 in reps.values()]
        parts = list(dict.fromkeys(parts))
        # drop conjuncts that are not needed to keep v on the false side
        i = 0
        while i < len(parts) and len(parts) > 1:
            trial = parts[:i] + parts[i + 1:]
            if not evaluate(self.s, Exists(z, conj(trial)), self._assign(names, v)):
                parts = trial
            else:
                i += 1
        return Exists(z, conj(parts))


def type_table(s: Structure, identity: bool, term_depth: int | None = None) -> TypeTable:
    """Shared per-structure table (cached on the structure)."""
    key = ("types", identity, term_depth)
    if key not in s._memo:
        s._memo[key] = TypeTable(s, identity, term_depth)
    return s._memo[key]
