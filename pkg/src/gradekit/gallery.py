"""The finite counterexample structures used throughout the package.

Undirected graphs are stored as symmetric binary relations.

    A   two isolated vertices
    B   a single edge 1-2
    C   the path 1-2-3
    D   the directed 4-cycle 1->2->3->4->1
    F   {1,2} with f(1) = f(2) = 2 and no predicates
    G   a 6-cycle whose edges alternate between S (1-2, 3-4, 5-6) and Dt (2-3, 4-5, 6-1)
    I   nine vertices with edges 1-2, 4-5, 7-8, 8-9
    Ac  A with a constant naming 1
"""
from __future__ import annotations

from .errors import PreconditionError
from .structure import Signature, Structure, make_structure, symmetric_closure

GRAPH = Signature(predicates=(("R", 2),))


def _graph(n: int, edges=(), arcs=()) -> Structure:
    rel = symmetric_closure(edges) | {(str(a), str(b)) for a, b in arcs}
    return make_structure(GRAPH, range(1, n + 1), {"R": rel})


def _build(name: str) -> Structure:
    if name == "A":
        return _graph(2)
    if name == "B":
        return _graph(2, edges=[(1, 2)])
    if name == "C":
        return _graph(3, edges=[(1, 2), (2, 3)])
    if name == "D":
        return _graph(4, arcs=[(1, 2), (2, 3), (3, 4), (4, 1)])
    if name == "F":
        sig = Signature(functions=(("f", 1),))
        return make_structure(sig, [1, 2], functions={"f": {1: 2, 2: 2}})
    if name == "G":
        sig = Signature(predicates=(("S", 2), ("Dt", 2)))
        solid = symmetric_closure([(1, 2), (3, 4), (5, 6)])
        dotted = symmetric_closure([(2, 3), (4, 5), (6, 1)])
        return make_structure(sig, range(1, 7), {"S": solid, "Dt": dotted})
    if name == "I":
        return _graph(9, edges=[(1, 2), (4, 5), (7, 8), (8, 9)])
    if name == "Ac":
        sig = Signature(predicates=(("R", 2),), functions=(("c", 0),))
        return make_structure(sig, [1, 2], {"R": []}, {"c": 1})
    raise PreconditionError(f"unknown gallery structure {name!r}; choose from {', '.join(NAMES)}",
                            module="model-core")


NAMES = ("A", "B", "C", "D", "F", "G", "I", "Ac")
_CACHE: dict[str, Structure] = {}


def gallery(name: str) -> Structure:
    if name not in _CACHE:
        _CACHE[name] = _build(name)
    return _CACHE[name]
