"""Signatures and finite structures.

Elements are opaque string identifiers. Their declaration order is the
canonical order used by every enumeration in the package, so all outputs are
deterministic. Constants are 0-place functions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import PreconditionError, StructureError

MAX_RANDOM_SIZE = 12


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.location}: {self.message}"


@dataclass(frozen=True)
class Signature:
    """Predicate and function symbols with their arities."""

    predicates: tuple[tuple[str, int], ...] = ()
    functions: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "predicates", tuple((str(n), int(a)) for n, a in self.predicates))
        object.__setattr__(self, "functions", tuple((str(n), int(a)) for n, a in self.functions))
        problems = []
        seen = set()
        for name, arity in self.predicates + self.functions:
            if name in seen:
                problems.append(Diagnostic("error", f"symbol {name}", "declared more than once"))
            seen.add(name)
        for name, arity in self.predicates:
            if arity < 1:
                problems.append(Diagnostic("error", f"symbol {name}", "predicate arity must be at least 1"))
        for name, arity in self.functions:
            if arity < 0:
                problems.append(Diagnostic("error", f"symbol {name}", "negative arity"))
        if problems:
            raise StructureError(problems)

    @property
    def relational(self) -> bool:
        return not self.functions

    @property
    def constants(self) -> tuple[str, ...]:
        return tuple(n for n, a in self.functions if a == 0)

    @cached_property
    def _arities(self) -> dict[str, int]:
        return dict(self.predicates + self.functions)

    def arity(self, name: str) -> int:
        return self._arities[name]

    def is_predicate(self, name: str) -> bool:
        return name in dict(self.predicates)

    def is_function(self, name: str) -> bool:
        return name in dict(self.functions)

    def __contains__(self, name: str) -> bool:
        return name in self._arities


Element = Union[str, int]


def _el(x: Element) -> str:
    return str(x)


@dataclass(frozen=True, eq=False)
class Structure:
    """A finite structure over a signature.

    ``relations`` maps each predicate to a frozenset of element tuples and
    ``functions`` maps each function symbol to a dict from argument tuples to
    values. Use :func:`make_structure` to build a validated instance.
    """

    signature: Signature
    domain: tuple[str, ...]
    relations: Mapping[str, frozenset]
    functions: Mapping[str, Mapping[tuple, str]]
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(_el(x) for x in self.domain))
        rels = {}
        for name, _ in self.signature.predicates:
            rels[name] = frozenset(tuple(_el(x) for x in t) for t in self.relations.get(name, ()))
        for name, tuples in self.relations.items():
            if name not in rels:
                rels[name] = frozenset(tuple(_el(x) for x in t) for t in tuples)
        funs = {}
        for name, table in self.functions.items():
            funs[name] = MappingProxyType(
                {tuple(_el(x) for x in args): _el(v) for args, v in dict(table).items()}
            )
        object.__setattr__(self, "relations", MappingProxyType(rels))
        object.__setattr__(self, "functions", MappingProxyType(funs))

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return (
            self.signature == other.signature
            and self.domain == other.domain
            and dict(self.relations) == dict(other.relations)
            and {k: dict(v) for k, v in self.functions.items()}
            == {k: dict(v) for k, v in other.functions.items()}
        )

    def __hash__(self):
        return hash(self._key)

    @cached_property
    def _key(self):
        return (
            self.signature,
            self.domain,
            tuple(sorted(self.relations.items())),
            tuple(sorted((k, frozenset(v.items())) for k, v in self.functions.items())),
        )

    def __len__(self) -> int:
        return len(self.domain)

    def __repr__(self) -> str:
        return f"Structure(|domain|={len(self.domain)}, signature={self.signature})"

    @cached_property
    def index(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.domain)}

    def idx(self, element: Element) -> int:
        try:
            return self.index[_el(element)]
        except KeyError:
            raise PreconditionError(f"{element!r} is not in the domain", module="model-core") from None

    @cached_property
    def rel_arrays(self) -> dict[str, np.ndarray]:
        """Boolean membership arrays of shape (n,)*arity, one per predicate."""
        n = len(self.domain)
        out = {}
        for name, arity in self.signature.predicates:
            arr = np.zeros((n,) * arity, dtype=bool)
            for t in self.relations[name]:
                arr[tuple(self.index[x] for x in t)] = True
            out[name] = arr
        return out

    @cached_property
    def fun_arrays(self) -> dict[str, np.ndarray]:
        """Integer value tables of shape (n,)*arity, one per function symbol."""
        n = len(self.domain)
        out = {}
        for name, arity in self.signature.functions:
            arr = np.zeros((n,) * arity, dtype=np.intp)
            table = self.functions[name]
            for args in itertools.product(range(n), repeat=arity):
                arr[args] = self.index[table[tuple(self.domain[i] for i in args)]]
            out[name] = arr
        return out

    def holds(self, pred: str, *args: Element) -> bool:
        return tuple(_el(a) for a in args) in self.relations[pred]

    def apply(self, func: str, *args: Element) -> str:
        return self.functions[func][tuple(_el(a) for a in args)]


def validate_structure(s: Structure) -> list[Diagnostic]:
    """Return all invariant violations of ``s``; an empty list means valid."""
    diags: list[Diagnostic] = []
    sig = s.signature
    dom = set(s.domain)
    if not s.domain:
        diags.append(Diagnostic("error", "domain", "empty domain"))
    if len(dom) != len(s.domain):
        dupes = sorted({e for e in s.domain if s.domain.count(e) > 1})
        diags.append(Diagnostic("error", "domain", f"duplicate elements {dupes}"))
    preds = dict(sig.predicates)
    for name, tuples in s.relations.items():
        if name not in preds:
            diags.append(Diagnostic("error", f"relation {name}", "unknown predicate symbol"))
            continue
        for t in sorted(tuples):
            if len(t) != preds[name]:
                diags.append(Diagnostic("error", f"relation {name}", f"tuple {t} has wrong arity"))
            bad = [x for x in t if x not in dom]
            if bad:
                diags.append(Diagnostic("error", f"relation {name}", f"tuple {t} leaves the domain at {bad}"))
    funs = dict(sig.functions)
    for name in s.functions:
        if name not in funs:
            diags.append(Diagnostic("error", f"function {name}", "unknown function symbol"))
    for name, arity in sig.functions:
        table = s.functions.get(name, {})
        for args, value in table.items():
            if len(args) != arity:
                diags.append(Diagnostic("error", f"function {name}", f"input {args} has wrong arity"))
            elif any(x not in dom for x in args):
                diags.append(Diagnostic("error", f"function {name}", f"input {args} leaves the domain"))
            if value not in dom:
                diags.append(Diagnostic("error", f"function {name}", f"value {value!r} leaves the domain"))
        missing = [args for args in itertools.product(s.domain, repeat=arity) if args not in table]
        if missing:
            shown = ", ".join(str(m) for m in missing[:3])
            more = "" if len(missing) <= 3 else f" and {len(missing) - 3} more"
            diags.append(
                Diagnostic("error", f"function {name}", f"partial function: no value for {shown}{more}")
            )
    return diags


def make_structure(
    signature: Signature,
    domain: Sequence[Element],
    relations: Mapping[str, Iterable[Sequence[Element]]] | None = None,
    functions: Mapping[str, Mapping] | None = None,
) -> Structure:
    """Build a structure and raise :class:`StructureError` if it is invalid.

    Function tables may key unary functions by bare elements and constants by
    the empty tuple or by ``None``.
    """
    rels = {name: [tuple(t) if isinstance(t, (tuple, list)) else (t,) for t in ts]
            for name, ts in (relations or {}).items()}
    funs = {}
    for name, table in (functions or {}).items():
        if not isinstance(table, Mapping):
            table = {(): table}
        fixed = {}
        for args, value in table.items():
            if args is None:
                args = ()
            elif not isinstance(args, tuple):
                args = (args,)
            fixed[args] = value
        funs[name] = fixed
    s = Structure(signature, tuple(domain), rels, funs)
    diags = validate_structure(s)
    if diags:
        raise StructureError(diags)
    return s


def symmetric_closure(pairs: Iterable[Sequence[Element]]) -> set[tuple[str, str]]:
    out = set()
    for a, b in pairs:
        out.add((_el(a), _el(b)))
        out.add((_el(b), _el(a)))
    return out


@dataclass(frozen=True)
class RandomSpec:
    """Signature plus inclusion densities for :func:`random_structure`.

    ``density`` is either one probability for every predicate or a mapping
    from predicate name to probability (missing names use ``default``).
    """

    signature: Signature
    density: Union[float, Mapping[str, float]] = 0.5
    default: float = 0.5

    def density_of(self, pred: str) -> float:
        if isinstance(self.density, Mapping):
            return float(self.density.get(pred, self.default))
        return float(self.density)


def random_structure(seed: int, size: int, spec: RandomSpec) -> Structure:
    """Deterministic random structure on elements ``1..size``.

    Every predicate tuple is included independently with its density; every
    function value is drawn uniformly.
    """
    if not 1 <= size <= MAX_RANDOM_SIZE:
        raise PreconditionError(f"size must be in 1..{MAX_RANDOM_SIZE}, got {size}", module="model-core")
    rng = np.random.default_rng(seed)
    domain = tuple(str(i) for i in range(1, size + 1))
    rels = {}
    for name, arity in spec.signature.predicates:
        p = spec.density_of(name)
        tuples = list(itertools.product(domain, repeat=arity))
        draws = rng.random(len(tuples))
        rels[name] = [t for t, u in zip(tuples, draws) if u < p]
    funs = {}
    for name, arity in spec.signature.functions:
        tuples = list(itertools.product(domain, repeat=arity))
        values = rng.integers(0, size, len(tuples))
        funs[name] = {t: domain[v] for t, v in zip(tuples, values)}
    return make_structure(spec.signature, domain, rels, funs)
