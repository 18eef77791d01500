"""First-order formula syntax trees.

Formulas are immutable and compare structurally. ``str(phi)`` prints them in
the concrete grammar accepted by :func:`gradekit.parse_formula`, and printing
then reparsing gives back an equal tree.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping, Union


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Func:
    """Function application; constants are applications with no arguments."""

    name: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.name
        return f"{self.name}({','.join(str(a) for a in self.args)})"


Term = Union[Var, Func]


class Formula:
    __slots__ = ()

    def __str__(self):
        return format_formula(self)

    # operator sugar for building formulas in code
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __rshift__(self, other):
        return Implies(self, other)

    @property
    def identity_free(self) -> bool:
        return not uses_identity(self)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    pass


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    pred: str
    args: tuple


@dataclass(frozen=True, repr=False)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True, repr=False)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, repr=False)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True, repr=False)
class Exists(Formula):
    var: str
    body: Formula


for _cls in (Top, Bottom, Atom, Eq, Not, And, Or, Implies, Iff, Forall, Exists):
    _cls.__repr__ = lambda self: f"<{type(self).__name__} {format_formula(self)}>"

BINARY = (And, Or, Implies, Iff)
QUANTIFIERS = (Forall, Exists)
_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYM = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def atom(pred: str, *args: Union[str, Term]) -> Atom:
    return Atom(pred, tuple(Var(a) if isinstance(a, str) else a for a in args))


def negate(phi: Formula) -> Formula:
    """Negation that strips a leading negation instead of doubling it."""
    return phi.body if isinstance(phi, Not) else Not(phi)


def conj(formulas: Iterable[Formula]) -> Formula:
    items = list(formulas)
    return reduce(And, items) if items else Top()


def disj(formulas: Iterable[Formula]) -> Formula:
    items = list(formulas)
    return reduce(Or, items) if items else Bottom()


def forall(variables: Iterable[str], body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = Forall(v, body)
    return body


def exists(variables: Iterable[str], body: Formula) -> Formula:
    for v in reversed(list(variables)):
        body = Exists(v, body)
    return body


def _fmt_term(t: Term) -> str:
    return str(t)


def format_formula(phi: Formula) -> str:
    return _fmt(phi)


def _wrap_operand(phi: Formula) -> str:
    # quantifiers extend maximally right, so they are bracketed as operands
    if isinstance(phi, QUANTIFIERS):
        return "(" + _fmt(phi) + ")"
    return _fmt(phi)


def _fmt(phi: Formula) -> str:
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bottom):
        return "false"
    if isinstance(phi, Atom):
        return f"{phi.pred}({','.join(_fmt_term(a) for a in phi.args)})"
    if isinstance(phi, Eq):
        return f"{_fmt_term(phi.left)} = {_fmt_term(phi.right)}"
    if isinstance(phi, Not):
        body = phi.body
        if isinstance(body, BINARY) or isinstance(body, Eq):
            return "!(" + _fmt(body) + ")"
        return "!" + _wrap_operand(body)
    if isinstance(phi, BINARY):
        op = type(phi)
        prec = _PREC[op]

        def side(child, is_left):
            if isinstance(child, BINARY):
                cp = _PREC[type(child)]
                # & | <-> associate left, -> associates right
                same_bad = (type(child) is op) and (is_left == (op is Implies))
                if cp < prec or same_bad:
                    return "(" + _fmt(child) + ")"
                return _fmt(child)
            return _wrap_operand(child)

        return f"{side(phi.left, True)} {_SYM[op]} {side(phi.right, False)}"
    if isinstance(phi, Forall):
        return f"forall {phi.var}. {_fmt(phi.body)}"
    if isinstance(phi, Exists):
        return f"exists {phi.var}. {_fmt(phi.body)}"
    raise TypeError(f"not a formula: {phi!r}")


def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    out: set[str] = set()
    for a in t.args:
        out |= term_vars(a)
    return out


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, (Top, Bottom)):
        return frozenset()
    if isinstance(phi, Atom):
        return frozenset().union(*(term_vars(a) for a in phi.args)) if phi.args else frozenset()
    if isinstance(phi, Eq):
        return frozenset(term_vars(phi.left) | term_vars(phi.right))
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, BINARY):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, QUANTIFIERS):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def uses_identity(phi: Formula) -> bool:
    if isinstance(phi, Eq):
        return True
    if isinstance(phi, Not) or isinstance(phi, QUANTIFIERS):
        return uses_identity(phi.body)
    if isinstance(phi, BINARY):
        return uses_identity(phi.left) or uses_identity(phi.right)
    return False


def quantifier_depth(phi: Formula) -> int:
    if isinstance(phi, Not):
        return quantifier_depth(phi.body)
    if isinstance(phi, BINARY):
        return max(quantifier_depth(phi.left), quantifier_depth(phi.right))
    if isinstance(phi, QUANTIFIERS):
        return 1 + quantifier_depth(phi.body)
    return 0


def connective_count(phi: Formula) -> int:
    if isinstance(phi, Not):
        return 1 + connective_count(phi.body)
    if isinstance(phi, BINARY):
        return 1 + connective_count(phi.left) + connective_count(phi.right)
    if isinstance(phi, QUANTIFIERS):
        return connective_count(phi.body)
    return 0


def symbols(phi: Formula) -> set[str]:
    """Predicate and function names occurring in ``phi``."""
    out: set[str] = set()

    def term(t):
        if isinstance(t, Func):
            out.add(t.name)
            for a in t.args:
                term(a)

    def walk(f):
        if isinstance(f, Atom):
            out.add(f.pred)
            for a in f.args:
                term(a)
        elif isinstance(f, Eq):
            term(f.left)
            term(f.right)
        elif isinstance(f, Not) or isinstance(f, QUANTIFIERS):
            walk(f.body)
        elif isinstance(f, BINARY):
            walk(f.left)
            walk(f.right)

    walk(phi)
    return out


def _all_names(phi: Formula) -> set[str]:
    names = set(free_vars(phi))
    if isinstance(phi, QUANTIFIERS):
        names.add(phi.var)
        names |= _all_names(phi.body)
    elif isinstance(phi, Not):
        names |= _all_names(phi.body)
    elif isinstance(phi, BINARY):
        names |= _all_names(phi.left) | _all_names(phi.right)
    return names


def subst_term(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    return Func(t.name, tuple(subst_term(a, mapping) for a in t.args))


def substitute(phi: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Simultaneous capture-avoiding substitution of terms for free variables."""
    mapping = {k: (Var(v) if isinstance(v, str) else v) for k, v in mapping.items()}
    if isinstance(phi, (Top, Bottom)):
        return phi
    if isinstance(phi, Atom):
        return Atom(phi.pred, tuple(subst_term(a, mapping) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(subst_term(phi.left, mapping), subst_term(phi.right, mapping))
    if isinstance(phi, Not):
        return Not(substitute(phi.body, mapping))
    if isinstance(phi, BINARY):
        return type(phi)(substitute(phi.left, mapping), substitute(phi.right, mapping))
    if isinstance(phi, QUANTIFIERS):
        inner = {k: v for k, v in mapping.items() if k != phi.var}
        if not inner:
            return phi
        incoming: set[str] = set()
        for k, t in inner.items():
            if k in free_vars(phi.body):
                incoming |= term_vars(t)
        var, body = phi.var, phi.body
        if var in incoming:
            taken = incoming | _all_names(body) | set(inner)
            fresh = next(f"{var}_{i}" for i in itertools.count(1) if f"{var}_{i}" not in taken)
            body = substitute(body, {var: Var(fresh)})
            var = fresh
        return type(phi)(var, substitute(body, inner))
    raise TypeError(f"not a formula: {phi!r}")


def canonical(phi: Formula) -> Formula:
    """Rename bound variables to ``_1, _2, ...`` by depth of binding."""

    def walk(f, env, depth):
        if isinstance(f, (Top, Bottom)):
            return f
        if isinstance(f, Atom):
            return Atom(f.pred, tuple(subst_term(a, env) for a in f.args))
        if isinstance(f, Eq):
            return Eq(subst_term(f.left, env), subst_term(f.right, env))
        if isinstance(f, Not):
            return Not(walk(f.body, env, depth))
        if isinstance(f, BINARY):
            return type(f)(walk(f.left, env, depth), walk(f.right, env, depth))
        name = f"_{depth + 1}"
        return type(f)(name, walk(f.body, {**env, f.var: Var(name)}, depth + 1))

    return walk(phi, {}, 0)


def alpha_equal(phi: Formula, psi: Formula) -> bool:
    return canonical(phi) == canonical(psi)
