"""Truth of formulas in finite structures, plus formula generators.

Evaluation is a direct recursion over the syntax tree. Each subformula yields
a boolean array whose axes are the variables quantified so far, so one pass
answers a quantifier over the whole domain at once. Variables bound at nesting
depth ``d`` live on axis ``-(d + 1)`` which keeps numpy broadcasting aligned.
"""
from __future__ import annotations

import itertools
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import FormulaOverflowError, PreconditionError, UnboundVariableError
from .formula import (
    BINARY, And, Atom, Bottom, Eq, Exists, Forall, Formula, Func, Iff, Implies, Not, Or,
    Top, Var, connective_count, free_vars, quantifier_depth,
)
from .structure import Signature, Structure

ENUMERATION_CAP = 200_000


def _term(s: Structure, t, env):
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariableError(f"variable {t.name} has no value") from None
    table = s.fun_arrays[t.name]
    if not t.args:
        return table[()]
    return table[tuple(_term(s, a, env) for a in t.args)]


def _eval(s: Structure, phi: Formula, env, depth: int):
    if isinstance(phi, Atom):
        return s.rel_arrays[phi.pred][tuple(_term(s, a, env) for a in phi.args)]
    if isinstance(phi, Eq):
        return np.equal(_term(s, phi.left, env), _term(s, phi.right, env))
    if isinstance(phi, Top):
        return np.True_
    if isinstance(phi, Bottom):
        return np.False_
    if isinstance(phi, Not):
        return np.logical_not(_eval(s, phi.body, env, depth))
    if isinstance(phi, BINARY):
        left = _eval(s, phi.left, env, depth)
        right = _eval(s, phi.right, env, depth)
        if isinstance(phi, And):
            return left & right
        if isinstance(phi, Or):
            return left | right
        if isinstance(phi, Implies):
            return ~left | right
        return left == right
    if isinstance(phi, (Forall, Exists)):
        axis_var = np.arange(len(s)).reshape((len(s),) + (1,) * depth)
        body = np.asarray(_eval(s, phi.body, {**env, phi.var: axis_var}, depth + 1))
        if body.ndim < depth + 1:
            return body
        return body.all(axis=0) if isinstance(phi, Forall) else body.any(axis=0)
    raise TypeError(f"not a formula: {phi!r}")


def evaluate(s: Structure, phi: Formula, assignment: Mapping[str, object] | None = None) -> bool:
    """Truth value of ``phi`` in ``s`` under ``assignment`` (variable -> element)."""
    assignment = assignment or {}
    missing = free_vars(phi) - set(assignment)
    if missing:
        raise UnboundVariableError(f"no value for free variable(s) {sorted(missing)}")
    env = {v: np.intp(s.idx(e)) for v, e in assignment.items()}
    return bool(_eval(s, phi, env, 0))


def extension(s: Structure, phi: Formula, variables: Sequence[str]) -> np.ndarray:
    """Boolean array of shape (n,)*len(variables); entry [i, j, ..] is the truth
    value with variables[0] = domain[i], variables[1] = domain[j], and so on."""
    k = len(variables)
    n = len(s)
    missing = free_vars(phi) - set(variables)
    if missing:
        raise UnboundVariableError(f"no value for free variable(s) {sorted(missing)}")
    env = {v: np.arange(n).reshape((n,) + (1,) * d) for d, v in enumerate(variables)}
    out = np.asarray(_eval(s, phi, env, k))
    out = np.broadcast_to(out.reshape((1,) * (k - out.ndim) + out.shape), (n,) * k)
    # axis -(d+1) holds variables[d]; reverse so variables[0] is first
    return np.ascontiguousarray(out.transpose(tuple(range(k))[::-1]))


# ---------------------------------------------------------------------------
# syntactic enumeration


def atoms_over(signature: Signature, variables: Sequence[str], identity: bool,
               term_depth: int = 0) -> list[Formula]:
    """Atomic formulas over ``variables`` with terms nested at most ``term_depth``."""
    terms = terms_over(signature, variables, term_depth)
    out: list[Formula] = []
    for name, arity in signature.predicates:
        for args in itertools.product(terms, repeat=arity):
            out.append(Atom(name, args))
    if identity:
        for i, a in enumerate(terms):
            for b in terms[i:]:
                out.append(Eq(a, b))
    return out


def terms_over(signature: Signature, variables: Sequence[str], depth: int, cap: int = 64) -> list:
    terms = [Var(v) for v in variables] + [Func(c) for c in signature.constants]
    frontier = list(terms)
    for _ in range(depth):
        new = []
        for name, arity in signature.functions:
            if arity == 0:
                continue
            for args in itertools.product(terms, repeat=arity):
                if any(a in frontier for a in args):
                    new.append(Func(name, args))
        frontier = new
        terms = terms + new
        if len(terms) > cap:
            return terms[:cap]
    return terms


def _key(phi):
    return (quantifier_depth(phi), connective_count(phi), str(phi))


def enumerate_formulas(signature: Signature, free: Sequence[str], max_quant_depth: int,
                       max_connectives: int, identity_permitted: bool, *, exact: bool = True,
                       term_depth: int = 0, cap: int = ENUMERATION_CAP) -> Iterator[Formula]:
    """Every formula within the bounds, up to the generator's normal form.

    Bound variables are named ``z1, z2, ...`` by nesting level and every
    quantifier binds a variable that occurs in its body. Commutative operands
    are kept in a fixed order and double negations are skipped. With ``exact``
    the free variables are exactly ``free``; otherwise any subset.
    """
    if max_quant_depth < 0 or max_connectives < 0:
        raise PreconditionError("bounds must be non-negative", module="formula-logic")
    free = tuple(free)
    memo: dict = {}
    produced = [0]

    def layer(scope: tuple, q: int, k: int) -> list[Formula]:
        key = (scope, q, k)
        if key in memo:
            return memo[key]
        out: list[Formula] = []
        if k == 0:
            out.extend(atoms_over(signature, scope, identity_permitted, term_depth))
        else:
            for phi in layer(scope, q, k - 1):
                if not isinstance(phi, Not):
                    out.append(Not(phi))
            for i in range(k):
                lefts = layer(scope, q, i)
                rights = layer(scope, q, k - 1 - i)
                right_keys = [_key(psi) for psi in rights]
                for phi in lefts:
                    kp = _key(phi)
                    for psi, kq in zip(rights, right_keys):
                        if kp <= kq:
                            out.append(And(phi, psi))
                            out.append(Or(phi, psi))
                            out.append(Iff(phi, psi))
                        out.append(Implies(phi, psi))
                _guard(out)
        if q > 0:
            z = f"z{len(scope) - len(free) + 1}"
            for phi in layer(scope + (z,), q - 1, k):
                if z in free_vars(phi):
                    out.append(Exists(z, phi))
                    out.append(Forall(z, phi))
        _guard(out)
        memo[key] = out
        produced[0] += len(out)
        return out

    def _guard(out):
        if len(out) + produced[0] > cap:
            raise FormulaOverflowError(f"more than {cap} formulas within the requested bounds")

    target = frozenset(free)
    for k in range(max_connectives + 1):
        for phi in layer(free, max_quant_depth, k):
            fv = free_vars(phi)
            if (fv == target) if exact else (fv <= target):
                yield phi


def random_formula(signature: Signature, free: Sequence[str], depth: int, rng: np.random.Generator,
                   identity_permitted: bool = False, size: int = 4, term_depth: int = 1) -> Formula:
    """A random formula with quantifier depth at most ``depth`` whose free
    variables are among ``free``. ``size`` bounds the connective budget."""
    counter = itertools.count(1)

    def gen(scope, d, budget):
        roll = rng.random()
        if budget <= 0 or roll < 0.25:
            if d > 0 and roll < 0.1:
                return quant(scope, d, budget)
            atoms = atoms_over(signature, scope, identity_permitted, term_depth)
            if not atoms:
                raise PreconditionError("signature has no atomic formulas", module="formula-logic")
            return atoms[rng.integers(len(atoms))]
        if d > 0 and roll < 0.55:
            return quant(scope, d, budget)
        if roll < 0.7:
            return Not(gen(scope, d, budget - 1))
        cls = (And, Or, Implies, Iff)[rng.integers(4)]
        split = int(rng.integers(budget))
        return cls(gen(scope, d, split), gen(scope, d, budget - 1 - split))

    def quant(scope, d, budget):
        z = f"z{next(counter)}"
        cls = Exists if rng.random() < 0.5 else Forall
        return cls(z, gen(scope + (z,), d - 1, budget))

    return gen(tuple(free), depth, size)
