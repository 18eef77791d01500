"""Recursive-descent parser for the formula grammar.

    iff     := imp ("<->" imp)*
    imp     := or ("->" imp)?
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "!" unary | quant | primary
    quant   := ("forall" | "exists") var ("," var)* "."? iff
    primary := "(" iff ")" | "true" | "false" | R(t,..) | t "=" t | t "!=" t

A quantifier's scope runs as far right as possible, and the dot after the
bound variables is optional. An identifier in term position is a constant
when the signature declares it as a 0-place function, otherwise a variable.
"""
from __future__ import annotations

import re

from .errors import FormulaError, FormulaSyntaxError
from .formula import (
    And, Bottom, Eq, Exists, Forall, Formula, Func, Iff, Implies, Not, Or, Top, Var, Atom,
)
from .structure import Signature

_TOKEN = re.compile(r"\s*(?:(<->|->|!=|[!&|().,=])|([A-Za-z_][A-Za-z0-9_$']*)|(\S))")
_KEYWORDS = {"forall", "exists", "true", "false"}


def _tokenize(text: str):
    pos = 0
    out = []
    while True:
        m = _TOKEN.match(text, pos)
        if not m:
            break
        if m.group(3):
            raise FormulaSyntaxError(f"unexpected character {m.group(3)!r}", m.start(3))
        kind = "op" if m.group(1) else "id"
        out.append((kind, m.group(1) or m.group(2), m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, signature: Signature, identity_permitted: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.sig = signature
        self.identity = identity_permitted

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def accept(self, value):
        if self.peek()[1] == value and self.peek()[0] == "op":
            self.i += 1
            return True
        return False

    def expect(self, value):
        kind, val, pos = self.peek()
        if kind != "op" or val != value:
            shown = "end of input" if kind == "end" else repr(val)
            raise FormulaSyntaxError(f"expected {value!r}, found {shown}", pos)
        self.i += 1

    def parse(self) -> Formula:
        phi = self.iff()
        kind, val, pos = self.peek()
        if kind != "end":
            raise FormulaSyntaxError(f"unexpected {val!r}", pos)
        return phi

    def iff(self):
        phi = self.imp()
        while self.accept("<->"):
            phi = Iff(phi, self.imp())
        return phi

    def imp(self):
        phi = self.or_()
        if self.accept("->"):
            return Implies(phi, self.imp())
        return phi

    def or_(self):
        phi = self.and_()
        while self.accept("|"):
            phi = Or(phi, self.and_())
        return phi

    def and_(self):
        phi = self.unary()
        while self.accept("&"):
            phi = And(phi, self.unary())
        return phi

    def unary(self):
        if self.accept("!"):
            return Not(self.unary())
        kind, val, pos = self.peek()
        if kind == "id" and val in ("forall", "exists"):
            self.take()
            names = [self.variable()]
            while self.accept(","):
                names.append(self.variable())
            self.accept(".")
            body = self.iff()
            cls = Forall if val == "forall" else Exists
            for v in reversed(names):
                body = cls(v, body)
            return body
        return self.primary()

    def variable(self) -> str:
        kind, val, pos = self.take()
        if kind != "id" or val in _KEYWORDS:
            raise FormulaSyntaxError(f"expected a variable name, found {val!r}", pos)
        if val in self.sig:
            raise FormulaSyntaxError(f"{val!r} is a signature symbol and cannot be bound", pos)
        return val

    def primary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "(":
            self.take()
            phi = self.iff()
            self.expect(")")
            return phi
        if kind == "id" and val == "true":
            self.take()
            return Top()
        if kind == "id" and val == "false":
            self.take()
            return Bottom()
        if kind == "id" and self.sig.is_predicate(val):
            self.take()
            args = self.arglist(val, pos)
            return Atom(val, args)
        if kind in ("id",):
            left = self.term()
            op_kind, op, op_pos = self.peek()
            if op_kind == "op" and op in ("=", "!="):
                if not self.identity:
                    raise FormulaError(f"identity used in an identity-free formula at offset {op_pos}")
                self.take()
                right = self.term()
                return Eq(left, right) if op == "=" else Not(Eq(left, right))
            raise FormulaSyntaxError(f"expected '=' after term {left}", op_pos)
        shown = "end of input" if kind == "end" else repr(val)
        raise FormulaSyntaxError(f"expected a formula, found {shown}", pos)

    def arglist(self, name, pos):
        args = []
        if self.accept("("):
            if not self.accept(")"):
                args.append(self.term())
                while self.accept(","):
                    args.append(self.term())
                self.expect(")")
        want = self.sig.arity(name)
        if len(args) != want:
            raise FormulaError(f"{name} takes {want} argument(s), got {len(args)} at offset {pos}")
        return tuple(args)

    def term(self):
        kind, val, pos = self.take()
        if kind != "id" or val in _KEYWORDS:
            raise FormulaSyntaxError(f"expected a term, found {val!r}", pos)
        if self.sig.is_predicate(val):
            raise FormulaError(f"predicate {val} used as a term at offset {pos}")
        if self.sig.is_function(val):
            return Func(val, self.arglist(val, pos))
        if self.peek()[1] == "(" and self.peek()[0] == "op":
            raise FormulaError(f"unknown symbol {val!r} at offset {pos}")
        return Var(val)


def parse_formula(text: str, signature: Signature, identity_permitted: bool = True) -> Formula:
    """Parse ``text`` over ``signature``.

    Raises :class:`FormulaSyntaxError` on malformed input and
    :class:`FormulaError` on arity mismatches, unknown symbols, or ``=`` when
    ``identity_permitted`` is false.
    """
    return _Parser(text, signature, identity_permitted).parse()
