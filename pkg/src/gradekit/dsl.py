"""Text format for structures, plus JSON and DOT serializers.

    signature { pred R/2; pred S/2; func f/1; const c; }
    structure {
      domain = { a, b, c };
      R = { (a,b), (b,c) };
      edges S = { a-b };          # inserts (a,b) and (b,a)
      f = { a -> b, b -> b, c -> a };
      c = a;
    }

A file for :func:`random_structure` holds a signature block and an optional
``density { default = 0.5; R = 0.2; }`` block.
"""
from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass

from .errors import DotExportError, DSLSyntaxError, StructureError
from .structure import Diagnostic, RandomSpec, Signature, Structure, make_structure, validate_structure

CLONE_MARK = "$"

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+|\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+\.\d+)
  | (?P<ident>[A-Za-z0-9_$]+)
  | (?P<arrow>->)
  | (?P<sym>[{}();,=/\-])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind != "ws":
            toks.append(_Tok(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise DSLSyntaxError(message, tok.line, tok.col)

    def next(self) -> _Tok:
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.text == text and self.tok.kind != "eof":
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> _Tok:
        if self.tok.text != text or self.tok.kind == "eof":
            self.error(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.next()

    def ident(self, what: str = "identifier") -> _Tok:
        if self.tok.kind != "ident":
            self.error(f"expected {what}, found {self.tok.text or 'end of input'!r}")
        return self.next()

    def integer(self) -> int:
        t = self.ident("integer")
        if not t.text.isdigit():
            self.error("expected integer", t)
        return int(t.text)

    def number(self) -> float:
        t = self.next()
        try:
            return float(t.text)
        except ValueError:
            self.error("expected number", t)

    # signature { pred R/2; func f/1; const c; }
    def signature(self) -> Signature:
        self.expect("signature")
        self.expect("{")
        preds, funcs = [], []
        while not self.accept("}"):
            kw = self.ident("'pred', 'func' or 'const'")
            if kw.text == "pred":
                name = self.ident("predicate name").text
                self.expect("/")
                preds.append((name, self.integer()))
            elif kw.text == "func":
                name = self.ident("function name").text
                self.expect("/")
                funcs.append((name, self.integer()))
            elif kw.text == "const":
                funcs.append((self.ident("constant name").text, 0))
            else:
                self.error(f"unknown declaration {kw.text!r}", kw)
            self.expect(";")
        try:
            return Signature(tuple(preds), tuple(funcs))
        except StructureError as exc:
            d = exc.diagnostics[0]
            raise DSLSyntaxError(f"{d.location}: {d.message}", kw.line, kw.col) from None

    def tuple_(self) -> tuple[list[str], _Tok]:
        start = self.tok
        if self.accept("("):
            items = [self.ident("element").text]
            while self.accept(","):
                items.append(self.ident("element").text)
            self.expect(")")
            return items, start
        return [self.ident("element").text], start

    def block(self, item):
        self.expect("{")
        out = []
        if self.accept("}"):
            return out
        out.append(item())
        while self.accept(","):
            out.append(item())
        self.expect("}")
        return out


def _semantic(message: str, tok: _Tok):
    raise StructureError([Diagnostic("error", f"line {tok.line}:{tok.col}", message)])


def parse_structure(text: str, allow_clones: bool = False) -> Structure:
    """Parse DSL source into a validated :class:`Structure`.

    Syntax problems raise :class:`DSLSyntaxError` with line and column;
    semantic problems (unknown symbol, wrong arity, partial function, empty
    domain) raise :class:`StructureError`. Element names containing ``$`` are
    reserved for inflation clones unless ``allow_clones`` is set.
    """
    p = _Parser(text)
    sig = p.signature()
    p.expect("structure")
    p.expect("{")
    domain: list[str] | None = None
    rels: dict[str, set] = {}
    funs: dict[str, dict] = {}
    where: dict[str, _Tok] = {}
    while not p.accept("}"):
        head = p.ident("statement")
        if head.text == "domain" and p.tok.text == "=":
            p.expect("=")
            toks = p.block(lambda: p.ident("element"))
            domain = [t.text for t in toks]
            for t in toks:
                if CLONE_MARK in t.text and not allow_clones:
                    _semantic(f"element name {t.text!r} uses the reserved clone suffix '$'", t)
        elif head.text == "edges" and p.tok.kind == "ident":
            name_tok = p.ident("predicate name")
            name = name_tok.text
            if not sig.is_predicate(name) or sig.arity(name) != 2:
                _semantic(f"edges sugar needs a binary predicate, got {name!r}", name_tok)
            p.expect("=")

            def edge():
                a = p.ident("element").text
                p.expect("-")
                b = p.ident("element").text
                return a, b

            target = rels.setdefault(name, set())
            for a, b in p.block(edge):
                target.add((a, b))
                target.add((b, a))
        else:
            name = head.text
            where[name] = head
            if name not in sig:
                _semantic(f"unknown symbol {name!r}", head)
            p.expect("=")
            arity = sig.arity(name)
            if sig.is_predicate(name):
                target = rels.setdefault(name, set())
                for items, tok in p.block(p.tuple_):
                    if len(items) != arity:
                        _semantic(f"{name} has arity {arity} but tuple has {len(items)} entries", tok)
                    target.add(tuple(items))
            elif arity == 0:
                value = p.ident("element").text
                if name in funs:
                    _semantic(f"constant {name!r} assigned twice", head)
                funs[name] = {(): value}
            else:
                table = funs.setdefault(name, {})

                def mapping():
                    items, tok = p.tuple_()
                    p.expect("->")
                    return items, tok, p.ident("element").text

                for items, tok, value in p.block(mapping):
                    if len(items) != arity:
                        _semantic(f"{name} has arity {arity} but input has {len(items)} entries", tok)
                    key = tuple(items)
                    if key in table and table[key] != value:
                        _semantic(f"{name}{key} given two different values", tok)
                    table[key] = value
        p.expect(";")
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r} after structure block")
    if domain is None:
        raise StructureError([Diagnostic("error", "domain", "empty domain (no domain statement)")])
    return make_structure(sig, domain, rels, funs)


def parse_random_spec(text: str) -> RandomSpec:
    """Parse a signature block with an optional ``density`` block."""
    p = _Parser(text)
    sig = p.signature()
    density: dict[str, float] = {}
    default = 0.5
    if p.accept("density"):
        p.expect("{")
        while not p.accept("}"):
            name = p.ident("predicate name or 'default'")
            p.expect("=")
            value = p.number()
            if not 0.0 <= value <= 1.0:
                p.error("density must lie in [0, 1]", name)
            if name.text == "default":
                default = value
            elif sig.is_predicate(name.text):
                density[name.text] = value
            else:
                p.error(f"unknown predicate {name.text!r}", name)
            p.expect(";")
    if p.tok.kind != "eof":
        p.error(f"unexpected {p.tok.text!r}")
    return RandomSpec(sig, density, default)


def _ordered_tuples(s: Structure, tuples) -> list[tuple]:
    return sorted(tuples, key=lambda t: tuple(s.index[x] for x in t))


def format_signature(sig: Signature) -> str:
    parts = [f"pred {n}/{a};" for n, a in sig.predicates]
    for n, a in sig.functions:
        parts.append(f"const {n};" if a == 0 else f"func {n}/{a};")
    return "signature { " + " ".join(parts) + (" }" if parts else "}")


def _dsl(s: Structure) -> str:
    def tup(t):
        return t[0] if len(t) == 1 else "(" + ",".join(t) + ")"

    lines = [format_signature(s.signature), "structure {"]
    lines.append("  domain = { " + ", ".join(s.domain) + " };")
    for name, _ in s.signature.predicates:
        body = ", ".join(tup(t) for t in _ordered_tuples(s, s.relations[name]))
        lines.append(f"  {name} = {{ {body} }};" if body else f"  {name} = {{}};")
    for name, arity in s.signature.functions:
        table = s.functions[name]
        if arity == 0:
            lines.append(f"  {name} = {table[()]};")
            continue
        body = ", ".join(
            f"{tup(args)} -> {table[args]}" for args in itertools.product(s.domain, repeat=arity)
        )
        lines.append(f"  {name} = {{ {body} }};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def structure_to_dict(s: Structure) -> dict:
    return {
        "signature": {
            "predicates": [[n, a] for n, a in s.signature.predicates],
            "functions": [[n, a] for n, a in s.signature.functions],
        },
        "domain": list(s.domain),
        "relations": {n: [list(t) for t in _ordered_tuples(s, s.relations[n])] for n, _ in s.signature.predicates},
        "functions": {
            n: [[list(args), s.functions[n][args]] for args in itertools.product(s.domain, repeat=a)]
            for n, a in s.signature.functions
        },
    }


def structure_from_json(text: str) -> Structure:
    data = json.loads(text)
    sig = Signature(
        tuple((n, a) for n, a in data["signature"]["predicates"]),
        tuple((n, a) for n, a in data["signature"]["functions"]),
    )
    funs = {n: {tuple(args): v for args, v in rows} for n, rows in data.get("functions", {}).items()}
    rels = {n: [tuple(t) for t in rows] for n, rows in data.get("relations", {}).items()}
    return make_structure(sig, data["domain"], rels, funs)


def _dot(s: Structure) -> str:
    high = [n for n, a in s.signature.predicates if a > 2]
    if high:
        diag = Diagnostic("error", "dot", f"predicates of arity > 2 cannot be drawn: {high}")
        raise DotExportError(str(diag))
    binary = [n for n, a in s.signature.predicates if a == 2]
    symmetric = {n: all((b, a) in s.relations[n] for a, b in s.relations[n]) for n in binary}
    undirected = all(symmetric.values())
    unary = [n for n, a in s.signature.predicates if a == 1]
    kind, arc = ("graph", "--") if undirected else ("digraph", "->")
    out = [f"{kind} structure {{"]
    consts = {}
    for c in s.signature.constants:
        consts.setdefault(s.functions[c][()], []).append(c)
    for e in s.domain:
        tags = [p for p in unary if (e,) in s.relations[p]] + consts.get(e, [])
        label = e if not tags else e + " [" + ",".join(tags) + "]"
        out.append(f'  "{e}" [label="{label}"];')
    for name in binary:
        seen = set()
        for a, b in _ordered_tuples(s, s.relations[name]):
            if symmetric[name]:
                key = frozenset((a, b))
                if key in seen:
                    continue
                seen.add(key)
                extra = "" if undirected else ", dir=none"
            else:
                extra = ""
            out.append(f'  "{a}" {arc} "{b}" [label="{name}"{extra}];')
    for name, arity in s.signature.functions:
        if arity != 1:
            continue
        for e in s.domain:
            out.append(f'  "{e}" {arc} "{s.functions[name][(e,)]}" [label="{name}", style=dashed];')
    out.append("}")
    return "\n".join(out) + "\n"


def serialize_structure(s: Structure, format: str = "dsl") -> str:
    """Render ``s`` as ``dsl``, ``json`` or ``dot`` text."""
    diags = validate_structure(s)
    if diags:
        raise StructureError(diags)
    if format == "dsl":
        return _dsl(s)
    if format == "json":
        return json.dumps(structure_to_dict(s), sort_keys=True, indent=2) + "\n"
    if format == "dot":
        return _dot(s)
    raise ValueError(f"unknown format {format!r}")
