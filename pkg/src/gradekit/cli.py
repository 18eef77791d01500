"""Command-line front end.

Exit status is 0 on success, 1 when an engine rejects its input (the message
names the engine), and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .capture import (
    capture_set_indisc_full, capture_set_rel_total, capture_set_sym_total, verify_capture,
)
from .dsl import parse_random_spec, parse_structure, serialize_structure, structure_from_json
from .errors import DepthCapExceeded, GradekitError
from .extensions import inflate
from .gallery import NAMES, gallery
from .grades import ALL, INDISCERNIBILITY, GradeId, parse_grade
from .indiscernibility import discerning_formula, full_indisc, indisc_grade, quotient
from .lattice import check_conformance, grade_matrix, lattice
from .relativity import galois_law_checks, rel_grade
from .structure import random_structure
from .symmetry import SearchConstraint, find_automorphism, sym_grade


class UsageError(Exception):
    pass


def _load(path: str, allow_clones: bool):
    text = Path(path).read_text()
    if path.endswith(".json"):
        return structure_from_json(text)
    return parse_structure(text, allow_clones=allow_clones)


def _pair(text: str) -> tuple[str, str]:
    parts = text.split(",")
    if len(parts) != 2 or not all(p.strip() for p in parts):
        raise UsageError(f"expected a pair a,b but got {text!r}")
    return parts[0].strip(), parts[1].strip()


def _element(s, e: str) -> str:
    if e not in s.index:
        raise UsageError(f"{e!r} is not an element of the structure")
    return e


def _table(rows: list[list[str]]) -> str:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return "".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n" for r in rows)


def cmd_grades(args) -> str:
    s = _load(args.file, args.allow_clones)
    m = grade_matrix(s, cap=args.cap)
    pair = None
    if args.pair:
        pair = tuple(_element(s, e) for e in _pair(args.pair))
    if args.json:
        return m.to_json(pair) + "\n"
    if pair:
        rows = [["grade", "symbol", "holds"]]
        rows += [[g.value, g.symbol, "yes" if m.get(g, *pair) else "no"] for g in ALL]
        return _table(rows)
    rows = [["a", "b"] + [g.symbol for g in ALL]]
    for a, b in m.pairs():
        rows.append([a, b] + ["1" if m.get(g, a, b) else "." for g in ALL])
    return _table(rows)


def cmd_quotient(args) -> str:
    s = _load(args.file, args.allow_clones)
    part = full_indisc(s)
    q = quotient(s)
    lines = [f"# {len(part.classes)} classes"]
    lines += ["# [" + ", ".join(c) + "] -> " + c[0] for c in part.classes]
    return "\n".join(lines) + "\n" + serialize_structure(q.quotient)


def cmd_auto(args) -> str:
    s = _load(args.file, args.allow_clones)
    required: dict[str, str] = {}
    for item in args.map:
        parts = item.split(":")
        if len(parts) != 2:
            raise UsageError(f"expected a:b in --map but got {item!r}")
        a, b = (_element(s, p.strip()) for p in parts)
        required[a] = b
        if args.swap:
            required[b] = a
    fix = None
    if args.total:
        if len(required) > 2 or len(args.map) != 1:
            raise UsageError("--total takes a single --map a:b")
        a, b = next(iter(required.items()))
        required[b] = a
        fix = (a, b)
    try:
        constraint = SearchConstraint(required, fix)
    except GradekitError as exc:
        raise UsageError(str(exc)) from exc
    perm = find_automorphism(s, constraint)
    if perm is None:
        return "no automorphism\n"
    return f"{perm}\n" + "".join(f"{e} -> {perm(e)}\n" for e in s.domain)


_REL = {"total": GradeId.relTotal, "pair": GradeId.relPair, "bare": GradeId.relBare}


def cmd_rel(args) -> str:
    s = _load(args.file, args.allow_clones)
    a, b = (_element(s, e) for e in _pair(args.pair))
    holds, witness = rel_grade(s, _REL[args.grade], a, b)
    out = f"{_REL[args.grade].symbol}({a},{b}): {'yes' if holds else 'no'}\n"
    if holds:
        out += "witness: {" + ", ".join(f"({x},{y})" for x, y in
                                       sorted(witness, key=lambda p: (s.idx(p[0]), s.idx(p[1])))) + "}\n"
    return out


def cmd_galois(args) -> str:
    s = _load(args.file, args.allow_clones)
    checks = galois_law_checks(s, max_autos=args.max_autos, samples=args.samples, seed=args.seed)
    failed = sum(not c.passed for c in checks)
    return "".join(f"{c}\n" for c in checks) + f"{failed} law(s) failed\n"


def cmd_indisc(args) -> str:
    s = _load(args.file, args.allow_clones)
    g = parse_grade(args.grade)
    a, b = (_element(s, e) for e in _pair(args.pair))
    if g in INDISCERNIBILITY:
        holds = indisc_grade(s, g, a, b)
    elif g.value.startswith("sym"):
        holds = sym_grade(s, g, a, b)[0]
    else:
        holds = rel_grade(s, g, a, b)[0]
    out = f"{g.symbol}({a},{b}): {'yes' if holds else 'no'}\n"
    if g is GradeId.indiscNeqFull and not holds:
        try:
            out += f"discerned by: {discerning_formula(s, a, b, depth_cap=args.depth)}\n"
        except DepthCapExceeded:
            out += f"no separating formula within depth {args.depth}\n"
    return out


def cmd_capture(args) -> str:
    s = _load(args.file, args.allow_clones)
    if args.grade == "sym-total":
        gamma, g = capture_set_sym_total(s.signature), GradeId.symTotal
    elif args.grade == "rel-total":
        gamma, g = capture_set_rel_total(s, args.depth), GradeId.relTotal
    else:
        gamma, g = capture_set_indisc_full(s, args.depth), GradeId.indiscNeqFull
    verdict = verify_capture(s, g, gamma)
    head = [f"# {len(gamma)} formula(s) in {gamma.language}; {gamma.note}",
            f"# captures {g.value} on this structure: " + ("yes" if verdict else f"no, {verdict}")]
    if gamma.approximate:
        head.append("# approximate for signatures with functions")
    return "\n".join(head) + "\n" + gamma.to_text()


def cmd_lattice(args) -> str:
    d = lattice(args.regime)
    if args.dot:
        return d.to_dot()
    lines = [f"# {d.regime.kebab}: {len(d.nodes)} nodes, {len(d.edges)} edges"]
    lines += [f"n{i}  {d.label(i)}  ({' '.join(g.value for g in node)})" for i, node in enumerate(d.nodes)]
    lines += [f"{d.label(u)}  =>  {d.label(v)}" for u, v in d.edges]
    return "\n".join(lines) + "\n"


def cmd_conform(args) -> str:
    s = _load(args.file, args.allow_clones)
    violations = check_conformance(s, args.regime, grade_matrix(s, cap=args.cap))
    return "".join(f"{v}\n" for v in violations) + f"{len(violations)} violations\n"


def cmd_inflate(args) -> str:
    s = _load(args.file, args.allow_clones)
    return serialize_structure(inflate(s, _element(s, args.element), args.copies).extended)


def cmd_gallery(args) -> str:
    return serialize_structure(gallery(args.name), args.format)


def cmd_random(args) -> str:
    spec = parse_random_spec(Path(args.spec).read_text())
    return serialize_structure(random_structure(args.seed, args.size, spec), args.format)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gradekit", description=__doc__.splitlines()[0])
    p.add_argument("-o", "--output", help="write the result to this file instead of stdout")
    sub = p.add_subparsers(dest="verb", required=True, metavar="verb")

    def verb(name, func, help_, file=True):
        sp = sub.add_parser(name, help=help_)
        if file:
            sp.add_argument("file", help="structure in the text format, or .json")
            sp.add_argument("--allow-clones", action="store_true",
                            help="accept element names containing '$'")
        sp.set_defaults(func=func)
        return sp

    sp = verb("grades", cmd_grades, "all twelve grades on every pair")
    sp.add_argument("--pair")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--cap", type=int, default=10, help="largest structure accepted")

    verb("quotient", cmd_quotient, "classes of ≈⁻ and the quotient structure")

    sp = verb("auto", cmd_auto, "search for an automorphism")
    sp.add_argument("--map", action="append", required=True, metavar="a:b")
    sp.add_argument("--swap", action="store_true", help="also send b to a")
    sp.add_argument("--total", action="store_true", help="fix every other element")

    sp = verb("rel", cmd_rel, "decide a relativity grade")
    sp.add_argument("--grade", choices=sorted(_REL), required=True)
    sp.add_argument("--pair", required=True)

    sp = verb("galois", cmd_galois, "run the Galois law suite")
    sp.add_argument("--check", action="store_true", required=True)
    sp.add_argument("--max-autos", type=int, default=50)
    sp.add_argument("--samples", type=int, default=20)
    sp.add_argument("--seed", type=int, default=0)

    sp = verb("indisc", cmd_indisc, "decide one grade on one pair")
    sp.add_argument("--grade", required=True)
    sp.add_argument("--pair", required=True)
    sp.add_argument("--depth", type=int, default=3)

    sp = verb("capture", cmd_capture, "print a capturing formula set")
    sp.add_argument("--grade", choices=["sym-total", "rel-total", "indisc-full"], required=True)
    sp.add_argument("--depth", type=int, default=3)

    sp = verb("lattice", cmd_lattice, "entailment diagram of a regime", file=False)
    sp.add_argument("--regime", required=True)
    sp.add_argument("--dot", action="store_true")

    sp = verb("conform", cmd_conform, "check a structure against a diagram")
    sp.add_argument("--regime", required=True)
    sp.add_argument("--cap", type=int, default=10)

    sp = verb("inflate", cmd_inflate, "add clones of an element")
    sp.add_argument("--element", required=True)
    sp.add_argument("--copies", type=int, default=1)

    sp = verb("gallery", cmd_gallery, "print a built-in structure", file=False)
    sp.add_argument("name", choices=NAMES)
    sp.add_argument("--format", choices=["dsl", "json", "dot"], default="dsl")

    sp = verb("random", cmd_random, "generate a random structure", file=False)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--size", type=int, required=True)
    sp.add_argument("--spec", required=True, help="signature file with optional density block")
    sp.add_argument("--format", choices=["dsl", "json", "dot"], default="dsl")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"gradekit: error: {exc}", file=sys.stderr)
        return 2
    except GradekitError as exc:
        print(f"gradekit: [{exc.module}] {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"gradekit: [cli] {exc}", file=sys.stderr)
        return 1
    if args.output:
        Path(args.output).write_text(out)
    else:
        sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
