"""Acceptance suite. Each criterion prints one PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines inline, or
``python tests/test_acceptance.py`` to print them alone.
"""
import itertools
import sys
import time
from functools import lru_cache

import numpy as np
import pytest

from gradekit import (
    DepthCapExceeded, GradeId, RandomSpec, SearchConstraint, Signature, capture_set_rel_total,
    capture_set_sym_total, check_conformance, check_ext_main, check_ext_total, defining_formula,
    enumerate_formulas, equivalence_report, evaluate, extension, find_automorphism,
    find_isomorphism, full_indisc, gallery, grade_matrix, indisc_matrix, inflate,
    is_automorphism, is_elementary_ext_noid, is_near_correspondence,
    is_relativeness_correspondence, quotient, random_structure, verify_capture,
)
from gradekit.gallery import NAMES
from gradekit.grades import EQUIVALENCES, PAIRWISE
from gradekit.lattice import Regime
from gradekit.relativity import galois_law_checks
from gradekit.semantics import random_formula
from gradekit.separators import type_table
from gradekit.symmetry import Permutation

from streams import criterion_stream, function_stream, relational_stream

G = GradeId
RESULTS: dict[int, str] = {}


def report(number, title, failures, detail="", capsys=None):
    line = f"criterion {number} {'PASS' if not failures else 'FAIL'}: {title}"
    if detail:
        line += f" ({detail})"
    RESULTS[number] = line
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    assert not failures, "\n".join(map(str, failures[:10]))


def stream():
    return criterion_stream()


@lru_cache(maxsize=None)
def matrix(s):
    return grade_matrix(s)


def all_structures():
    return [gallery(n) for n in NAMES] + list(stream())


# 1 -------------------------------------------------------------------------


def gallery_claims():
    m = {n: grade_matrix(gallery(n)) for n in NAMES}
    f = gallery("F")
    swap = {("1", "2"), ("2", "1")}
    claims = {
        "A: 1 ≈⁻ 2": m["A"].get(G.indiscNeqFull, 1, 2),
        "A: 1 ≠ 2": not m["A"].get(G.id, 1, 2),
        "B: 1 ≈ₜ 2": m["B"].get(G.symTotal, 1, 2),
        "B: 1 ≉⁻ 2": not m["B"].get(G.indiscNeqFull, 1, 2),
        "C: 1 ~ₜ 2": m["C"].get(G.relTotal, 1, 2),
        "C: not 1 ≈⁼ₘ 2": not m["C"].get(G.indiscEqMon, 1, 2),
        "D: 1 ≈b 2": m["D"].get(G.symBare, 1, 2),
        "D: not 1 ≈⁻ₚ 2": not m["D"].get(G.indiscNeqPair, 1, 2),
        "D: 1 ≈ₚ 3": m["D"].get(G.symPair, 1, 3),
        "D: not 1 ~ₜ 3": not m["D"].get(G.relTotal, 1, 3),
        "F: swap is a near-correspondence": is_near_correspondence(f, f, swap),
        "F: swap is not a relativeness correspondence": not is_relativeness_correspondence(f, f, swap),
        "G: 1 ≈ₚ 2": m["G"].get(G.symPair, 1, 2),
        "G: 2 ≈ₚ 3": m["G"].get(G.symPair, 2, 3),
        "G: not 1 ≈⁻ₚ 3": not m["G"].get(G.indiscNeqPair, 1, 3),
        "I: 1 ≈ₜ 2": m["I"].get(G.symTotal, 1, 2),
        "I: not 7 ≈b 8": not m["I"].get(G.symBare, 7, 8),
    }
    i = gallery("I")
    types = type_table(i, identity=False)
    ix = i.idx
    for (a, b), (c, d) in [((1, 2), (7, 8)), ((1, 4), (1, 7))]:
        u, v = (ix(a), ix(b)), (ix(c), ix(d))
        claims[f"I: ({a},{b}) and ({c},{d}) share depth-2 identity-free types"] = types.same(u, v, 2)
        agree = True
        for q, k in [(2, 1), (1, 2)]:
            for phi in enumerate_formulas(i.signature, ["x", "y"], q, k, False):
                if evaluate(i, phi, {"x": a, "y": b}) != evaluate(i, phi, {"x": c, "y": d}):
                    agree = False
                    break
        claims[f"I: ({a},{b}) and ({c},{d}) agree on enumerated formulas"] = agree
    return claims


def test_criterion_1_gallery(capsys):
    start = time.perf_counter()
    failures = [k for k, ok in gallery_claims().items() if not ok]
    elapsed = time.perf_counter() - start
    if elapsed >= 30:
        failures.append(f"runtime {elapsed:.1f}s exceeds 30s")
    report(1, "gallery reproduction", failures, f"{elapsed:.1f}s", capsys)


# 2 -------------------------------------------------------------------------


def test_criterion_2_conformance(capsys):
    start = time.perf_counter()
    failures = []
    rel, fun = relational_stream(), function_stream()
    for s in rel:
        for r in (Regime.finiteRelational, Regime.finiteArbitrary):
            failures += [(s, v) for v in check_conformance(s, r, matrix(s))]
    for s in fun:
        failures += [(s, v) for v in check_conformance(s, Regime.finiteArbitrary, matrix(s))]
    elapsed = time.perf_counter() - start
    if elapsed >= 120:
        failures.append(f"runtime {elapsed:.1f}s exceeds 120s")
    report(2, "finite-regime lattice conformance", failures,
           f"{len(rel)}+{len(fun)} structures, {elapsed:.1f}s", capsys)


# 3 -------------------------------------------------------------------------

GALOIS_SPECS = [RandomSpec(Signature((("R", 2),)), 0.4),
                RandomSpec(Signature((("P", 1), ("R", 2))), 0.5),
                RandomSpec(Signature((("R", 2),), (("f", 1),)), 0.3),
                RandomSpec(Signature((("R", 2), ("S", 2))), 0.2)]


def galois_structures():
    rng = np.random.default_rng(31)
    return [random_structure(500 + i, int(rng.integers(2, 7)), GALOIS_SPECS[i % 4])
            for i in range(100)]


def test_criterion_3_galois(capsys):
    failures, count = [], 0
    for i, s in enumerate(galois_structures()):
        for check in galois_law_checks(s, max_autos=50, samples=20, seed=i):
            count += check.instances
            if not check.passed:
                failures.append((s, str(check)))
    report(3, "Galois laws", failures, f"{count} law instances", capsys)


# 4 -------------------------------------------------------------------------


def test_criterion_4_oracle(capsys):
    failures, separated = [], 0
    for s in stream():
        m = matrix(s)
        with_id = type_table(s, identity=True)
        without = type_table(s, identity=False)
        for i, j in itertools.product(range(len(s)), repeat=2):
            a, b = s.domain[i], s.domain[j]
            checks = [(with_id, (i, j), (j, i), G.symPair), (with_id, (i,), (j,), G.symBare),
                      (without, (i, j), (j, i), G.relPair), (without, (i,), (j,), G.relBare)]
            for table, u, v, g in checks:
                if not table.same(u, v, 2):
                    separated += 1
                    if m.get(g, a, b):
                        failures.append((s, g, a, b))
        for g, h in [(G.indiscEqPair, G.symPair), (G.indiscEqMon, G.symBare),
                     (G.indiscNeqPair, G.relPair), (G.indiscNeqMon, G.relBare)]:
            if not np.array_equal(m.values[g], m.values[h]):
                failures.append((s, g, h))
    report(4, "finite coincidences against the bounded oracle", failures,
           f"{separated} separations checked", capsys)


# 5 -------------------------------------------------------------------------


def test_criterion_5_quotient_preservation(capsys):
    failures = []
    rng = np.random.default_rng(55)
    for s in stream():
        q = quotient(s)
        cls = [q.quotient.idx(q.class_of[e]) for e in s.domain]
        for _ in range(50):
            phi = random_formula(s.signature, ["x", "y"], 3, rng)
            ext = extension(s, phi, ["x", "y"])
            qext = extension(q.quotient, phi, ["x", "y"])
            for _ in range(10):
                i, j = (int(k) for k in rng.integers(len(s), size=2))
                if ext[i, j] != qext[cls[i], cls[j]]:
                    failures.append((s, str(phi), s.domain[i], s.domain[j]))
    report(5, "quotient preservation", failures, f"{len(stream()) * 500} evaluations", capsys)


# 6 -------------------------------------------------------------------------


def random_constraint(s, rng):
    n = len(s)
    if rng.random() < 0.3:
        i, j = (int(k) for k in rng.choice(n, size=2, replace=False))
        a, b = s.domain[i], s.domain[j]
        required = {a: b, b: a} if rng.random() < 0.5 else {a: b}
        return SearchConstraint(required, fix_outside=(a, b))
    k = int(rng.integers(0, min(3, n) + 1))
    src = rng.choice(n, size=k, replace=False)
    dst = rng.choice(n, size=k, replace=False)
    return SearchConstraint({s.domain[i]: s.domain[j] for i, j in zip(src, dst)})


def test_criterion_6_brute_force(capsys):
    failures, checked = [], 0
    rng = np.random.default_rng(66)
    small = [s for s in stream() if len(s) <= 5]
    for s in small:
        everything = [p for p in (Permutation(s.domain, im) for im in itertools.permutations(s.domain))
                      if is_automorphism(s, p)]
        for _ in range(200):
            c = random_constraint(s, rng)
            expected = next((p for p in everything if c.satisfied_by(p)), None)
            found = find_automorphism(s, c)
            checked += 1
            if found != expected:
                failures.append((s, c, found, expected))
    report(6, "constrained search against exhaustive enumeration", failures,
           f"{len(small)} structures, {checked} constraints", capsys)


# 7 -------------------------------------------------------------------------


def test_criterion_7_capture(capsys):
    failures, unresolved, attempted = [], [], 0
    rel = relational_stream()
    for s in rel:
        verdict = verify_capture(s, G.symTotal, capture_set_sym_total(s.signature))
        if verdict is not True:
            failures.append(("symTotal", s, str(verdict)))
    for s in stream():
        attempted += 1
        try:
            gamma = capture_set_rel_total(s, depth_cap=3)
        except DepthCapExceeded as exc:
            unresolved.append((s, str(exc)))
            continue
        verdict = verify_capture(s, G.relTotal, gamma)
        if verdict is not True:
            failures.append(("relTotal", s, str(verdict)))
    for s in all_structures():
        eps = defining_formula(s)
        if not np.array_equal(extension(s, eps, ["x", "y"]), indisc_matrix(s)):
            failures.append(("defining formula", s))
    rate = len(unresolved) / attempted
    if rate >= 0.05:
        failures.append(f"unresolved rate {rate:.1%} is not below 5%")
    report(7, "capture", failures,
           f"rel-total unresolved {len(unresolved)}/{attempted} = {rate:.1%}", capsys)


# 8 -------------------------------------------------------------------------

EXT_SPECS = [RandomSpec(Signature((("R", 2),)), 0.4),
             RandomSpec(Signature((("P", 1), ("R", 2)), (("f", 1),)), 0.5),
             RandomSpec(Signature((("T", 3),), (("g", 2), ("c", 0))), 0.3)]


def test_criterion_8_extensions(capsys):
    start = time.perf_counter()
    failures = []
    rng = np.random.default_rng(88)
    for i in range(100):
        s = random_structure(800 + i, int(rng.integers(1, 6)), EXT_SPECS[i % 3])
        a = s.domain[int(rng.integers(len(s)))]
        r = inflate(s, a, int(rng.integers(1, 4)))
        part = full_indisc(r.extended)
        if not all(part.same(a, d) for d in r.clones):
            failures.append(("clone indiscernibility", s, a))
        if find_isomorphism(quotient(s).quotient, quotient(r.extended).quotient) is None:
            failures.append(("quotient isomorphism", s, a))
        if not is_elementary_ext_noid(s, r.extended, r.embedding):
            failures.append(("elementary extension", s, a))
    for name in NAMES:
        s = gallery(name)
        failures += [("ext total", name, a, b) for a, b in itertools.product(s.domain, repeat=2)
                     if not check_ext_total(s, a, b)]
    pool = [(s, s.domain[i], s.domain[j]) for s in stream() if len(s) <= 5
            for i, j in zip(*np.nonzero(~indisc_matrix(s)))]
    picks = rng.choice(len(pool), size=50, replace=False)
    failures += [("ext main", *pool[k]) for k in picks if not check_ext_main(*pool[k])]
    elapsed = time.perf_counter() - start
    if elapsed >= 60:
        failures.append(f"runtime {elapsed:.1f}s exceeds 60s")
    report(8, "inflation and elementary extensions", failures, f"{elapsed:.1f}s", capsys)


# 9 -------------------------------------------------------------------------


def test_criterion_9_equivalences(capsys):
    failures = []
    for s in all_structures():
        rep = equivalence_report(matrix(s))
        failures += [(s, g) for g in EQUIVALENCES if not rep[g].equivalence]
        failures += [(s, g) for g in PAIRWISE if not (rep[g].reflexive and rep[g].symmetric)]
    rep = equivalence_report(gallery("G"))
    failures += [("G transitive", g) for g in PAIRWISE if rep[g].transitive]
    report(9, "equivalence statuses", failures,
           f"{len(EQUIVALENCES)} equivalence grades on {len(all_structures())} structures", capsys)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
