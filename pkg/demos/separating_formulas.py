"""Find the formulas that tell elements apart.

Without identity, two elements can only be told apart by a formula that sees
their relations. Here we ask for such a formula for every discernible pair of
a small random structure, and then collapse the digraph to its quotient.
"""
import itertools

from gradekit import (
    RandomSpec, Signature, discerning_formula, evaluate, quotient, random_structure,
    serialize_structure,
)

s = random_structure(19, 5, RandomSpec(Signature((("P", 1), ("R", 2))), 0.2))
print(serialize_structure(s))

for a, b in itertools.combinations(s.domain, 2):
    phi = discerning_formula(s, a, b)
    if phi is None:
        print(f"{a} and {b}: indiscernible")
        continue
    at_aa = evaluate(s, phi, {"x": a, "y": a})
    at_ab = evaluate(s, phi, {"x": a, "y": b})
    print(f"{a} and {b}: {phi}    [{at_aa} at ({a},{a}), {at_ab} at ({a},{b})]")

q = quotient(s)
print("\nquotient:")
print(serialize_structure(q.quotient))
