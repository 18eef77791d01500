"""Walk the built-in gallery and show where the grades of discrimination split.

For each structure we print the pairs of distinct elements and the grades they
satisfy, then the orbits and the indiscernibility classes side by side.
"""
import itertools

from gradekit import full_indisc, gallery, grade_matrix, orbits
from gradekit.gallery import NAMES
from gradekit.grades import ALL


def main():
    for name in NAMES:
        s = gallery(name)
        m = grade_matrix(s)
        symbols = [f"{p}/{k}" for p, k in s.signature.predicates + s.signature.functions]
        print(f"== {name}: {len(s)} elements, symbols {' '.join(symbols)}")
        print("   orbits:         ", [list(c) for c in orbits(s).classes])
        print("   ≈⁻ classes:     ", [list(c) for c in full_indisc(s).classes])
        for a, b in itertools.combinations(s.domain, 2):
            held = [g.value for g in ALL if m.get(g, a, b)]
            if held:
                print(f"   ({a},{b}) ", " ".join(held))
        print()


if __name__ == "__main__":
    main()
