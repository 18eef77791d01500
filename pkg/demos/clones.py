"""Cloning an element keeps every identity-free truth but can create symmetry.

The seven-vertex graph below has no automorphism swapping 1 and 2. After one
extra copy of 1 is added, a swap of 1 and 2 appears, though it still has to
move other vertices too.
"""
from gradekit import GradeId, full_indisc, inflate, is_elementary_ext_noid, k_analogue, sym_grade

k = k_analogue()
print("1 ≈⁻ 2 before cloning:", full_indisc(k).same(1, 2))
print("swap of 1 and 2 before cloning:", sym_grade(k, GradeId.symPair, 1, 2)[0])

result = inflate(k, 1, 1)
n = result.extended
print("clones:", result.clones)
print("elementary extension without identity:", is_elementary_ext_noid(k, n, result.embedding))

ok, witness = sym_grade(n, GradeId.symPair, 1, 2)
print("swap of 1 and 2 after cloning:", ok, witness)
print("swap fixing everything else:", sym_grade(n, GradeId.symTotal, 1, 2)[0])
