"""The twelve grades of discrimination."""
from __future__ import annotations

from enum import Enum

from .errors import PreconditionError


class GradeId(str, Enum):
    id = "id"
    indiscEqPair = "indiscEqPair"
    indiscEqMon = "indiscEqMon"
    indiscNeqFull = "indiscNeqFull"
    indiscNeqPair = "indiscNeqPair"
    indiscNeqMon = "indiscNeqMon"
    symTotal = "symTotal"
    symPair = "symPair"
    symBare = "symBare"
    relTotal = "relTotal"
    relPair = "relPair"
    relBare = "relBare"

    def __str__(self):
        return self.value

    @property
    def symbol(self) -> str:
        return SYMBOLS[self]


SYMBOLS = {
    GradeId.id: "=",
    GradeId.indiscEqPair: "≈⁼ₚ",
    GradeId.indiscEqMon: "≈⁼ₘ",
    GradeId.indiscNeqFull: "≈⁻",
    GradeId.indiscNeqPair: "≈⁻ₚ",
    GradeId.indiscNeqMon: "≈⁻ₘ",
    GradeId.symTotal: "≈ₜ",
    GradeId.symPair: "≈ₚ",
    GradeId.symBare: "≈b",
    GradeId.relTotal: "~ₜ",
    GradeId.relPair: "~ₚ",
    GradeId.relBare: "~b",
}

ALL = tuple(GradeId)
INDISCERNIBILITY = (GradeId.id, GradeId.indiscEqPair, GradeId.indiscEqMon,
                    GradeId.indiscNeqFull, GradeId.indiscNeqPair, GradeId.indiscNeqMon)
SYMMETRY = (GradeId.symTotal, GradeId.symPair, GradeId.symBare)
RELATIVITY = (GradeId.relTotal, GradeId.relPair, GradeId.relBare)

# reflexive and symmetric but not transitive in general; the other eight are
# equivalence relations
PAIRWISE = (GradeId.indiscEqPair, GradeId.indiscNeqPair, GradeId.symPair, GradeId.relPair)
EQUIVALENCES = tuple(g for g in ALL if g not in PAIRWISE)

# on finite structures each pair of grades below has the same extension
FINITE_COINCIDENCES = (
    (GradeId.indiscEqPair, GradeId.symPair),
    (GradeId.indiscEqMon, GradeId.symBare),
    (GradeId.indiscNeqPair, GradeId.relPair),
    (GradeId.indiscNeqMon, GradeId.relBare),
)


def parse_grade(text) -> GradeId:
    """Accept a GradeId, its name, or its symbol."""
    if isinstance(text, GradeId):
        return text
    for g in GradeId:
        if text in (g.value, g.symbol):
            return g
    raise PreconditionError(f"unknown grade {text!r}; choose from {', '.join(g.value for g in GradeId)}")
