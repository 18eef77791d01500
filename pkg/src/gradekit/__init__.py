"""Grades of discrimination on finite first-order structures."""
from .capture import (
    CAPTURABILITY, CaptureCounterexample, FormulaSet, capture_set_indisc_full,
    capture_set_rel_total, capture_set_sym_total, verify_capture,
)
from .dsl import parse_random_spec, parse_structure, serialize_structure, structure_from_json
from .errors import (
    DepthCapExceeded, DotExportError, DSLSyntaxError, FormulaError, FormulaOverflowError,
    FormulaSyntaxError, GradekitError, PreconditionError, QuotientConsistencyError,
    RegimeMismatchError, SizeCapError, StructureError, UnboundVariableError,
)
from .extensions import (
    InflationResult, check_ext_main, check_ext_total, inflate, is_elementary_ext_noid, k_analogue,
)
from .formula import Formula, alpha_equal, atom, conj, disj, format_formula, free_vars
from .formula_parser import parse_formula
from .gallery import gallery
from .grades import GradeId, parse_grade
from .indiscernibility import (
    PairPartition, closure_certificate, defining_formula, discerning_formula, full_indisc,
    indisc_grade, indisc_matrix, quotient,
)
from .lattice import (
    EntailmentDiagram, GradeMatrix, Regime, check_conformance, equivalence_report, grade_matrix,
    lattice,
)
from .relativity import (
    galois_c, galois_e, is_near_correspondence, is_quotient_iso, is_relativeness_correspondence,
    maximal_extension, rel_grade,
)
from .semantics import enumerate_formulas, evaluate, extension
from .structure import RandomSpec, Signature, Structure, make_structure, random_structure
from .symmetry import (
    Permutation, SearchConstraint, automorphisms, find_automorphism, find_isomorphism,
    is_automorphism, orbits, sym_grade,
)

__version__ = "0.1.0"
