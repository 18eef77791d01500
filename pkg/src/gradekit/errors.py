"""Exception hierarchy.

Every error carries the name of the engine that raised it so the command
line front end can tag its messages.
"""
from __future__ import annotations


class GradekitError(Exception):
    module = "gradekit"


class DSLSyntaxError(GradekitError):
    module = "model-core"

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class StructureError(GradekitError):
    """Raised when a structure fails validation; carries the diagnostics."""

    module = "model-core"

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = [str(d) for d in self.diagnostics]
        super().__init__("invalid structure: " + "; ".join(lines))


class DotExportError(GradekitError):
    module = "model-core"


class FormulaSyntaxError(GradekitError):
    module = "formula-logic"

    def __init__(self, message: str, position: int):
        super().__init__(f"at offset {position}: {message}")
        self.position = position


class FormulaError(GradekitError):
    """Well-formedness violations: arity, unknown symbols, identity in L-."""

    module = "formula-logic"


class UnboundVariableError(FormulaError):
    pass


class FormulaOverflowError(FormulaError):
    pass


class DepthCapExceeded(GradekitError):
    module = "indiscernibility"

    def __init__(self, message: str, pair=None):
        super().__init__(message)
        self.pair = pair


class QuotientConsistencyError(GradekitError):
    module = "indiscernibility"


class PreconditionError(GradekitError):
    module = "gradekit"

    def __init__(self, message: str, module: str | None = None):
        super().__init__(message)
        if module is not None:
            self.module = module


class SizeCapError(GradekitError):
    module = "grade-lattice"


class RegimeMismatchError(GradekitError):
    module = "grade-lattice"
