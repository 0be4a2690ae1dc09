"""
Project: Turán Workbench - exact simplicial Turán computations at desk scale
File: core/errors.py
Description:
    Exception hierarchy shared by every layer of the workbench.
    Library code raises these; the hub (app.py) catches `TuranError`, logs it and
    maps it onto the exit-code contract.
"""


class TuranError(Exception):
    """Base class for every error the workbench raises on purpose."""

    exit_code = 2


class RepresentationError(TuranError):
    """Ground set does not fit the fixed-width vertex-set representation."""


class UnsupportedSizeError(TuranError):
    """Instance is above a configured search limit (canonical form, containment, ...)."""


class InvalidStructureError(TuranError):
    """Violated structural invariant: arity, uniformity, range, antichain, closure."""


class UnknownPatternError(TuranError):
    """Pattern name not recognised by the constructions registry."""


class ParseError(TuranError):
    """Malformed input file. Carries the 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class BudgetExhausted(TuranError):
    """Deadline reached before a search finished.

    `partial` carries whatever the caller can still report (best witness so far,
    node count); it is None for plain containment searches.
    """

    exit_code = 3

    def __init__(self, message: str = "time budget exhausted", partial=None):
        self.partial = partial
        super().__init__(message)
