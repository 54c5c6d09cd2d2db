"""Exception hierarchy shared by all voidfill modules.

DataError covers malformed or degenerate inputs (bad files, shape
mismatches, masks that leave nothing to work with); NumericalError covers
failures of the math itself (ill conditioning, solver non-convergence,
non-finite losses). The CLI maps these onto distinct exit codes.
"""


class VoidFillError(Exception):
    """Base class for all voidfill errors."""


class DataError(VoidFillError):
    """Input data is malformed, inconsistent, or degenerate."""


class GridFormatError(DataError):
    """ASCII grid file violates the expected format."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ShapeMismatchError(DataError):
    """Grid, mask, or tensor shapes do not agree."""


class NumericalError(VoidFillError):
    """A numerical procedure failed (conditioning, convergence, overflow)."""


class ConditioningError(NumericalError):
    """A linear system is too ill-conditioned to solve reliably."""


class ConvergenceError(NumericalError):
    """An iterative solver did not converge within its iteration budget."""
