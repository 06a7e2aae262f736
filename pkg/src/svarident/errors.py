"""Exception types shared across the package."""

from __future__ import annotations


class SvarIdentError(Exception):
    """Base class for every error raised by svarident."""


class NotSymmetricError(SvarIdentError):
    """A matrix required to be symmetric is not, beyond tolerance."""


class NotPositiveDefiniteError(SvarIdentError):
    """Cholesky factorization hit a nonpositive pivot."""


class SingularA0Error(SvarIdentError):
    """The contemporaneous coefficient matrix is numerically singular."""


class SpecError(SvarIdentError):
    """Problem in a restriction document.  Carries a 1-based location."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        if line is not None and col is not None:
            message = f"line {line}, column {col}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SpecSyntaxError(SpecError):
    """Token or line that the restriction grammar does not allow."""


class DimensionMismatchError(SpecError):
    """Pattern row or block with the wrong number of entries."""


class UnknownBlockError(SpecError):
    """Block name outside A0, LAG1..LAGp, IR0, IR1, ..."""


class DuplicateBlockError(SpecError):
    """The same block declared twice."""


class CountConditionError(SvarIdentError):
    """Operation requires the counting condition to hold and it does not."""


class UnrestrictedPointError(SvarIdentError):
    """Structural point does not satisfy the zero restrictions within tolerance."""


class InfeasibleRestrictionsError(SvarIdentError):
    """No unit vector can satisfy a column's restrictions at this point."""
