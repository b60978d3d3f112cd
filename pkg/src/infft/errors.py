"""Exception types raised across the package."""


class InfftError(Exception):
    """Base class for all package errors."""


class InvalidParameter(InfftError, ValueError):
    pass


class UnsupportedIndex(InfftError, IndexError):
    pass


class ZeroWindowTransform(InfftError, ZeroDivisionError):
    pass


class CoincidentNodes(InfftError, ValueError):
    pass


class SizeLimitExceeded(InfftError, MemoryError):
    pass


class DimensionMismatch(InfftError, ValueError):
    pass


class EmptyColumn(InfftError, ValueError):
    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"index set of column {column} is empty")


class RankDeficientColumn(InfftError, ArithmeticError):
    """A column system of the spreading-matrix optimizer lacks full column rank.

    ``diagnostics`` holds the rank estimate, the number of unknowns and the
    pivoted diagonal of the triangular factor.
    """

    def __init__(self, column, diagnostics):
        self.column = column
        self.diagnostics = diagnostics
        super().__init__(
            f"column {column}: rank {diagnostics.get('rank')} < "
            f"{diagnostics.get('ncols')} unknowns"
        )
