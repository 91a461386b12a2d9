"""Exception hierarchy shared by every module of the package."""


class GammaError(Exception):
    """Base class for all errors raised by :mod:`gammatrix`."""


class InvalidOrderError(GammaError, ValueError):
    """The vector length or matrix order is not supported by the operation."""


class DimensionMismatchError(GammaError, ValueError):
    pass


class StructureError(GammaError, ValueError):
    """An input vector or matrix lacks the symmetry it was declared to have."""


class ConstraintError(StructureError):
    """A reverse-circulant row violates the zero-sum constraints."""


class NotAGammaMatrixError(GammaError, ValueError):
    pass


class SingularMatrixError(GammaError, ArithmeticError):
    """Raised when an eigenvalue falls below the singularity threshold.

    ``index`` holds the position (in basis order) of the first offending
    eigenvalue, or ``None`` when the failure is not tied to one eigenvalue.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class IndefiniteMatrixError(GammaError, ArithmeticError):
    pass


class FormulaDiscrepancyError(GammaError):
    """Closed-form approximation disagrees with the projection oracle.

    Both candidate outputs are attached so callers can dump them.
    """

    def __init__(self, message, formula=None, oracle=None):
        super().__init__(message)
        self.formula = formula
        self.oracle = oracle
