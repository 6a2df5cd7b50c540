"""Exception hierarchy.

Everything raised on purpose by the package derives from :class:`SelektaError`.
Input problems (bad CSV, bad arguments, degenerate columns) are
:class:`InputError`; failures of the numerics themselves are
:class:`NumericalError`. The CLI maps these to exit codes 2 and 3.
"""


class SelektaError(Exception):
    pass


class InputError(SelektaError, ValueError):
    pass


class NumericalError(SelektaError, ArithmeticError):
    pass


class LoadError(InputError):
    """CSV could not be read against the schema."""

    def __init__(self, message, row=None, column=None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class ZeroVarianceError(InputError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"column {column!r} has zero variance")


class SingularDesignError(NumericalError):
    def __init__(self, column, name=None):
        self.column = column
        self.name = name
        label = f"{column}" if name is None else f"{column} ({name})"
        super().__init__(f"design matrix is rank deficient at column {label}")


class ContractError(InputError):
    """A documented precondition on a numeric argument was violated."""


class ConvergenceError(NumericalError):
    def __init__(self, message, gap=None):
        self.gap = gap
        if gap is not None:
            message = f"{message} (last max coefficient change {gap:.3e})"
        super().__init__(message)


class DegreesOfFreedomError(NumericalError):
    pass


class EmptySelectionError(NumericalError):
    pass
