"""Exception hierarchy shared by every wignerlab module."""


class WignerLabError(Exception):
    """Base class for all errors raised by wignerlab."""


class InvalidInputError(WignerLabError, ValueError):
    """An argument failed a precondition (shape, dimension, range)."""


class InvalidStateError(InvalidInputError):
    """A matrix is not a valid density matrix.

    ``invariant`` names the violated condition: ``"hermitian"``,
    ``"unit-trace"``, ``"positive-semidefinite"``, ``"finite"`` or ``"shape"``.
    """

    def __init__(self, invariant, message):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class InvalidGridError(InvalidInputError):
    """A phase-space grid has the wrong shape or is not normalized."""


class StateSpecError(InvalidInputError):
    """A JSON state specification could not be parsed.

    ``field`` is the dotted path of the offending entry.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class NotHermitianError(InvalidInputError):
    pass


class ConvergenceError(WignerLabError, ArithmeticError):
    """The Jacobi eigensolver hit its sweep cap before converging."""

    def __init__(self, residual, sweeps):
        super().__init__(
            f"Jacobi iteration did not converge after {sweeps} sweeps "
            f"(off-diagonal residual {residual:.3e})"
        )
        self.residual = residual
        self.sweeps = sweeps


class ConsistencyError(WignerLabError):
    """A criterion contradicted the exact partial-transpose oracle."""

    def __init__(self, message, verdicts=()):
        super().__init__(message)
        self.verdicts = tuple(verdicts)
