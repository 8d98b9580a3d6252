class ParameterError(ValueError):
    """Raised when model or numeric parameters fall outside their valid range."""


class BelowThresholdError(ParameterError):
    """Raised when a threshold is requested for a branching number below 1."""


class InputError(ValueError):
    """Raised on malformed graphs, trees or files."""


class CapacityError(RuntimeError):
    """Raised when an exact or brute-force routine is asked for an instance above its size limit."""


class NumericError(ArithmeticError):
    """Raised when an eigensolver or optimiser fails."""


class ConvergenceError(RuntimeError):
    """
    Raised when the SDP solver exhausts its iteration budget.

    Attributes:
        iterations: Number of iterations performed.
        primal_residual: Last primal residual.
        dual_residual: Last dual residual.
    """

    def __init__(self, iterations: int, primal_residual: float, dual_residual: float):
        self.iterations = iterations
        self.primal_residual = primal_residual
        self.dual_residual = dual_residual
        super().__init__(f"SDP solver did not converge after {iterations} iterations "
                         f"(primal residual {primal_residual:.3e}, dual residual {dual_residual:.3e})")


class RunError(RuntimeError):
    """
    Raised when an experiment cannot write its results.

    :param message: What failed.
    :param rows_written: Number of result rows already flushed to disk.
    """

    def __init__(self, message: str, rows_written: int = 0):
        self.rows_written = rows_written
        super().__init__(f"{message} ({rows_written} rows written)")
