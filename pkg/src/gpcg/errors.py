"""Exception types shared across the package."""


class GpcgError(Exception):
    """Base class for all package errors."""


class ConfigError(GpcgError):
    """Invalid configuration (bad key, bad value, violated assumptions)."""


class SolverError(GpcgError):
    """Linear or eigenvalue solver failure."""


class NonConvergenceError(SolverError):
    """Iterative solve did not reach the requested residual."""

    def __init__(self, message, residual, iterations):
        super().__init__(f"{message} (relres={residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


class NotSpdError(SolverError):
    """Non-positive curvature met inside CG: the operator is not SPD.

    Usually indicates a configuration violating the trapping-vs-rotation
    balance assumption.
    """


class DegenerateProjectionError(SolverError):
    """The tangent-projection denominator (u, R_X(u)) vanished."""


class EigensolverError(SolverError):
    """The projected-Hessian eigensolver did not converge."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals
