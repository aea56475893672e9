"""Deterministic Jacobi-preconditioned CG for sparse SPD systems.

This realizes every Riesz/Ritz solve in the package.  The preconditioner
is diagonal on purpose: simple, deterministic, and adequate at the
problem sizes targeted here.  Warm starts (``x0``) are supported because
consecutive outer iterations solve nearly identical systems.
"""

from typing import Optional

import numpy as np

from . import _kernels
from .errors import NonConvergenceError, NotSpdError
from .operators import SparseOperator

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 50_000


def solve_spd(
    A: SparseOperator,
    b: np.ndarray,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    x0: Optional[np.ndarray] = None,
    inv_diag: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Solve A x = b to a relative residual ||Ax - b|| <= tol ||b||.

    Raises :class:`NotSpdError` when non-positive curvature shows up
    (the operator is not SPD, e.g. the rotation dominates the trap) and
    :class:`NonConvergenceError` on iteration exhaustion.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if inv_diag is None:
        diag = A.diagonal()
        if np.any(diag <= 0):
            raise NotSpdError("operator has non-positive diagonal entries")
        inv_diag = 1.0 / diag
    x, relres, iters, flag = _kernels.pcg_jacobi(
        A.indptr, A.indices, A.data, b, inv_diag, tol, max_iter, x0
    )
    if flag == 2:
        raise NotSpdError(
            "non-positive curvature in CG: operator is not SPD "
            "(check the trapping-vs-rotation balance)"
        )
    if flag == 1:
        raise NonConvergenceError("CG did not converge", relres, iters)
    return x
