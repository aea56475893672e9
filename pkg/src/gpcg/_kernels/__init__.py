"""Kernel backend selection.

The compiled Cython extension is preferred; the numpy implementation is
the fallback when the extension was not built.  Set ``GPCG_PURE_PYTHON=1``
to force the fallback (used by the benchmark and for debugging).
"""

import os

if os.environ.get("GPCG_PURE_PYTHON", "") == "1":
    from . import _numpy_impl as _impl
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _numpy_impl as _impl  # type: ignore[no-redef]

BACKEND = _impl.BACKEND
csr_matvec = _impl.csr_matvec
pcg_jacobi = _impl.pcg_jacobi
quartic_sum = _impl.quartic_sum
quartic_line_coeffs = _impl.quartic_line_coeffs

__all__ = [
    "BACKEND",
    "csr_matvec",
    "pcg_jacobi",
    "quartic_sum",
    "quartic_line_coeffs",
]
