"""Numpy fallback for the hot kernels.

Same contracts as the compiled module ``_speedups``; everything here is
vectorized numpy with deterministic (sequential) accumulation.
"""

import numpy as np

BACKEND = "numpy"


def csr_matvec(indptr, indices, data, x):
    """y = A @ x for a CSR matrix given by its raw arrays.

    Rows are accumulated left to right, so results are bit-reproducible
    for a fixed sparsity pattern.
    """
    prod = data * x[indices]
    # reduceat computes sequential per-row sums; rows are never empty here
    # (every assembled operator stores its diagonal).
    y = np.add.reduceat(prod, indptr[:-1])
    return y


def pcg_jacobi(indptr, indices, data, b, inv_diag, tol, max_iter, x0=None):
    """Jacobi-preconditioned conjugate gradients for an SPD CSR matrix.

    Returns ``(x, relres, iters, flag)`` with flag 0 on convergence, 1 on
    iteration exhaustion and 2 when a non-positive curvature p'Ap <= 0 is
    met (the matrix is not SPD).  The relative residual is measured
    against ||b||; on convergence the true residual is re-checked.
    """
    n = b.shape[0]
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return np.zeros(n), 0.0, 0, 0

    if x0 is None:
        x = np.zeros(n)
        r = b.copy()
    else:
        x = np.array(x0, dtype=np.float64, copy=True)
        r = b - csr_matvec(indptr, indices, data, x)

    iters = 0
    relres = np.linalg.norm(r) / bnorm
    if relres <= tol:
        return x, relres, iters, 0

    z = inv_diag * r
    p = z.copy()
    rz = float(r @ z)
    while iters < max_iter:
        Ap = csr_matvec(indptr, indices, data, p)
        pAp = float(p @ Ap)
        if pAp <= 0.0:
            return x, relres, iters, 2
        alpha = rz / pAp
        x += alpha * p
        r -= alpha * Ap
        iters += 1
        relres = np.linalg.norm(r) / bnorm
        if relres <= tol:
            # guard against drift of the recursive residual
            r = b - csr_matvec(indptr, indices, data, x)
            relres = np.linalg.norm(r) / bnorm
            if relres <= tol:
                return x, relres, iters, 0
        z = inv_diag * r
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new
    return x, relres, iters, 1


def quartic_sum(tris, re_full, im_full, bary, weights, areas):
    """Integral of |u|^4 over the mesh by the per-triangle quadrature rule.

    ``re_full``/``im_full`` are nodal values over all mesh nodes (boundary
    included), ``bary`` the (nq, 3) barycentric quadrature points, which
    double as the P1 basis values.
    """
    re_q = re_full[tris] @ bary.T  # (ntri, nq)
    im_q = im_full[tris] @ bary.T
    dens = re_q * re_q + im_q * im_q
    return float(areas @ ((dens * dens) @ weights))


def quartic_line_coeffs(tris, re_u, im_u, re_d, im_d, bary, weights, areas):
    """Coefficients c of t -> integral |u + t d|^4 = sum_k c[k] t^k.

    Exact at quadrature level: with p = |u|^2, q = Re(u conj(d)),
    r = |d|^2 pointwise, the integrand is (p + 2tq + t^2 r)^2.
    """
    ru = re_u[tris] @ bary.T
    iu = im_u[tris] @ bary.T
    rd = re_d[tris] @ bary.T
    id_ = im_d[tris] @ bary.T
    p = ru * ru + iu * iu
    q = ru * rd + iu * id_
    r = rd * rd + id_ * id_

    def integ(f):
        return float(areas @ (f @ weights))

    c = np.empty(5)
    c[0] = integ(p * p)
    c[1] = 4.0 * integ(p * q)
    c[2] = integ(4.0 * q * q + 2.0 * p * r)
    c[3] = 4.0 * integ(q * r)
    c[4] = integ(r * r)
    return c
