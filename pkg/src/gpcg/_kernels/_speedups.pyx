# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: CSR matvec, Jacobi-PCG and quartic quadrature.

Mirrors the contracts of ``_numpy_impl``.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

BACKEND = "compiled"

ctypedef cnp.int32_t ITYPE
ctypedef cnp.float64_t DTYPE


cdef void _matvec(const ITYPE[::1] indptr, const ITYPE[::1] indices,
                  const DTYPE[::1] data, const DTYPE[::1] x,
                  DTYPE[::1] out) noexcept nogil:
    cdef Py_ssize_t i, k
    cdef double acc
    cdef Py_ssize_t n = indptr.shape[0] - 1
    for i in range(n):
        acc = 0.0
        for k in range(indptr[i], indptr[i + 1]):
            acc += data[k] * x[indices[k]]
        out[i] = acc


def csr_matvec(ITYPE[::1] indptr, ITYPE[::1] indices, DTYPE[::1] data,
               DTYPE[::1] x):
    out = np.empty(indptr.shape[0] - 1)
    cdef DTYPE[::1] mv = out
    _matvec(indptr, indices, data, x, mv)
    return out


cdef double _dot(const DTYPE[::1] a, const DTYPE[::1] b) noexcept nogil:
    cdef Py_ssize_t i
    cdef double acc = 0.0
    for i in range(a.shape[0]):
        acc += a[i] * b[i]
    return acc


def pcg_jacobi(ITYPE[::1] indptr, ITYPE[::1] indices, DTYPE[::1] data,
               DTYPE[::1] b, DTYPE[::1] inv_diag, double tol,
               long max_iter, x0=None):
    cdef Py_ssize_t n = b.shape[0]
    cdef Py_ssize_t i
    cdef long iters = 0
    cdef double bnorm, relres, rz, rz_new, pAp, alpha, beta

    bnorm = sqrt(_dot(b, b))
    if bnorm == 0.0:
        return np.zeros(n), 0.0, 0, 0

    x_arr = np.zeros(n) if x0 is None else np.array(x0, dtype=np.float64)
    r_arr = np.empty(n)
    z_arr = np.empty(n)
    p_arr = np.empty(n)
    Ap_arr = np.empty(n)
    cdef DTYPE[::1] x = x_arr
    cdef DTYPE[::1] r = r_arr
    cdef DTYPE[::1] z = z_arr
    cdef DTYPE[::1] p = p_arr
    cdef DTYPE[::1] Ap = Ap_arr

    if x0 is None:
        for i in range(n):
            r[i] = b[i]
    else:
        _matvec(indptr, indices, data, x, Ap)
        for i in range(n):
            r[i] = b[i] - Ap[i]

    relres = sqrt(_dot(r, r)) / bnorm
    if relres <= tol:
        return x_arr, relres, 0, 0

    for i in range(n):
        z[i] = inv_diag[i] * r[i]
        p[i] = z[i]
    rz = _dot(r, z)

    while iters < max_iter:
        _matvec(indptr, indices, data, p, Ap)
        pAp = _dot(p, Ap)
        if pAp <= 0.0:
            return x_arr, relres, iters, 2
        alpha = rz / pAp
        for i in range(n):
            x[i] += alpha * p[i]
            r[i] -= alpha * Ap[i]
        iters += 1
        relres = sqrt(_dot(r, r)) / bnorm
        if relres <= tol:
            # re-check against the true residual before accepting
            _matvec(indptr, indices, data, x, Ap)
            for i in range(n):
                r[i] = b[i] - Ap[i]
            relres = sqrt(_dot(r, r)) / bnorm
            if relres <= tol:
                return x_arr, relres, iters, 0
        for i in range(n):
            z[i] = inv_diag[i] * r[i]
        rz_new = _dot(r, z)
        beta = rz_new / rz
        for i in range(n):
            p[i] = z[i] + beta * p[i]
        rz = rz_new
    return x_arr, relres, iters, 1


def quartic_sum(ITYPE[:, ::1] tris, DTYPE[::1] re_full, DTYPE[::1] im_full,
                DTYPE[:, ::1] bary, DTYPE[::1] weights, DTYPE[::1] areas):
    cdef Py_ssize_t e, q, a
    cdef Py_ssize_t ntri = tris.shape[0]
    cdef Py_ssize_t nq = bary.shape[0]
    cdef double acc = 0.0, loc, rq, iq, dens
    for e in range(ntri):
        loc = 0.0
        for q in range(nq):
            rq = 0.0
            iq = 0.0
            for a in range(3):
                rq += bary[q, a] * re_full[tris[e, a]]
                iq += bary[q, a] * im_full[tris[e, a]]
            dens = rq * rq + iq * iq
            loc += weights[q] * dens * dens
        acc += areas[e] * loc
    return acc


def quartic_line_coeffs(ITYPE[:, ::1] tris, DTYPE[::1] re_u, DTYPE[::1] im_u,
                        DTYPE[::1] re_d, DTYPE[::1] im_d, DTYPE[:, ::1] bary,
                        DTYPE[::1] weights, DTYPE[::1] areas):
    cdef Py_ssize_t e, q, a
    cdef Py_ssize_t ntri = tris.shape[0]
    cdef Py_ssize_t nq = bary.shape[0]
    cdef double ru, iu, rd, id_
    cdef double p, qq, r, w
    cdef double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0
    cdef double l0, l1, l2, l3, l4
    for e in range(ntri):
        l0 = l1 = l2 = l3 = l4 = 0.0
        for q in range(nq):
            ru = 0.0
            iu = 0.0
            rd = 0.0
            id_ = 0.0
            for a in range(3):
                w = bary[q, a]
                ru += w * re_u[tris[e, a]]
                iu += w * im_u[tris[e, a]]
                rd += w * re_d[tris[e, a]]
                id_ += w * im_d[tris[e, a]]
            p = ru * ru + iu * iu
            qq = ru * rd + iu * id_
            r = rd * rd + id_ * id_
            w = weights[q]
            l0 += w * p * p
            l1 += w * p * qq
            l2 += w * (4.0 * qq * qq + 2.0 * p * r)
            l3 += w * qq * r
            l4 += w * r * r
        c0 += areas[e] * l0
        c1 += areas[e] * l1
        c2 += areas[e] * l2
        c3 += areas[e] * l3
        c4 += areas[e] * l4
    out = np.empty(5)
    out[0] = c0
    out[1] = 4.0 * c1
    out[2] = c2
    out[3] = 4.0 * c3
    out[4] = c4
    return out
