# cython: boundscheck=False, wraparound=False, cdivision=True
"""BLAS-backed inner loop for alternating gradient descent.

Same contract as ``numpy_backend.run_block``; the whole block runs without
the GIL so concurrent trials parallelize across threads.  Row-major arrays
are handed to column-major BLAS in transposed view, which needs no copies.
"""

import numpy as np

from libc.math cimport isfinite
from scipy.linalg.cython_blas cimport daxpy, dcopy, ddot, dgemm, dsyrk
from scipy.linalg.cython_lapack cimport dsyev

from .result import STATUS_NONFINITE, STATUS_OK, STATUS_TARGET, BlockResult

NAME = "cython"

cdef int C_OK = 0
cdef int C_TARGET = 1
cdef int C_NONFINITE = 2


cdef double _lam_max(double* fac, int rows, int d, double* gram,
                     double* w, double* work, int lwork) nogil:
    # Largest eigenvalue of fac^T fac (fac is rows x d row-major).
    cdef int info = 0
    cdef double zero = 0.0, one = 1.0
    dsyrk("L", "N", &d, &rows, &one, fac, &d, &zero, gram, &d)
    dsyev("N", "L", &d, gram, &d, w, work, &lwork, &info)
    if info != 0:
        return -1.0
    return w[d - 1]


cdef int _iterate(double* x, double* y, double* a,
                  int m, int n, int d,
                  double eta, int k, double target_f, bint need_norms,
                  double* r, double* gx, double* gy,
                  double* gram, double* w, double* work, int lwork,
                  double* f, double* gx2, double* gy2,
                  double* lamx, double* lamy, int* steps_out) nogil:
    cdef int j, mn = m * n, md = m * d, nd = n * d
    cdef int one_inc = 1
    cdef double one = 1.0, minus_one = -1.0, zero = 0.0
    cdef double neg_eta = -eta
    cdef double fj
    for j in range(k + 1):
        # r <- x y^T - a  (computed transposed: r^T = y x^T - a^T)
        dcopy(&mn, a, &one_inc, r, &one_inc)
        dgemm("T", "N", &n, &m, &d, &one, y, &d, x, &d, &minus_one, r, &n)
        fj = 0.5 * ddot(&mn, r, &one_inc, r, &one_inc)
        f[j] = fj
        if need_norms:
            lamx[j] = _lam_max(x, m, d, gram, w, work, lwork)
            lamy[j] = _lam_max(y, n, d, gram, w, work, lwork)
        if not isfinite(fj):
            steps_out[0] = j
            return C_NONFINITE
        if target_f >= 0.0 and fj <= target_f:
            steps_out[0] = j
            return C_TARGET
        if j == k:
            break
        # gx <- r y;  x <- x - eta gx
        dgemm("N", "N", &d, &m, &n, &one, y, &d, r, &n, &zero, gx, &d)
        gx2[j] = ddot(&md, gx, &one_inc, gx, &one_inc)
        daxpy(&md, &neg_eta, gx, &one_inc, x, &one_inc)
        # r <- x y^T - a with the updated x
        dcopy(&mn, a, &one_inc, r, &one_inc)
        dgemm("T", "N", &n, &m, &d, &one, y, &d, x, &d, &minus_one, r, &n)
        # gy <- r^T x;  y <- y - eta gy
        dgemm("N", "T", &d, &n, &m, &one, x, &d, r, &n, &zero, gy, &d)
        gy2[j] = ddot(&nd, gy, &one_inc, gy, &one_inc)
        daxpy(&nd, &neg_eta, gy, &one_inc, y, &one_inc)
    steps_out[0] = k
    return C_OK


def run_block(double[:, ::1] x, double[:, ::1] y, double[:, ::1] a,
              double eta, int max_steps, double target_f, bint need_norms):
    cdef int m = a.shape[0], n = a.shape[1], d = x.shape[1]
    if x.shape[0] != m or y.shape[0] != n or y.shape[1] != d:
        raise ValueError("inconsistent factor/target shapes")
    cdef int k = max_steps
    f_arr = np.empty(k + 1)
    gx2_arr = np.empty(k)
    gy2_arr = np.empty(k)
    lamx_arr = np.zeros(k + 1)
    lamy_arr = np.zeros(k + 1)
    r_buf = np.empty(m * n)
    gx_buf = np.empty(m * d)
    gy_buf = np.empty(n * d)
    gram_buf = np.empty(d * d)
    w_buf = np.empty(d)

    # LAPACK workspace query for the d x d symmetric eigensolver.
    cdef int info = 0, lwork = -1
    cdef double wk_query = 0.0
    cdef double[::1] gram_mv = gram_buf
    cdef double[::1] w_mv = w_buf
    dsyev("N", "L", &d, &gram_mv[0], &d, &w_mv[0], &wk_query, &lwork, &info)
    lwork = <int>wk_query
    if lwork < 3 * d:
        lwork = 3 * d
    work_buf = np.empty(lwork)

    cdef double[::1] f_mv = f_arr
    cdef double[::1] gx2_mv = gx2_arr
    cdef double[::1] gy2_mv = gy2_arr
    cdef double[::1] lamx_mv = lamx_arr
    cdef double[::1] lamy_mv = lamy_arr
    cdef double[::1] r_mv = r_buf
    cdef double[::1] gx_mv = gx_buf
    cdef double[::1] gy_mv = gy_buf
    cdef double[::1] work_mv = work_buf
    cdef int steps = 0
    cdef int status
    cdef double* gx2_p = &gx2_mv[0] if k > 0 else NULL
    cdef double* gy2_p = &gy2_mv[0] if k > 0 else NULL

    with nogil:
        status = _iterate(&x[0, 0], &y[0, 0], &a[0, 0], m, n, d,
                          eta, k, target_f, need_norms,
                          &r_mv[0], &gx_mv[0], &gy_mv[0],
                          &gram_mv[0], &w_mv[0], &work_mv[0], lwork,
                          &f_mv[0], gx2_p, gy2_p,
                          &lamx_mv[0], &lamy_mv[0], &steps)

    py_status = {C_OK: STATUS_OK, C_TARGET: STATUS_TARGET,
                 C_NONFINITE: STATUS_NONFINITE}[status]
    return BlockResult(
        steps=steps,
        status=py_status,
        f=f_arr[: steps + 1],
        gx2=gx2_arr[:steps],
        gy2=gy2_arr[:steps],
        lamx=lamx_arr[: steps + 1],
        lamy=lamy_arr[: steps + 1],
    )
