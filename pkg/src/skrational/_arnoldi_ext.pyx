# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Arnoldi kernels.

Same contract as ``_arnoldi_py``; the Gram-Schmidt projections go straight
to BLAS ``zgemv`` on column-major storage, skipping per-column temporaries.
"""
import numpy as np
from scipy.linalg.cython_blas cimport zgemv, dznrm2, zaxpy


def arnoldi_fit(double complex[::1, :] X, double complex[::1] w,
                int[::1] pred_k, int[::1] pred_j, double tol):
    cdef int M = X.shape[0]
    cdef int N = pred_k.shape[0]
    cdef int inc = 1
    cdef int ell, i, t, k, j
    cdef double start, rnorm, r00
    cdef char trans_c = b'C'
    cdef char trans_n = b'N'
    cdef double complex one = 1.0, zero = 0.0, minus_one = -1.0

    Q_arr = np.zeros((M, N), dtype=complex, order="F")
    R_arr = np.zeros((N, N), dtype=complex, order="F")
    cdef double complex[::1, :] Q = Q_arr
    cdef double complex[::1, :] R = R_arr
    cdef double complex[::1] v = np.empty(M, dtype=complex)
    cdef double complex[::1] s = np.empty(max(N, 1), dtype=complex)

    r00 = dznrm2(&M, &w[0], &inc)
    R[0, 0] = r00
    for i in range(M):
        Q[i, 0] = w[i] / r00

    for ell in range(1, N):
        k = pred_k[ell]
        j = pred_j[ell]
        for i in range(M):
            v[i] = X[i, j] * Q[i, k]
        start = dznrm2(&M, &v[0], &inc)
        for t in range(2):
            # s = Q[:, :ell]^H v ; v -= Q[:, :ell] s
            zgemv(&trans_c, &M, &ell, &one, &Q[0, 0], &M, &v[0], &inc, &zero, &s[0], &inc)
            zgemv(&trans_n, &M, &ell, &minus_one, &Q[0, 0], &M, &s[0], &inc, &one, &v[0], &inc)
            zaxpy(&ell, &one, &s[0], &inc, &R[0, ell], &inc)
        rnorm = dznrm2(&M, &v[0], &inc)
        if not rnorm > tol * start:
            return Q_arr, R_arr, ell, (rnorm / start if start > 0 else 0.0)
        R[ell, ell] = rnorm
        for i in range(M):
            Q[i, ell] = v[i] / rnorm
    return Q_arr, R_arr, -1, 1.0


def arnoldi_eval(double complex[::1, :] R, double complex[::1, :] Z,
                 int[::1] pred_k, int[::1] pred_j):
    cdef int M = Z.shape[0]
    cdef int N = R.shape[0]
    cdef int inc = 1
    cdef int ell, i, k, j
    cdef double complex rll
    cdef double dll
    cdef char trans_n = b'N'
    cdef double complex one = 1.0, minus_one = -1.0

    W_arr = np.zeros((M, N), dtype=complex, order="F")
    cdef double complex[::1, :] W = W_arr
    cdef double complex r00 = 1.0 / R[0, 0]
    for i in range(M):
        W[i, 0] = r00
    for ell in range(1, N):
        k = pred_k[ell]
        j = pred_j[ell]
        for i in range(M):
            W[i, ell] = Z[i, j] * W[i, k]
        zgemv(&trans_n, &M, &ell, &minus_one, &W[0, 0], &M, &R[0, ell], &inc, &one, &W[0, ell], &inc)
        rll = R[ell, ell]
        if rll.imag == 0:
            # the fitted diagonal is real: avoid the general complex division
            dll = rll.real
            for i in range(M):
                W[i, ell] = W[i, ell] / dll
        else:
            for i in range(M):
                W[i, ell] = W[i, ell] / rll
    return W_arr
