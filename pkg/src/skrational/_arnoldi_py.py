"""Pure NumPy Arnoldi kernels (fallback backend).

Both backends share one calling convention: inputs are validated and
converted by :mod:`skrational.polybasis`; the kernels only compute.
"""
import numpy as np


def arnoldi_fit(X, w, pred_k, pred_j, tol):
    """Weighted multivariate Vandermonde with Arnoldi.

    Returns ``(Q, R, fail)`` where ``fail`` is the first column whose
    remainder after two Gram-Schmidt passes dropped below ``tol`` times its
    starting norm (``-1`` if none) together with that ratio.
    """
    M = X.shape[0]
    N = len(pred_k)
    Q = np.zeros((M, N), dtype=complex, order="F")
    R = np.zeros((N, N), dtype=complex, order="F")
    R[0, 0] = np.linalg.norm(w)
    Q[:, 0] = w / R[0, 0]
    for ell in range(1, N):
        v = X[:, pred_j[ell]] * Q[:, pred_k[ell]]
        start = np.linalg.norm(v)
        Qp = Q[:, :ell]
        for _ in range(2):
            s = Qp.conj().T @ v
            v -= Qp @ s
            R[:ell, ell] += s
        rnorm = np.linalg.norm(v)
        if not rnorm > tol * start:
            return Q, R, ell, (rnorm / start if start > 0 else 0.0)
        R[ell, ell] = rnorm
        Q[:, ell] = v / rnorm
    return Q, R, -1, 1.0


def arnoldi_eval(R, Z, pred_k, pred_j):
    """Evaluate the basis encoded by ``R`` at new points ``Z`` (single pass)."""
    M = Z.shape[0]
    N = R.shape[0]
    W = np.zeros((M, N), dtype=complex, order="F")
    W[:, 0] = 1.0 / R[0, 0]
    for ell in range(1, N):
        v = Z[:, pred_j[ell]] * W[:, pred_k[ell]]
        v -= W[:, :ell] @ R[:ell, ell]
        W[:, ell] = v / R[ell, ell]
    return W
