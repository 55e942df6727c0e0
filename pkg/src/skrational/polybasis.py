"""Discrete orthonormal polynomial bases via (multivariate) Vandermonde with Arnoldi.

The heavy lifting lives in one of two interchangeable kernels: a compiled
Cython module calling BLAS directly, or a pure NumPy fallback.  The compiled
kernel is used when it imports; set ``SKRATIONAL_BACKEND=python`` to force
the fallback, or call :func:`set_backend`.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import _arnoldi_py
from .errors import Breakdown, DegenerateR, MissingResponses
from .multiindex import MultiIndexSet

try:
    from . import _arnoldi_ext
except ImportError:  # extension not built
    _arnoldi_ext = None

__all__ = [
    "PointSet",
    "OrthoBasis",
    "fit_arnoldi",
    "eval_arnoldi",
    "available_backends",
    "get_backend",
    "set_backend",
    "BREAKDOWN_TOL",
]

#: relative remainder below which a new Arnoldi column is declared lost
BREAKDOWN_TOL = 1e-14

_BACKENDS = {"python": _arnoldi_py}
if _arnoldi_ext is not None:
    _BACKENDS["compiled"] = _arnoldi_ext


def available_backends():
    return sorted(_BACKENDS)


def _initial_backend():
    requested = os.environ.get("SKRATIONAL_BACKEND", "").strip().lower()
    if requested:
        if requested not in _BACKENDS:
            raise ImportError(f"SKRATIONAL_BACKEND={requested!r} is not available "
                              f"(have {available_backends()})")
        return requested
    return "compiled" if "compiled" in _BACKENDS else "python"


_active = _initial_backend()


def get_backend():
    """Name of the kernel currently in use: ``'compiled'`` or ``'python'``."""
    return _active


def set_backend(name):
    """Select the Arnoldi kernel; returns the previous backend name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    previous, _active = _active, name
    return previous


def _kernel():
    return _BACKENDS[_active]


def as_points(X):
    """Coerce to an ``(M, d)`` column-major complex array."""
    X = np.asarray(X)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValueError(f"points must be 1-D or 2-D, got shape {X.shape}")
    return np.asfortranarray(X, dtype=complex)


@dataclass(frozen=True)
class PointSet:
    """Sample points ``X`` (M x d) and optional responses ``y`` (length M)."""

    X: np.ndarray
    y: np.ndarray | None = None

    def __post_init__(self):
        X = np.asarray(self.X)
        if X.ndim == 1:
            X = X[:, None]
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError(f"points must be a non-empty M x d array, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError("points contain NaN or Inf")
        object.__setattr__(self, "X", X)
        if self.y is not None:
            y = np.asarray(self.y).reshape(-1)
            if y.shape[0] != X.shape[0]:
                raise ValueError(f"{X.shape[0]} points but {y.shape[0]} responses")
            if not np.all(np.isfinite(y)):
                raise ValueError("responses contain NaN or Inf")
            object.__setattr__(self, "y", y)

    @property
    def M(self):
        return self.X.shape[0]

    @property
    def dim(self):
        return self.X.shape[1]

    @property
    def is_real(self):
        return not (np.iscomplexobj(self.X) and np.any(self.X.imag != 0))

    def require_y(self):
        if self.y is None:
            raise MissingResponses("point set has no responses")
        return self.y


@dataclass(frozen=True)
class OrthoBasis:
    """Orthonormal basis ``Q`` with recurrence coefficients ``R``.

    ``Q[:, 0]`` is the normalized weight; column ``l`` is built from column
    ``k`` times coordinate ``j`` where ``(k, j)`` is the predecessor of
    ``indices[l]``.
    """

    Q: np.ndarray
    R: np.ndarray
    indices: MultiIndexSet
    weight: np.ndarray = field(repr=False)

    @property
    def N(self):
        return self.Q.shape[1]

    def eval(self, Z):
        return eval_arnoldi(self.R, self.indices, Z)


def fit_arnoldi(points, w, indices):
    """Build an orthonormal basis for ``diag(w) V`` on ``points``.

    Parameters
    ----------
    points : PointSet or array_like, shape (M, d)
    w : array_like, shape (M,)
        Weight vector seeding the first column.
    indices : MultiIndexSet
        Prefix-closed ordering of the monomials spanning ``V``.

    Returns
    -------
    OrthoBasis

    Raises
    ------
    Breakdown
        If a column's remainder after orthogonalization is below
        ``BREAKDOWN_TOL`` of its starting norm.
    """
    X = as_points(points.X if isinstance(points, PointSet) else points)
    M, d = X.shape
    if d != indices.dim:
        raise ValueError(f"points have dimension {d} but index set has {indices.dim}")
    N = len(indices)
    if M < N:
        raise ValueError(f"need at least {N} points for {N} basis functions, got {M}")
    w = np.ascontiguousarray(w, dtype=complex).reshape(-1)
    if w.shape[0] != M:
        raise ValueError(f"weight has length {w.shape[0]}, expected {M}")
    if not np.any(w):
        raise ValueError("weight vector is zero")
    pk, pj = indices.predecessors
    Q, R, fail, ratio = _kernel().arnoldi_fit(X, w, pk, pj, BREAKDOWN_TOL)
    if fail >= 0:
        raise Breakdown(fail, ratio)
    return OrthoBasis(Q=Q, R=R, indices=indices, weight=w)


def eval_arnoldi(R, indices, Z):
    """Evaluate the polynomial basis encoded by ``R`` at new points ``Z``.

    Returns an ``(M', N)`` matrix ``W``.  At the training points,
    ``diag(w) @ W`` reproduces the fitted ``Q``; the weight itself is not
    part of ``W``.
    """
    Z = as_points(Z)
    if Z.shape[1] != indices.dim:
        raise ValueError(f"points have dimension {Z.shape[1]} but index set has {indices.dim}")
    R = np.asfortranarray(R, dtype=complex)
    if R.shape != (len(indices), len(indices)):
        raise ValueError(f"R has shape {R.shape}, expected {(len(indices),) * 2}")
    zero = np.flatnonzero(np.diag(R) == 0)
    if zero.size:
        raise DegenerateR(int(zero[0]))
    pk, pj = indices.predecessors
    return _kernel().arnoldi_eval(R, Z, pk, pj)


def monomial_vandermonde(X, indices):
    """Plain monomial matrix ``[x^alpha]``; only for tests and small checks."""
    X = as_points(X)
    A = indices.as_array()
    return np.prod(X[:, None, :] ** A[None, :, :], axis=2)


def affine_rescale(X):
    """Per-coordinate ``(center, scale)`` mapping the points into ``[-1, 1]``.

    Real coordinates use the midpoint and half-width of their range; complex
    coordinates use the bounding-box center and the largest distance from it.
    Degenerate (constant) coordinates get scale one.
    """
    X = as_points(X)
    center = np.empty(X.shape[1], dtype=complex)
    scale = np.empty(X.shape[1], dtype=complex)
    for i in range(X.shape[1]):
        col = X[:, i]
        if np.all(col.imag == 0):
            lo, hi = col.real.min(), col.real.max()
            center[i], half = (lo + hi) / 2, (hi - lo) / 2
        else:
            center[i] = complex((col.real.min() + col.real.max()) / 2,
                                (col.imag.min() + col.imag.max()) / 2)
            half = np.abs(col - center[i]).max()
        scale[i] = half if half > 0 else 1.0
    return center, scale
