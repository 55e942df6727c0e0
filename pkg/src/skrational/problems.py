"""Deterministic test problems: |x|, exp, tan(256x), a 2-D rational-like
function, and the one- and two-parameter Penzl transfer functions."""
from __future__ import annotations

import numpy as np

from .polybasis import PointSet

__all__ = [
    "penzl_eval",
    "penzl_dense",
    "gen_abs",
    "gen_exp",
    "gen_tan",
    "gen_exp2d",
    "gen_penzl1",
    "gen_penzl2",
    "GENERATORS",
]

PENZL_STATES = 1006
_DIAG = np.arange(1, 1001, dtype=float)


def _block(z, omega):
    # c^T (zI - [[-1, w], [-w, -1]])^{-1} b with b = c = [10, 10]
    return 200.0 * (z + 1) / ((z + 1) ** 2 + omega ** 2)


def penzl_eval(variant, z, params):
    """Transfer function of the Penzl model, in closed form.

    ``variant`` is ``'one'`` (params ``(t,)``) or ``'two'`` (params ``(t, u)``).
    Broadcasts over array arguments.
    """
    z = np.asarray(z, dtype=complex)
    if variant in ("one", 1, "penzl1"):
        (t,) = params
        w2, w3 = 200.0, 400.0
    elif variant in ("two", 2, "penzl2"):
        t, u = params
        w2, w3 = np.asarray(u, dtype=float), 2.0 * np.asarray(u, dtype=float)
    else:
        raise ValueError(f"unknown Penzl variant {variant!r}")
    t = np.asarray(t, dtype=float)
    tail = np.sum(1.0 / (z[..., None] + _DIAG), axis=-1)
    return _block(z, t) + _block(z, w2) + _block(z, w3) + tail


def penzl_matrices(variant, params):
    """Dense ``(A, b, c)`` realization; used only to validate :func:`penzl_eval`."""
    if variant in ("one", 1, "penzl1"):
        (t,) = params
        omegas = (t, 200.0, 400.0)
    else:
        t, u = params
        omegas = (t, u, 2.0 * u)
    A = np.zeros((PENZL_STATES, PENZL_STATES))
    for i, om in enumerate(omegas):
        A[2 * i:2 * i + 2, 2 * i:2 * i + 2] = [[-1.0, om], [-om, -1.0]]
    A[6:, 6:] = -np.diag(_DIAG)
    b = np.concatenate([np.full(6, 10.0), np.ones(1000)])
    return A, b, b.copy()


def penzl_dense(variant, z, params):
    A, b, c = penzl_matrices(variant, params)
    x = np.linalg.solve(z * np.eye(PENZL_STATES) - A, b.astype(complex))
    return c @ x


def gen_abs(M=20000):
    x = np.linspace(-1.0, 1.0, M)
    return PointSet(x[:, None], np.abs(x))


def gen_exp(M=2000):
    x = -np.logspace(-3, 4, M)
    return PointSet(x[:, None], np.exp(x))


def gen_tan(M=1000):
    x = np.exp(2j * np.pi * np.arange(M) / M)
    return PointSet(x[:, None], np.tan(256 * x))


def exp2d(x1, x2):
    return np.exp(x1 * x2) / ((x1 - 1.2) * (x1 + 1.2) * (x2 - 1.2) * (x2 + 1.2))


def gen_exp2d(M=1000, seed=0):
    """Uniform random points on ``[-1, 1]^2``.

    Points come from ``numpy.random.Generator(PCG64(seed)).uniform(-1, 1, (M, 2))``;
    an exact endpoint draw is redrawn so every point is strictly interior.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    X = rng.uniform(-1.0, 1.0, size=(M, 2))
    edge = np.abs(X) >= 1.0
    while np.any(edge):
        X[edge] = rng.uniform(-1.0, 1.0, size=edge.sum())
        edge = np.abs(X) >= 1.0
    return PointSet(X, exp2d(X[:, 0], X[:, 1]))


def gen_penzl1(Mz=100, Mt=30):
    """Tensor grid ``(omega, t)`` with ``z = i omega``; omega log-spaced on
    ``[0.1, 1000]``, t uniform on ``[10, 100]``.  Omega varies slowest."""
    omega = np.logspace(-1, 3, Mz)
    t = np.linspace(10, 100, Mt)
    W, T = np.meshgrid(omega, t, indexing="ij")
    X = np.column_stack([W.ravel(), T.ravel()])
    return PointSet(X, penzl_eval("one", 1j * X[:, 0], (X[:, 1],)))


def gen_penzl2(Mz=100, Mt=10, Mu=10):
    """Tensor grid ``(omega, t, u)``; omega log-spaced on ``[1, 2000]``,
    t on ``[10, 100]`` and u on ``[150, 250]`` equispaced."""
    omega = np.logspace(0, np.log10(2000), Mz)
    t = np.linspace(10, 100, Mt)
    u = np.linspace(150, 250, Mu)
    W, T, U = np.meshgrid(omega, t, u, indexing="ij")
    X = np.column_stack([W.ravel(), T.ravel(), U.ravel()])
    return PointSet(X, penzl_eval("two", 1j * X[:, 0], (X[:, 1], X[:, 2])))


GENERATORS = {
    "abs": gen_abs,
    "exp": gen_exp,
    "tan": gen_tan,
    "exp2d": gen_exp2d,
    "penzl1": gen_penzl1,
    "penzl2": gen_penzl2,
}
