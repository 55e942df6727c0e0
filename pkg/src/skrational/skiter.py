"""Linearized, classic Sanathanan-Koerner, and stabilized SK rational fitting.

All three solvers reduce each step to a homogeneous least-squares problem
``min ||A v||`` over unit vectors ``v = (a; b)``, solved by the SVD.  They
differ in how the denominator weight enters ``A``:

* ``fit_linearized`` uses no weight.
* ``fit_sk`` scales the rows of ``[P, -diag(y) Q]`` by ``1/(Q b)``, with
  fixed orthonormal ``P`` and ``Q``.  The row scaling can make the system
  very ill-conditioned.
* ``fit_stabilized_sk`` instead folds the weight into the starting vector
  of the Arnoldi process, so ``P`` and ``Q`` are re-orthonormalized with
  respect to the weight at every step.
"""
from __future__ import annotations

import csv
import io
import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import Breakdown, RankDeficientWarning, ZeroDenominatorWarning
from .polybasis import PointSet, fit_arnoldi
from .rational import RationalFit

__all__ = [
    "SolveDiagnostics",
    "IterationRecord",
    "FitHistory",
    "solve_homogeneous",
    "fit_linearized",
    "fit_sk",
    "fit_stabilized_sk",
]

log = logging.getLogger(__name__)

RANK_TOL = 1e-14
#: denominator entries smaller than this fraction of the largest are clamped
ZERO_DEN_TOL = 1e-30


@dataclass
class SolveDiagnostics:
    singular_values: np.ndarray
    cond: float
    non_unique: bool = False


def solve_homogeneous(A):
    """Unit vector minimizing ``||A v||_2``.

    Returns the right singular vector of the smallest singular value with its
    largest-modulus entry rotated to be real and positive, together with
    :class:`SolveDiagnostics`.  ``cond`` is ``s[0] / (s[-2] - s[-1])``, the
    sensitivity of that singular vector to perturbations of ``A``.
    """
    A = np.asarray(A)
    M, N = A.shape
    if N < 2 or M < N:
        raise ValueError(f"need M >= N >= 2, got A with shape {A.shape}")
    _, s, Vh = np.linalg.svd(A, full_matrices=False)
    v = Vh[-1].conj()
    big = np.argmax(np.abs(v))
    v = v * (abs(v[big]) / v[big])
    v[big] = abs(v[big])
    gap = s[-2] - s[-1]
    cond = float(s[0] / gap) if gap > 0 else np.inf
    non_unique = bool(s[-2] <= RANK_TOL * s[0] and s[-1] <= RANK_TOL * s[0])
    if non_unique:
        warnings.warn("homogeneous least-squares problem has a multi-dimensional null space; "
                      "returned solution is not unique", RankDeficientWarning, stacklevel=2)
    return v, SolveDiagnostics(singular_values=s, cond=cond, non_unique=non_unique)


@dataclass
class IterationRecord:
    iteration: int
    residual_norm: float
    step_norm: float
    cond: float
    a: np.ndarray = field(repr=False)
    b: np.ndarray = field(repr=False)


@dataclass
class FitHistory:
    """Per-iteration record of an SK-type run."""

    records: list = field(default_factory=list)
    termination: str = "maxiter"

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def best_iteration(self):
        """Position (0-based) of the first record with the smallest residual."""
        if not self.records:
            return None
        return int(np.argmin([rec.residual_norm for rec in self.records]))

    @property
    def residual_norms(self):
        return np.array([rec.residual_norm for rec in self.records])

    @property
    def conds(self):
        return np.array([rec.cond for rec in self.records])

    def to_csv(self, path=None):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["iter", "residual_norm", "step_norm", "cond"])
        for rec in self.records:
            writer.writerow([rec.iteration] + [f"{x:.16e}" for x in
                                               (rec.residual_norm, rec.step_norm, rec.cond)])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def _check_sizes(points, num_idx, den_idx):
    if points.dim != num_idx.dim or points.dim != den_idx.dim:
        raise ValueError("index set dimensions must match the data dimension")
    need = len(num_idx) + len(den_idx)
    if points.M < need:
        raise ValueError(f"need at least {need} points for degrees {num_idx.degree}, "
                         f"{den_idx.degree}; got {points.M}")
    return points.require_y().astype(complex)


def _split(v, n_num):
    return v[:n_num].copy(), v[n_num:].copy()


def _ratio(num, den):
    with np.errstate(divide="ignore", invalid="ignore"):
        return num / den


def _residual(y, r):
    res = float(np.linalg.norm(y - r))
    return res if np.isfinite(res) else np.inf


def _clamp(den, where):
    """Lift entries with ``|den| < ZERO_DEN_TOL * max|den|`` to that floor, keeping phase."""
    mag = np.abs(den)
    floor = ZERO_DEN_TOL * mag.max()
    small = mag < floor
    if not np.any(small):
        return den
    if floor == 0:
        floor = ZERO_DEN_TOL
    warnings.warn(f"{where}: clamped {small.sum()} near-zero denominator entries",
                  ZeroDenominatorWarning, stacklevel=3)
    den = den.copy()
    phase = np.where(mag[small] > 0, den[small] / np.where(mag[small] > 0, mag[small], 1), 1.0)
    den[small] = floor * phase
    return den


def _make_fit(Pb, Qb, a, b, solver, iteration, residual):
    return RationalFit(num_R=Pb.R, num_indices=Pb.indices, den_R=Qb.R, den_indices=Qb.indices,
                       a=a, b=b, meta={"solver": solver, "iteration": iteration,
                                       "residual_norm": residual})


def fit_linearized(points, num_idx, den_idx):
    """Solve ``min ||P a - diag(y) Q b||`` once, with unweighted Arnoldi bases."""
    y = _check_sizes(points, num_idx, den_idx)
    ones = np.ones(points.M)
    Pb = fit_arnoldi(points, ones, num_idx)
    Qb = fit_arnoldi(points, ones, den_idx)
    A = np.hstack([Pb.Q, -y[:, None] * Qb.Q])
    v, diag = solve_homogeneous(A)
    a, b = _split(v, Pb.N)
    res = _residual(y, _ratio(Pb.Q @ a, Qb.Q @ b))
    fit = _make_fit(Pb, Qb, a, b, "linearized", 1, res)
    fit.meta["cond"] = diag.cond
    return fit


def fit_sk(points, num_idx, den_idx, maxiter=20, convergence_tol=0.0):
    """Classic SK iteration with explicit row weighting ``diag(Q b^l)^{-1}``.

    The orthonormal bases are computed once (unit weight); the first step
    therefore coincides with :func:`fit_linearized`.  Returns the best
    iterate and the full :class:`FitHistory`.
    """
    y = _check_sizes(points, num_idx, den_idx)
    ones = np.ones(points.M)
    Pb = fit_arnoldi(points, ones, num_idx)
    Qb = fit_arnoldi(points, ones, den_idx)
    base = np.hstack([Pb.Q, -y[:, None] * Qb.Q])
    ynorm = np.linalg.norm(y)
    history = FitHistory()
    den = np.ones(points.M, dtype=complex)
    r_prev = None
    best = None
    for it in range(1, maxiter + 1):
        v, diag = solve_homogeneous(base / den[:, None])
        a, b = _split(v, Pb.N)
        qb = Qb.Q @ b
        r = _ratio(Pb.Q @ a, qb)
        res = _residual(y, r)
        step = np.nan if r_prev is None else _residual(r, r_prev)
        history.records.append(IterationRecord(it, res, step, diag.cond, a, b))
        if best is None or res < best[0]:
            best = (res, it, a, b)
        r_prev = r
        if step <= convergence_tol * ynorm:
            history.termination = "converged"
            break
        den = _clamp(qb, f"SK iteration {it}")
    res, it, a, b = best
    return _make_fit(Pb, Qb, a, b, "sk", it, res), history


def fit_stabilized_sk(points, num_idx, den_idx, maxiter=20, convergence_tol=0.0, w0=None,
                      callback=None):
    """Stabilized SK iteration.

    Each step rebuilds both bases with Arnoldi seeded by the current weight
    ``w``, solves the unweighted homogeneous problem in those bases, and
    updates ``w <- w / (Q b)``, which makes ``w`` the reciprocal of the
    current denominator polynomial at the sample points.

    Parameters
    ----------
    points : PointSet
        Samples with responses.
    num_idx, den_idx : MultiIndexSet
        Numerator and denominator index sets.
    maxiter : int
        Number of iterations; twenty is usually enough.
    convergence_tol : float
        Stop once ``||r^l - r^{l-1}|| <= convergence_tol * ||y||``.  The
        default of zero runs all ``maxiter`` steps unless the iterate stops
        changing exactly.
    w0 : array_like, optional
        Initial weight (defaults to ones).
    callback : callable, optional
        Called as ``callback(iteration, P_basis, Q_basis, a, b)`` after every
        solve; the bases are the :class:`OrthoBasis` objects of that step.

    Returns
    -------
    fit : RationalFit
        The iterate with the smallest residual, carrying that iteration's
        recurrence matrices.
    history : FitHistory
    """
    y = _check_sizes(points, num_idx, den_idx)
    w = np.ones(points.M, dtype=complex) if w0 is None else np.asarray(w0, dtype=complex).copy()
    ynorm = np.linalg.norm(y)
    history = FitHistory()
    r_prev = None
    best = None
    for it in range(1, maxiter + 1):
        try:
            Pb = fit_arnoldi(points, w, num_idx)
            Qb = fit_arnoldi(points, w, den_idx)
        except Breakdown as exc:
            if best is None:
                raise
            log.warning("stabilized SK stopped at iteration %d: %s", it, exc)
            history.termination = "breakdown"
            break
        A = np.hstack([Pb.Q, -y[:, None] * Qb.Q])
        v, diag = solve_homogeneous(A)
        a, b = _split(v, Pb.N)
        qb = Qb.Q @ b
        r = _ratio(Pb.Q @ a, qb)
        res = _residual(y, r)
        step = np.nan if r_prev is None else _residual(r, r_prev)
        history.records.append(IterationRecord(it, res, step, diag.cond, a, b))
        if callback is not None:
            callback(it, Pb, Qb, a, b)
        if best is None or res < best[0]:
            best = (res, it, Pb, Qb, a, b)
        r_prev = r
        if step <= convergence_tol * ynorm:
            history.termination = "converged"
            break
        w = w / _clamp(qb, f"stabilized SK iteration {it}")
    res, it, Pb, Qb, a, b = best
    fit = _make_fit(Pb, Qb, a, b, "ssk", it, res)
    return fit, history
