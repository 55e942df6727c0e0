"""Levenberg-Marquardt refinement of a rational fit to a local least-squares optimum.

The objective ``||y - diag(Q b)^{-1} P a||`` is invariant under joint scaling
of ``(a, b)``, so its Jacobian is rank deficient.  The refinement freezes the
largest-modulus entry of ``b`` and optimizes the remaining coefficients.

The bases ``P`` and ``Q`` are those of the input fit, evaluated from its
recurrence matrices.  Any Arnoldi weight cancels between numerator and
denominator, so residual and Jacobian coincide with those formed from the
weighted bases of the producing iteration.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import PoleAtSample
from .polybasis import PointSet, eval_arnoldi
from .rational import _prepare

__all__ = ["RefineOptions", "RefineReport", "residual_vector", "jacobian", "refine_lsq"]


@dataclass(frozen=True)
class RefineOptions:
    """Stopping rules and damping for :func:`refine_lsq`.

    ``gradient_tol`` is relative: the test is
    ``max|J^T f| <= gradient_tol * ||f|| * max_k ||J[:, k]||``.
    ``residual_tol`` stops immediately once ``||f|| <= residual_tol * ||y||``
    (nothing left to gain).  ``real=None`` picks real-only updates when
    points, responses and coefficients are all real.
    """

    max_iterations: int = 100
    gradient_tol: float = 1e-10
    step_tol: float = 1e-12
    initial_damping: float = 1e-6
    residual_tol: float = 1e-14
    real: bool | None = None

    def __post_init__(self):
        for name in ("gradient_tol", "step_tol", "initial_damping", "residual_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")


@dataclass
class RefineReport:
    iterations: int
    residual_trace: list
    gradient_norm: float
    reason: str
    frozen_index: int
    real: bool
    stalled_at_pole: bool = False
    rejected_steps: int = 0

    def to_dict(self):
        return asdict(self)

    def to_json(self):
        return json.dumps(self.to_dict(), indent=1)


def _den(b, Q):
    qb = Q @ b
    zero = np.flatnonzero(qb == 0)
    if zero.size:
        raise PoleAtSample(int(zero[0]))
    return qb


def residual_vector(a, b, P, Q, y):
    """``f(a, b) = y - diag(Q b)^{-1} P a``."""
    return y - (P @ a) / _den(b, Q)


def jacobian(a, b, P, Q, y):
    """Complex Jacobian of :func:`residual_vector` with respect to ``(a, b)``.

    ``f`` is holomorphic in the coefficients, so this is
    ``[-diag(Q b)^{-1} P,  diag((Q b)^{-2} P a) Q]``; the derivative of the
    model ``r = P a / Q b`` is its negative.
    """
    qb = _den(b, Q)
    return np.hstack([-P / qb[:, None], ((P @ a) / qb ** 2)[:, None] * Q])


def _is_real(v, tol=1e-13):
    v = np.asarray(v)
    return not np.iscomplexobj(v) or np.all(np.abs(v.imag) <= tol * max(np.abs(v).max(), 1e-300))


class _Parameterization:
    """Maps a real parameter vector onto ``(a, b)`` with one entry of ``b`` frozen."""

    def __init__(self, a, b, frozen, real):
        self.a0 = np.array(a, dtype=complex)
        self.b0 = np.array(b, dtype=complex)
        self.na = len(a)
        self.frozen = frozen
        self.free = np.r_[np.arange(self.na), self.na + np.delete(np.arange(len(b)), frozen)]
        self.real = real

    def initial(self):
        z = np.r_[self.a0, self.b0][self.free]
        return z.real.copy() if self.real else np.r_[z.real, z.imag]

    def coefficients(self, theta):
        z = np.r_[self.a0, self.b0]
        n = len(self.free)
        if self.real:
            z[self.free] = theta + 1j * z[self.free].imag
        else:
            z[self.free] = theta[:n] + 1j * theta[n:]
        return z[:self.na], z[self.na:]

    def real_jacobian(self, J):
        Jf = J[:, self.free]
        top = np.vstack([Jf.real, Jf.imag])
        if self.real:
            return top
        return np.hstack([top, np.vstack([-Jf.imag, Jf.real])])


def _stack(f):
    return np.r_[f.real, f.imag]


def refine_lsq(fit, points, opts=None):
    """Refine ``fit`` on ``points`` by damped Gauss-Newton.

    Steps are accepted only if they strictly decrease ``||f||``; the damping
    is divided by ten after an accepted step and multiplied by ten after a
    rejected one.

    Returns
    -------
    refined : RationalFit
        Same bases, updated coefficients (not renormalized: the frozen
        denominator entry is kept exactly).
    report : RefineReport
    """
    opts = opts or RefineOptions()
    y = np.asarray(points.require_y(), dtype=complex)
    X = _prepare(fit, points.X)
    P = eval_arnoldi(fit.num_R, fit.num_indices, X)
    Q = eval_arnoldi(fit.den_R, fit.den_indices, X)
    a, b = np.asarray(fit.a, dtype=complex), np.asarray(fit.b, dtype=complex)

    real = opts.real
    if real is None:
        real = all(_is_real(v) for v in (points.X, y, a, b))
    frozen = int(np.argmax(np.abs(b)))
    par = _Parameterization(a, b, frozen, real)

    theta = par.initial()
    f = residual_vector(a, b, P, Q, y)
    cost = np.linalg.norm(f)
    ynorm = np.linalg.norm(y)
    trace = [float(cost)]
    lam = opts.initial_damping
    reason = "max_iterations"
    gnorm = np.nan
    iterations = rejected = 0
    stalled = False

    while True:
        if cost <= opts.residual_tol * ynorm:
            reason = "residual_tol"
            break
        Jr = par.real_jacobian(jacobian(*par.coefficients(theta), P, Q, y))
        fr = _stack(f)
        g = Jr.T @ fr
        colnorm = np.sqrt(np.max(np.sum(Jr ** 2, axis=0))) if Jr.size else 0.0
        gnorm = float(np.max(np.abs(g))) if g.size else 0.0
        if gnorm <= opts.gradient_tol * cost * colnorm:
            reason = "gradient_tol"
            break
        if iterations >= opts.max_iterations:
            break
        scale = colnorm ** 2
        accepted = False
        pole_rejects = 0
        while not accepted:
            mu = np.sqrt(lam * scale)
            lhs = np.vstack([Jr, mu * np.eye(Jr.shape[1])])
            rhs = np.r_[-fr, np.zeros(Jr.shape[1])]
            delta = np.linalg.lstsq(lhs, rhs, rcond=None)[0]
            if np.linalg.norm(delta) <= opts.step_tol * (np.linalg.norm(theta) + opts.step_tol):
                reason = "step_tol"
                break
            trial = theta + delta
            try:
                f_new = residual_vector(*par.coefficients(trial), P, Q, y)
                cost_new = np.linalg.norm(f_new)
            except PoleAtSample:
                cost_new = np.inf
                pole_rejects += 1
            if cost_new < cost:
                theta, f, cost = trial, f_new, cost_new
                lam = max(lam / 10.0, 1e-20)
                accepted = True
            else:
                rejected += 1
                lam *= 10.0
                if lam > 1e20:
                    reason = "stalled"
                    stalled = pole_rejects > 0
                    break
        if not accepted:
            break
        iterations += 1
        trace.append(float(cost))

    solver = fit.meta.get("solver", "?") + "+refine"
    if iterations == 0:
        # nothing accepted: hand back the input coefficients untouched
        refined = fit.with_coefficients(fit.a, fit.b, solver=solver)
    else:
        a_new, b_new = par.coefficients(theta)
        refined = fit.with_coefficients(a_new, b_new, solver=solver, residual_norm=float(cost))
    report = RefineReport(iterations=iterations, residual_trace=trace,
                          gradient_norm=float(gnorm), reason=reason, frozen_index=frozen,
                          real=bool(real), stalled_at_pole=stalled, rejected_steps=rejected)
    return refined, report
