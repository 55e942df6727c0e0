"""Degree sweeps over the test problems for each solver."""
from __future__ import annotations

import csv
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import problems
from .errors import SKRationalError
from .multiindex import max_degree_indices, total_degree_indices
from .refine import refine_lsq
from .skiter import fit_linearized, fit_sk, fit_stabilized_sk

SOLVERS = ("linearized", "sk", "ssk", "ssk+refine")


@dataclass(frozen=True)
class Suite:
    name: str
    degrees: tuple  # ((num, den), ...) with int (total) or tuple (max) entries
    solvers: tuple = SOLVERS

    def data(self, full=False, seed=0):
        if self.name == "abs":
            return problems.gen_abs(200_000 if full else 20_000)
        if self.name == "exp2d":
            return problems.gen_exp2d(1000, seed)
        return problems.GENERATORS[self.name]()


SUITES = {
    "abs": Suite("abs", tuple((m, m) for m in range(2, 21))),
    "exp": Suite("exp", tuple((m, m) for m in range(2, 21))),
    "tan": Suite("tan", tuple((m, m) for m in range(4, 41, 4))),
    "exp2d": Suite("exp2d", tuple((m, m) for m in range(2, 21, 2)), ("linearized", "ssk")),
    "penzl1": Suite("penzl1", tuple(((k, k), (k, k)) for k in (2, 4, 6, 8)), ("linearized", "sk", "ssk")),
    "penzl2": Suite("penzl2", (((4, 2, 2), (4, 2, 2)), ((6, 2, 2), (6, 2, 2)),
                               ((8, 2, 2), (8, 2, 2)), ((8, 3, 3), (8, 3, 3))),
                    ("linearized", "ssk")),
}


def _indices(degree, dim):
    if isinstance(degree, tuple):
        return max_degree_indices(degree)
    return total_degree_indices(dim, degree)


def run_solver(solver, points, num_idx, den_idx, maxiter=20):
    """Fit with the named solver; returns the fit (best iterate for iterative solvers)."""
    if solver == "linearized":
        return fit_linearized(points, num_idx, den_idx), None
    if solver == "sk":
        return fit_sk(points, num_idx, den_idx, maxiter=maxiter)
    if solver in ("ssk", "ssk+refine"):
        fit, history = fit_stabilized_sk(points, num_idx, den_idx, maxiter=maxiter)
        if solver == "ssk+refine":
            fit, _ = refine_lsq(fit, points)
        return fit, history
    raise ValueError(f"unknown solver {solver!r}")


def _degree_label(deg):
    return ",".join(map(str, deg)) if isinstance(deg, tuple) else str(deg)


def _one(args):
    suite_name, solver, num_deg, den_deg, full, seed = args
    suite = SUITES[suite_name]
    points = suite.data(full, seed)
    ynorm = float(np.linalg.norm(points.y))
    t0 = time.perf_counter()
    status = "ok"
    res = np.nan
    iteration = ""
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            fit, _ = run_solver(solver, points, _indices(num_deg, points.dim),
                                _indices(den_deg, points.dim))
        res = float(fit.meta["residual_norm"])
        iteration = fit.meta.get("iteration", "")
    except (SKRationalError, ValueError, np.linalg.LinAlgError) as exc:
        status = type(exc).__name__
    return {
        "suite": suite_name,
        "solver": solver,
        "num_degree": _degree_label(num_deg),
        "den_degree": _degree_label(den_deg),
        "residual_norm": res,
        "rel_residual": res / ynorm if ynorm else np.nan,
        "iteration": iteration,
        "seconds": time.perf_counter() - t0,
        "status": status,
    }


def run_suite(name, solvers=None, degrees=None, full=False, seed=0, jobs=1):
    """Run every (degree, solver) pair of suite ``name``; returns result rows."""
    suite = SUITES[name]
    solvers = tuple(solvers or suite.solvers)
    degrees = tuple(degrees or suite.degrees)
    tasks = [(name, s, n, d, full, seed) for (n, d) in degrees for s in solvers]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_one, tasks))
    return [_one(t) for t in tasks]


FIELDS = ("suite", "solver", "num_degree", "den_degree", "residual_norm", "rel_residual",
          "iteration", "seconds", "status")


def write_results(rows, fh):
    writer = csv.DictWriter(fh, fieldnames=FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        out = dict(row)
        for key in ("residual_norm", "rel_residual"):
            out[key] = f"{row[key]:.16e}"
        out["seconds"] = f"{row['seconds']:.3f}"
        writer.writerow(out)
