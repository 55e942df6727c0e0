"""Command-line interface: ``skrational {fit,eval,benchmark,generate}``.

Exit codes: 0 success, 1 input/validation error, 2 solver breakdown (the
best iterate found before the breakdown is still written when one exists).
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
import warnings
from dataclasses import replace

import numpy as np

from . import benchmark, problems
from .dataio import fmt, point_fields, point_header, read_pointset, write_pointset
from .errors import Breakdown, ParseError, SKRationalError
from .multiindex import max_degree_indices, total_degree_indices
from .polybasis import PointSet, affine_rescale
from .rational import denominator_values, evaluate, load, residual_norm, save
from .refine import refine_lsq
from .skiter import fit_linearized, fit_sk, fit_stabilized_sk

log = logging.getLogger("skrational")

EXIT_OK, EXIT_INPUT, EXIT_BREAKDOWN = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text):
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _degree_sets(args, dim):
    if args.degree_total is not None:
        m, n = args.degree_total
        return total_degree_indices(dim, m), total_degree_indices(dim, n)
    num, den = args.degree_max
    if len(num) != dim or len(den) != dim:
        raise UsageError(f"--degree-max needs {dim} degrees per side for {dim}-dimensional data")
    return max_degree_indices(num), max_degree_indices(den)


def cmd_fit(args):
    points = read_pointset(args.input)
    if points.y is None:
        raise UsageError(f"{args.input}: no response columns (y or y_re[,y_im])")
    num_idx, den_idx = _degree_sets(args, points.dim)
    work = points
    rescale = None
    if args.rescale:
        rescale = affine_rescale(points.X)
        center, scale = rescale
        work = PointSet((points.X - center) / scale, points.y)

    history = None
    status = EXIT_OK
    try:
        if args.solver == "linearized":
            fit = fit_linearized(work, num_idx, den_idx)
        elif args.solver == "sk":
            fit, history = fit_sk(work, num_idx, den_idx, maxiter=args.maxiter)
        else:
            fit, history = fit_stabilized_sk(work, num_idx, den_idx, maxiter=args.maxiter)
            if history.termination == "breakdown":
                status = EXIT_BREAKDOWN
            if args.solver == "ssk+refine":
                fit, report = refine_lsq(fit, work)
                log.info("refinement: %d iterations, %s", report.iterations, report.reason)
    except Breakdown as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BREAKDOWN

    if rescale is not None:
        fit = replace(fit, rescale=rescale)
    save(fit, args.output)
    if history is not None and args.history:
        history.to_csv(args.history)
    res = residual_norm(fit, points)
    ynorm = np.linalg.norm(points.y)
    print(f"residual_norm {res:.16e}")
    print(f"relative_residual {res / ynorm if ynorm else 0.0:.16e}")
    if history is not None:
        print(f"best_iteration {fit.meta['iteration']} of {len(history)} ({history.termination})")
    return status


def _parse_grid(text):
    axes = []
    for part in text.split(","):
        try:
            lo, hi, n = part.split(":")
            axes.append(np.linspace(float(lo), float(hi), int(n)))
        except ValueError:
            raise UsageError(f"bad grid axis {part!r}; expected lo:hi:n") from None
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([m.ravel() for m in mesh])


def cmd_eval(args):
    fit = load(args.fit)
    if args.grid:
        points = PointSet(_parse_grid(args.grid))
    else:
        points = read_pointset(args.points)
    if points.dim != fit.dim:
        raise UsageError(f"points have dimension {points.dim}, fit expects {fit.dim}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        r = evaluate(fit, points.X)
    den = denominator_values(fit, points.X)
    X = np.asarray(points.X)
    complex_x = np.iscomplexobj(X) and np.any(X.imag != 0)
    header = point_header(points.dim, complex_x) + ["r_re", "r_im", "den_re", "den_im"]
    if points.y is not None:
        header.append("abs_err")
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for j in range(points.M):
            row = point_fields(X[j], complex_x) + [fmt(r[j].real), fmt(r[j].imag),
                                                   fmt(den[j].real), fmt(den[j].imag)]
            if points.y is not None:
                row.append(fmt(abs(points.y[j] - r[j])))
            writer.writerow(row)
    finally:
        if out is not sys.stdout:
            out.close()
    if points.y is not None:
        print(f"residual_norm {residual_norm(fit, points):.16e}", file=sys.stderr)
    return EXIT_OK


def cmd_benchmark(args):
    suite = benchmark.SUITES[args.suite]
    degrees = None
    if args.degrees:
        degrees = tuple(d for d in suite.degrees if d[0] in args.degrees
                        or (isinstance(d[0], tuple) and d[0][0] in args.degrees))
        if not degrees:
            raise UsageError(f"no degrees of suite {args.suite} match {args.degrees}")
    rows = benchmark.run_suite(args.suite, solvers=args.solvers, degrees=degrees,
                               full=args.full, seed=args.seed, jobs=args.jobs)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            benchmark.write_results(rows, fh)
    else:
        benchmark.write_results(rows, sys.stdout)
    return EXIT_OK


def cmd_generate(args):
    gen = problems.GENERATORS[args.problem]
    kwargs = {}
    if args.problem == "exp2d":
        kwargs["seed"] = args.seed
    if args.size:
        kwargs.update(zip(("M",) if args.problem in ("abs", "exp", "tan", "exp2d")
                          else ("Mz", "Mt", "Mu"), args.size))
    write_pointset(gen(**kwargs), args.output)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="skrational", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a rational function to CSV data")
    p.add_argument("input")
    p.add_argument("-o", "--output", default="fit.json")
    p.add_argument("--history", help="write the iteration history CSV here")
    p.add_argument("--solver", choices=benchmark.SOLVERS, default="ssk")
    deg = p.add_mutually_exclusive_group(required=True)
    deg.add_argument("--degree-total", nargs=2, type=int, metavar=("M", "N"))
    deg.add_argument("--degree-max", nargs=2, type=_int_list, metavar=("M1,M2,..", "N1,N2,.."))
    p.add_argument("--maxiter", type=int, default=20)
    p.add_argument("--rescale", action="store_true",
                   help="map each coordinate into [-1, 1] before fitting (stored in the fit)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("eval", help="evaluate a saved fit on a grid or a point file")
    p.add_argument("fit")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--grid", help="tensor grid lo:hi:n[,lo:hi:n]...")
    src.add_argument("--points", help="CSV of points (responses optional)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("benchmark", help="run a test-problem degree sweep")
    p.add_argument("suite", choices=sorted(benchmark.SUITES))
    p.add_argument("--solvers", nargs="+", choices=benchmark.SOLVERS)
    p.add_argument("--degrees", type=_int_list,
                   help="restrict to these numerator degrees (first coordinate for max-degree suites)")
    p.add_argument("--full", action="store_true", help="use the 200,000-point |x| data")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("generate", help="write a test problem's data as CSV")
    p.add_argument("problem", choices=sorted(problems.GENERATORS))
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--size", type=_int_list, help="point counts (per axis for Penzl grids)")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ParseError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SKRationalError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
