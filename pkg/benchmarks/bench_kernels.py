"""Compare the compiled and pure-Python Arnoldi kernels.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times ``fit_arnoldi``, ``eval_arnoldi`` and a full stabilized SK fit with
each backend and prints the median wall time and the speed-up.
"""
import argparse
import logging
import statistics
import time
import warnings

import numpy as np

from skrational import polybasis, problems
from skrational.multiindex import max_degree_indices, total_degree_indices
from skrational.polybasis import PointSet, eval_arnoldi, fit_arnoldi
from skrational.skiter import fit_stabilized_sk


def _median_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def cases():
    rng = np.random.default_rng(0)
    X1 = rng.uniform(-1, 1, (20000, 1))
    X2 = rng.uniform(-1, 1, (2000, 2))
    w1, w2 = np.ones(20000), np.ones(2000)
    i1, i2 = total_degree_indices(1, 20), total_degree_indices(2, 20)
    B1 = fit_arnoldi(PointSet(X1), w1, i1)
    B2 = fit_arnoldi(PointSet(X2), w2, i2)
    abs_pts = problems.gen_abs(20000)
    penzl = problems.gen_penzl1()
    i10, i8 = total_degree_indices(1, 10), max_degree_indices((8, 8))
    return [
        ("fit_arnoldi  M=20000 d=1 N=21", lambda: fit_arnoldi(PointSet(X1), w1, i1)),
        ("fit_arnoldi  M=2000 d=2 N=231", lambda: fit_arnoldi(PointSet(X2), w2, i2)),
        ("eval_arnoldi M=20000 d=1 N=21", lambda: eval_arnoldi(B1.R, i1, X1)),
        ("eval_arnoldi M=2000 d=2 N=231", lambda: eval_arnoldi(B2.R, i2, X2)),
        ("S-SK |x| (10,10), 20 iterations", lambda: fit_stabilized_sk(abs_pts, i10, i10)),
        ("S-SK Penzl max (8,8)", lambda: fit_stabilized_sk(penzl, i8, i8)),
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    backends = polybasis.available_backends()
    if "compiled" not in backends:
        print("compiled kernel not built; only the Python backend is available")
    warnings.simplefilter("ignore")
    logging.getLogger("skrational").setLevel(logging.ERROR)
    print(f"{'case':34s}" + "".join(f"{b:>12s}" for b in backends) + "   speed-up")
    for name, fn in cases():
        row = {}
        for backend in backends:
            polybasis.set_backend(backend)
            fn()  # warm-up
            row[backend] = _median_time(fn, args.repeat)
        line = f"{name:34s}" + "".join(f"{row[b] * 1e3:10.2f}ms" for b in backends)
        if len(row) == 2:
            line += f"   {row['python'] / row['compiled']:6.2f}x"
        print(line, flush=True)


if __name__ == "__main__":
    main()
