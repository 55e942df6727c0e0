"""CSV reading/writing for point sets.

Header row required.  Point columns are ``x1..xd`` (real) or
``x1_re,x1_im,...`` (complex); responses are ``y`` / ``y_re`` and optionally
``y_im``.  Values are written with 17 significant digits.
"""
from __future__ import annotations

import csv
import re

import numpy as np

from .errors import ParseError
from .polybasis import PointSet

_XCOL = re.compile(r"^x(\d+)(?:_(re|im))?$")


def _layout(header, path):
    names = [h.strip() for h in header]
    xcols = {}
    complex_x = False
    ycols = {}
    for pos, name in enumerate(names):
        m = _XCOL.match(name)
        if m:
            idx, part = int(m.group(1)), m.group(2) or "re"
            complex_x |= m.group(2) is not None
            xcols.setdefault(idx, {})[part] = pos
        elif name in ("y", "y_re"):
            ycols["re"] = pos
        elif name == "y_im":
            ycols["im"] = pos
        else:
            raise ParseError(f"unrecognized column {name!r}", f"{path}:1")
    if not xcols:
        raise ParseError("no point columns (x1, x2, ... or x1_re, x1_im, ...)", f"{path}:1")
    if sorted(xcols) != list(range(1, len(xcols) + 1)):
        raise ParseError("point columns must be numbered x1..xd", f"{path}:1")
    if "im" in ycols and "re" not in ycols:
        raise ParseError("y_im given without y_re", f"{path}:1")
    order = [xcols[i] for i in range(1, len(xcols) + 1)]
    if complex_x and any(set(c) != {"re", "im"} for c in order):
        raise ParseError("complex points need both _re and _im columns", f"{path}:1")
    return order, complex_x, ycols


def read_pointset(path):
    """Read a :class:`PointSet` from ``path``; responses are optional."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty file", f"{path}:1") from None
        order, complex_x, ycols = _layout(header, path)
        ncol = len(header)
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != ncol:
                raise ParseError(f"expected {ncol} fields, got {len(row)}", f"{path}:{lineno}")
            try:
                rows.append([float(c) for c in row])
            except ValueError as exc:
                raise ParseError(str(exc), f"{path}:{lineno}") from None
    if not rows:
        raise ParseError("no data rows", f"{path}:2")
    data = np.array(rows)
    if complex_x:
        X = np.column_stack([data[:, c["re"]] + 1j * data[:, c["im"]] for c in order])
    else:
        X = np.column_stack([data[:, c["re"]] for c in order])
    y = None
    if "re" in ycols:
        y = data[:, ycols["re"]]
        if "im" in ycols:
            y = y + 1j * data[:, ycols["im"]]
    try:
        return PointSet(X, y)
    except ValueError as exc:
        raise ParseError(str(exc), path) from None


def fmt(x):
    return f"{x:.16e}"


def point_header(dim, complex_x):
    if complex_x:
        return [f"x{i}_{p}" for i in range(1, dim + 1) for p in ("re", "im")]
    return [f"x{i}" for i in range(1, dim + 1)]


def point_fields(row, complex_x):
    if complex_x:
        return [fmt(v) for z in row for v in (z.real, z.imag)]
    return [fmt(z.real) for z in row]


def write_pointset(points, path):
    X = np.asarray(points.X)
    complex_x = np.iscomplexobj(X) and np.any(X.imag != 0)
    y = points.y
    complex_y = y is not None and np.iscomplexobj(y) and np.any(np.imag(y) != 0)
    header = point_header(X.shape[1], complex_x)
    if y is not None:
        header += ["y_re", "y_im"] if complex_y else ["y"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for j in range(X.shape[0]):
            fields = point_fields(X[j], complex_x)
            if y is not None:
                fields += [fmt(y[j].real), fmt(y[j].imag)] if complex_y else [fmt(np.real(y[j]))]
            writer.writerow(fields)
