"""Fitted rational functions ``p/q`` stored in Arnoldi form."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ParseError, PoleHitWarning
from .multiindex import MultiIndexSet
from .polybasis import PointSet, as_points, eval_arnoldi

__all__ = [
    "RationalFit",
    "evaluate",
    "denominator_values",
    "residual_norm",
    "save",
    "load",
    "FORMAT_VERSION",
]

FORMAT_VERSION = 1

#: relative denominator magnitude treated as a pole during evaluation
POLE_TOL = 1e-30


@dataclass(frozen=True)
class RationalFit:
    """Rational function with numerator/denominator bases given by recurrence matrices.

    ``num_R``/``den_R`` are the upper-triangular Arnoldi coefficients and
    ``a``/``b`` the coefficient vectors in those bases.  ``rescale``, when
    set, is a ``(center, scale)`` pair applied to raw input points before
    the bases are evaluated.
    """

    num_R: np.ndarray
    num_indices: MultiIndexSet
    den_R: np.ndarray
    den_indices: MultiIndexSet
    a: np.ndarray
    b: np.ndarray
    meta: dict = field(default_factory=dict)
    rescale: tuple | None = None

    @property
    def dim(self):
        return self.num_indices.dim

    def __call__(self, Z):
        return evaluate(self, Z)

    def with_coefficients(self, a, b, **meta):
        return replace(self, a=np.asarray(a, dtype=complex), b=np.asarray(b, dtype=complex),
                       meta={**self.meta, **meta})


def _prepare(fit, Z):
    Z = as_points(Z)
    if Z.shape[1] != fit.dim:
        raise ValueError(f"points have dimension {Z.shape[1]}, fit expects {fit.dim}")
    if fit.rescale is not None:
        center, scale = fit.rescale
        Z = np.asfortranarray((Z - center) / scale)
    return Z


def _num_den(fit, Z):
    Z = _prepare(fit, Z)
    num = eval_arnoldi(fit.num_R, fit.num_indices, Z) @ fit.a
    den = eval_arnoldi(fit.den_R, fit.den_indices, Z) @ fit.b
    return num, den


def _divide(num, den):
    scale = np.max(np.abs(den)) if den.size else 0.0
    hit = np.abs(den) < POLE_TOL * scale
    if scale == 0:
        hit[:] = True
    out = np.empty_like(num)
    ok = ~hit
    out[ok] = num[ok] / den[ok]
    if np.any(hit):
        out[hit] = np.inf
        first = int(np.flatnonzero(hit)[0])
        warnings.warn(f"evaluation at a pole ({hit.sum()} points, first index {first})",
                      PoleHitWarning, stacklevel=3)
    return out, hit


def evaluate(fit, Z):
    """Values of the rational function at points ``Z`` (shape ``(M', d)``).

    Points where the denominator magnitude drops below ``1e-30`` of its
    maximum are reported as ``inf`` with a :class:`PoleHitWarning`.
    """
    num, den = _num_den(fit, Z)
    return _divide(num, den)[0]


def denominator_values(fit, Z):
    """Unweighted denominator polynomial ``W_Q b`` at ``Z``."""
    Z = _prepare(fit, Z)
    return eval_arnoldi(fit.den_R, fit.den_indices, Z) @ fit.b


def residual_norm(fit, points, return_mask=False):
    """Two-norm of ``y - r(X)``, skipping samples that land on a pole.

    With ``return_mask=True`` also returns the boolean pole mask.
    """
    y = points.require_y()
    num, den = _num_den(fit, points.X)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PoleHitWarning)
        r, hit = _divide(num, den)
    res = float(np.linalg.norm((y - r)[~hit]))
    return (res, hit) if return_mask else res


# -- serialization -----------------------------------------------------------

def _cplx_list(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex).ravel()]


def _matrix_doc(R):
    R = np.asarray(R, dtype=complex)
    return [_cplx_list(row) for row in R]


def _parse_cplx(item, location):
    if (not isinstance(item, list) or len(item) != 2
            or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in item)):
        raise ParseError("expected a [re, im] pair", location)
    return complex(item[0], item[1])


def _parse_vector(doc, location):
    if not isinstance(doc, list):
        raise ParseError("expected a list of [re, im] pairs", location)
    return np.array([_parse_cplx(z, f"{location}[{i}]") for i, z in enumerate(doc)], dtype=complex)


def _parse_matrix(doc, n, location):
    if not isinstance(doc, list) or len(doc) != n:
        raise ParseError(f"expected {n} rows", location)
    rows = [_parse_vector(row, f"{location}[{i}]") for i, row in enumerate(doc)]
    if any(len(row) != n for row in rows):
        raise ParseError(f"expected {n} columns in every row", location)
    return np.array(rows, dtype=complex).reshape(n, n)


def to_dict(fit):
    doc = {
        "version": FORMAT_VERSION,
        "num": {"R": _matrix_doc(fit.num_R), "indices": fit.num_indices.to_dict()},
        "den": {"R": _matrix_doc(fit.den_R), "indices": fit.den_indices.to_dict()},
        "a": _cplx_list(fit.a),
        "b": _cplx_list(fit.b),
        "meta": dict(fit.meta),
    }
    if fit.rescale is not None:
        center, scale = fit.rescale
        doc["rescale"] = {"center": _cplx_list(center), "scale": _cplx_list(scale)}
    return doc


def save(fit, path=None):
    """Serialize ``fit`` to a JSON string (and write it to ``path`` if given)."""
    text = json.dumps(to_dict(fit), indent=1, sort_keys=True)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def from_dict(doc):
    if not isinstance(doc, dict):
        raise ParseError("fit document must be a JSON object", "$")
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise ParseError(f"unsupported format version {version!r} (expected {FORMAT_VERSION})",
                         "$.version")
    parts = {}
    for name in ("num", "den"):
        sub = doc.get(name)
        if not isinstance(sub, dict):
            raise ParseError("missing or malformed section", f"$.{name}")
        idx = MultiIndexSet.from_dict(sub.get("indices"), f"$.{name}.indices")
        R = _parse_matrix(sub.get("R"), len(idx), f"$.{name}.R")
        parts[name] = (R, idx)
    a = _parse_vector(doc.get("a"), "$.a")
    b = _parse_vector(doc.get("b"), "$.b")
    if len(a) != len(parts["num"][1]):
        raise ParseError(f"numerator needs {len(parts['num'][1])} coefficients", "$.a")
    if len(b) != len(parts["den"][1]):
        raise ParseError(f"denominator needs {len(parts['den'][1])} coefficients", "$.b")
    if parts["num"][1].dim != parts["den"][1].dim:
        raise ParseError("numerator and denominator dimensions differ", "$.den.indices.dim")
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise ParseError("meta must be an object", "$.meta")
    rescale = None
    if "rescale" in doc:
        rs = doc["rescale"]
        if not isinstance(rs, dict):
            raise ParseError("rescale must be an object", "$.rescale")
        center = _parse_vector(rs.get("center"), "$.rescale.center")
        scale = _parse_vector(rs.get("scale"), "$.rescale.scale")
        rescale = (center, scale)
    return RationalFit(num_R=parts["num"][0], num_indices=parts["num"][1],
                       den_R=parts["den"][0], den_indices=parts["den"][1],
                       a=a, b=b, meta=meta, rescale=rescale)


def load(source):
    """Parse a fit from a JSON string or a path to a JSON file."""
    text = source
    if not source.lstrip().startswith("{"):
        with open(source) as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return from_dict(doc)
