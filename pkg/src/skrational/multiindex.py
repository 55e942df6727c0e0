"""Ordered multi-index sets for total- and maximum-degree polynomial spaces.

The orderings produced here are prefix-closed: every index after the first
is obtained from some earlier index by adding a unit vector.  That is what
lets the multivariate Arnoldi process build column ``l`` by multiplying an
earlier basis column by a single coordinate.
"""
from __future__ import annotations

import itertools
from functools import cached_property
from math import comb, prod

import numpy as np

from .errors import NoPredecessor, ParseError

__all__ = [
    "MultiIndexSet",
    "total_degree_indices",
    "max_degree_indices",
    "predecessor",
]


def _compositions(total, d):
    # all length-d non-negative tuples summing to ``total``
    if d == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, d - 1):
            yield (first,) + rest


class MultiIndexSet:
    """Immutable ordered list of multi-indices.

    Parameters
    ----------
    kind : {'total', 'max'}
    degree : int or tuple of int
        Total degree ``m`` for ``kind='total'``; per-coordinate maxima for
        ``kind='max'``.
    dim : int
        Number of variables ``d``.
    """

    __slots__ = ("kind", "degree", "dim", "indices", "__dict__")

    def __init__(self, kind, degree, dim):
        if kind not in ("total", "max"):
            raise ValueError(f"unknown index set kind {kind!r}")
        dim = int(dim)
        if dim < 1:
            raise ValueError("dimension must be at least 1")
        if kind == "total":
            degree = int(degree)
            if degree < 0:
                raise ValueError("degree must be non-negative")
            indices = [alpha for m in range(degree + 1) for alpha in _compositions(m, dim)]
        else:
            degree = tuple(int(m) for m in degree)
            if len(degree) != dim:
                raise ValueError(f"need {dim} degrees for a max-degree set, got {len(degree)}")
            if any(m < 0 for m in degree):
                raise ValueError("degrees must be non-negative")
            indices = list(itertools.product(*(range(m + 1) for m in degree)))
        self.kind = kind
        self.degree = degree
        self.dim = dim
        self.indices = tuple(indices)

    def __len__(self):
        return len(self.indices)

    def __getitem__(self, pos):
        return self.indices[pos]

    def __iter__(self):
        return iter(self.indices)

    def __eq__(self, other):
        if not isinstance(other, MultiIndexSet):
            return NotImplemented
        return (self.kind, self.degree, self.dim) == (other.kind, other.degree, other.dim)

    def __hash__(self):
        return hash((self.kind, self.degree, self.dim))

    def __repr__(self):
        return f"MultiIndexSet(kind={self.kind!r}, degree={self.degree!r}, dim={self.dim})"

    @cached_property
    def position(self):
        """Map from multi-index tuple to its 0-based position."""
        return {alpha: i for i, alpha in enumerate(self.indices)}

    @cached_property
    def predecessors(self):
        """``(k, j)`` arrays of 0-based predecessor positions and coordinates.

        Entry 0 is ``(-1, -1)``; for ``l >= 1``, ``indices[k[l]] + e_{j[l]} == indices[l]``.
        """
        n = len(self.indices)
        k = np.full(n, -1, dtype=np.intc)
        j = np.full(n, -1, dtype=np.intc)
        for pos in range(1, n):
            k[pos], j[pos] = predecessor(self, pos)
        return k, j

    @property
    def expected_size(self):
        if self.kind == "total":
            return comb(self.degree + self.dim, self.dim)
        return prod(m + 1 for m in self.degree)

    def as_array(self):
        return np.array(self.indices, dtype=int).reshape(len(self), self.dim)

    def to_dict(self):
        degree = self.degree if self.kind == "total" else list(self.degree)
        return {"kind": self.kind, "degree": degree, "dim": self.dim}

    @classmethod
    def from_dict(cls, doc, location="indices"):
        if not isinstance(doc, dict):
            raise ParseError("index set must be an object", location)
        try:
            kind, degree, dim = doc["kind"], doc["degree"], doc["dim"]
        except KeyError as exc:
            raise ParseError(f"missing field {exc.args[0]!r}", location) from None
        if kind not in ("total", "max"):
            raise ParseError(f"unknown index set kind {kind!r}", f"{location}.kind")
        if kind == "total" and not isinstance(degree, int):
            raise ParseError("total degree must be an integer", f"{location}.degree")
        if kind == "max" and not (isinstance(degree, list) and all(isinstance(m, int) for m in degree)):
            raise ParseError("max degree must be a list of integers", f"{location}.degree")
        if not isinstance(dim, int):
            raise ParseError("dim must be an integer", f"{location}.dim")
        try:
            return cls(kind, degree, dim)
        except ValueError as exc:
            raise ParseError(str(exc), location) from None


def total_degree_indices(d, m):
    """All multi-indices with ``|alpha| <= m``, graded then descending-lexicographic.

    >>> list(total_degree_indices(2, 2))
    [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    """
    return MultiIndexSet("total", m, d)


def max_degree_indices(degrees):
    """All multi-indices with ``alpha <= degrees`` componentwise, lexicographic
    with the last coordinate varying fastest."""
    degrees = tuple(degrees)
    return MultiIndexSet("max", degrees, len(degrees))


def predecessor(S, pos):
    """Smallest earlier position ``k`` and coordinate ``j`` with ``S[k] + e_j == S[pos]``.

    Positions and coordinates are 0-based.  Raises :class:`NoPredecessor` if
    none exists.
    """
    alpha = S.indices[pos]
    lookup = S.position
    best = None
    for j, aj in enumerate(alpha):
        if aj == 0:
            continue
        prev = alpha[:j] + (aj - 1,) + alpha[j + 1:]
        k = lookup.get(prev)
        if k is not None and k < pos and (best is None or k < best[0]):
            best = (k, j)
    if best is None:
        raise NoPredecessor(pos)
    return best
