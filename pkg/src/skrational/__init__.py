"""Rational approximation with the stabilized Sanathanan-Koerner iteration.

Typical use::

    from skrational import total_degree_indices, fit_stabilized_sk, PointSet
    fit, history = fit_stabilized_sk(PointSet(x, y), total_degree_indices(1, 10),
                                     total_degree_indices(1, 10))
    values = fit(z)
"""
from .errors import (Breakdown, DegenerateR, MissingResponses, NoPredecessor, ParseError,
                     PoleAtSample, PoleHitWarning, RankDeficientWarning, SKRationalError,
                     ZeroDenominatorWarning)
from .multiindex import MultiIndexSet, max_degree_indices, predecessor, total_degree_indices
from .polybasis import (OrthoBasis, PointSet, available_backends, eval_arnoldi, fit_arnoldi,
                        get_backend, set_backend)
from .rational import RationalFit, denominator_values, evaluate, load, residual_norm, save
from .refine import RefineOptions, RefineReport, jacobian, refine_lsq, residual_vector
from .skiter import (FitHistory, SolveDiagnostics, fit_linearized, fit_sk, fit_stabilized_sk,
                     solve_homogeneous)

__version__ = "0.1.0"
