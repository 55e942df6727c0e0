import numpy as np
import pytest
from scipy.linalg import qr

from skrational.errors import Breakdown, DegenerateR
from skrational.multiindex import max_degree_indices, total_degree_indices
from skrational.polybasis import (PointSet, affine_rescale, eval_arnoldi, fit_arnoldi,
                                  monomial_vandermonde)


def orthonormality_error(Q):
    return np.linalg.norm(Q.conj().T @ Q - np.eye(Q.shape[1]))


def recurrence_errors(X, basis):
    X = np.asarray(X, dtype=complex).reshape(len(basis.Q), -1)
    Q, R = basis.Q, basis.R
    pk, pj = basis.indices.predecessors
    errs = []
    for ell in range(1, Q.shape[1]):
        v = X[:, pj[ell]] * Q[:, pk[ell]]
        errs.append(np.linalg.norm(v - Q[:, :ell + 1] @ R[:ell + 1, ell]) / np.linalg.norm(v))
    return np.array(errs)


def random_points(rng, M, d, complex_=False):
    X = rng.uniform(-1, 1, (M, d))
    if complex_:
        X = X + 1j * rng.uniform(-1, 1, (M, d))
    return X


def test_degree_zero(backend):
    B = fit_arnoldi(np.arange(4.0), np.ones(4), total_degree_indices(1, 0))
    np.testing.assert_allclose(B.Q[:, 0], 0.5)
    np.testing.assert_allclose(B.R, [[2.0]])


def test_hand_gram_schmidt(backend):
    B = fit_arnoldi(np.array([-1.0, 0.0, 1.0]), np.ones(3), total_degree_indices(1, 1))
    expected_Q = np.column_stack([np.ones(3) / np.sqrt(3), np.array([-1, 0, 1]) / np.sqrt(2)])
    np.testing.assert_allclose(B.Q, expected_Q, atol=1e-15)
    # column 2 is x * q_1 = (-1, 0, 1)/sqrt(3), already orthogonal to q_1
    np.testing.assert_allclose(B.R, [[np.sqrt(3), 0], [0, np.sqrt(2 / 3)]], atol=1e-15)
    W = eval_arnoldi(B.R, B.indices, np.array([[2.0]]))
    np.testing.assert_allclose(W, [[1 / np.sqrt(3), 2 / np.sqrt(2)]], atol=1e-15)
    np.testing.assert_allclose(W, [[0.5774, 1.4142]], atol=5e-5)


def test_degree_zero_eval(backend):
    B = fit_arnoldi(np.linspace(0, 1, 5), np.linspace(1, 2, 5), total_degree_indices(1, 0))
    W = eval_arnoldi(B.R, B.indices, np.array([0.3, -7.0, 2.0]))
    np.testing.assert_allclose(W[:, 0], 1 / B.R[0, 0])


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("kind", ["total", "max"])
@pytest.mark.parametrize("complex_", [False, True])
def test_basis_invariants(backend, rng, d, kind, complex_):
    degree = {1: 10, 2: 6, 3: 3}[d]
    idx = total_degree_indices(d, degree) if kind == "total" else max_degree_indices((degree,) * d)
    M = 3 * len(idx) + 10
    X = random_points(rng, M, d, complex_)
    w = rng.uniform(0.5, 2, M) * np.exp(1j * rng.uniform(0, 2 * np.pi, M))
    B = fit_arnoldi(PointSet(X), w, idx)
    N = len(idx)
    assert orthonormality_error(B.Q) <= 1e-10 * np.sqrt(N)
    assert np.allclose(B.R, np.triu(B.R))
    diag = np.diag(B.R)
    assert np.all(diag.imag == 0) and np.all(diag.real > 0)
    assert B.R[0, 0] == pytest.approx(np.linalg.norm(w))
    np.testing.assert_allclose(B.Q[:, 0], w / np.linalg.norm(w))
    assert np.all(recurrence_errors(X, B) <= 1e-10)


def projector(A):
    Qa, Ra = qr(A, mode="economic")
    return Qa @ Qa.conj().T


@pytest.mark.parametrize("d,idx", [
    (1, total_degree_indices(1, 12)),
    (2, total_degree_indices(2, 3)),
    (2, max_degree_indices((3, 4))),
    (3, total_degree_indices(3, 3)),
])
def test_span_matches_weighted_monomials(backend, rng, d, idx):
    X = random_points(rng, 50 if d == 2 else 150, d)
    w = rng.uniform(0.5, 2, X.shape[0])
    B = fit_arnoldi(X, w, idx)
    V = w[:, None] * monomial_vandermonde(X, idx)
    assert np.linalg.norm(projector(B.Q) - projector(V)) <= 1e-8


@pytest.mark.parametrize("idx", [total_degree_indices(1, 10), total_degree_indices(1, 15),
                                 total_degree_indices(2, 8), max_degree_indices((4, 3, 2))])
def test_eval_at_training_points(backend, rng, idx):
    M = max(100, 3 * len(idx))
    if idx.dim == 1:
        X = np.cos(np.pi * (np.arange(M) + 0.5) / M)[:, None]
    else:
        X = random_points(rng, M, idx.dim)
    for w in (np.ones(M), rng.uniform(0.1, 3, M) + 1j * rng.uniform(-1, 1, M)):
        B = fit_arnoldi(X, w, idx)
        W = eval_arnoldi(B.R, idx, X)
        assert np.linalg.norm(w[:, None] * W - B.Q) <= 1e-10 * np.linalg.norm(B.Q)


def test_weight_covariance(rng):
    idx = total_degree_indices(2, 4)
    X = random_points(rng, 80, 2)
    w = rng.uniform(0.2, 3, 80) * np.exp(1j * rng.uniform(0, 1, 80))
    Q1 = fit_arnoldi(X, np.ones(80), idx).Q
    Qw = fit_arnoldi(X, w, idx).Q
    c = rng.standard_normal(len(idx))
    target = w * (Q1 @ c)
    cw = np.linalg.lstsq(Qw, target, rcond=None)[0]
    np.testing.assert_allclose(Qw @ cw, target, atol=1e-11 * np.linalg.norm(target))


def test_breakdown_on_too_few_distinct_points(backend):
    X = np.array([0.0, 0.0, 1.0, 1.0, 1.0])
    with pytest.raises(Breakdown) as err:
        fit_arnoldi(X, np.ones(5), total_degree_indices(1, 2))
    assert err.value.column == 2


def test_input_validation():
    idx = total_degree_indices(1, 3)
    with pytest.raises(ValueError):
        fit_arnoldi(np.arange(3.0), np.ones(3), idx)
    with pytest.raises(ValueError):
        fit_arnoldi(np.arange(5.0), np.zeros(5), idx)
    with pytest.raises(ValueError):
        fit_arnoldi(np.ones((5, 2)), np.ones(5), idx)
    with pytest.raises(ValueError):
        PointSet(np.array([0.0, np.nan]))
    with pytest.raises(ValueError):
        PointSet(np.zeros(3), np.zeros(2))


def test_degenerate_R():
    idx = total_degree_indices(1, 1)
    with pytest.raises(DegenerateR):
        eval_arnoldi(np.array([[1.0, 0.5], [0.0, 0.0]]), idx, np.zeros(2))


def test_affine_rescale():
    X = np.column_stack([np.linspace(2, 6, 5), np.full(5, 3.0)])
    center, scale = affine_rescale(X)
    np.testing.assert_allclose(center, [4, 3])
    np.testing.assert_allclose(scale, [2, 1])
    Z = np.exp(1j * np.linspace(0, 2 * np.pi, 9))[:, None] * 3 + 1j
    c, s = affine_rescale(Z)
    assert np.abs((Z - c) / s).max() == pytest.approx(1.0)
