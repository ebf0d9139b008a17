import numpy as np
import pytest

from spheretrs import (
    CallbackOp,
    DenseOp,
    DiagonalOp,
    DimensionMismatchError,
    EigLowRankOp,
)


def test_dense_apply_and_quadratic_form():
    a = DenseOp(np.array([[1.0, 2.0], [2.0, 5.0]]))
    v = np.array([1.0, -1.0])
    assert np.allclose(a.apply(v), [-1.0, -3.0])
    assert a.quadratic_form(v) == pytest.approx(2.0)


def test_dense_symmetrizes_mild_asymmetry():
    m = np.array([[1.0, 2.0 + 1e-14], [2.0, 5.0]])
    a = DenseOp(m)
    assert np.allclose(a.to_dense(), a.to_dense().T)


def test_dense_rejects_asymmetric():
    with pytest.raises(ValueError):
        DenseOp(np.array([[1.0, 2.0], [0.0, 5.0]]))


def test_diagonal_and_callback_agree():
    d = np.array([3.0, -1.0, 0.5])
    diag = DiagonalOp(d)
    cb = CallbackOp(lambda v: d * v, 3)
    v = np.array([1.0, 2.0, 4.0])
    assert np.allclose(diag.apply(v), cb.apply(v))
    assert np.allclose(diag.to_dense(), np.diag(d))


def test_eiglowrank_matches_dense_form():
    rng = np.random.default_rng(0)
    g = rng.standard_normal((6, 3))
    u, _ = np.linalg.qr(g)
    d = np.array([2.0, -1.0, 0.5])
    op = EigLowRankOp(u, d, shift=0.25)
    full = (u * d) @ u.T + 0.25 * np.eye(6)
    v = rng.standard_normal(6)
    assert np.allclose(op.apply(v), full @ v)
    assert np.allclose(op.to_dense(), full)


def test_eiglowrank_requires_orthonormal_factor():
    u = np.ones((4, 2))
    with pytest.raises(ValueError):
        EigLowRankOp(u, np.array([1.0, 2.0]))


def test_dimension_mismatch():
    a = DiagonalOp(np.array([1.0, 2.0]))
    with pytest.raises(DimensionMismatchError):
        a.apply(np.ones(3))


def test_norm_estimate_close_to_spectral_norm():
    d = np.array([1.0, -7.0, 3.0, 0.1])
    a = DiagonalOp(d)
    est = a.norm_estimate(n_iter=200)
    assert est == pytest.approx(7.0, rel=1e-6)
