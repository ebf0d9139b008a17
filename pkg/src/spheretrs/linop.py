"""Symmetric linear operators accessed only through matrix-vector products.

Every algorithm in this package touches the quadratic-term matrix A through
the :class:`SymOp` interface, so dense, diagonal, low-rank and fully opaque
(callback) representations are interchangeable.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np


class DimensionMismatchError(ValueError):
    """Vector length does not match the operator dimension."""


def _as_vector(v, n: int) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (n,):
        raise DimensionMismatchError(
            f"expected vector of length {n}, got shape {v.shape}"
        )
    return v


class SymOp:
    """Abstract symmetric linear operator on R^n.

    Immutable after construction; ``apply`` allocates its output and keeps
    no hidden state, so instances are safe to share across threads.
    """

    dim: int

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("operator dimension must be positive")
        self.dim = int(dim)
        self._norm_estimate: Optional[float] = None

    def _matvec(self, v: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def apply(self, v) -> np.ndarray:
        """Return A v."""
        v = _as_vector(v, self.dim)
        return self._matvec(v)

    def quadratic_form(self, v) -> float:
        """Return v^T A v using a single operator application."""
        v = _as_vector(v, self.dim)
        return float(v @ self._matvec(v))

    def norm_estimate(self, n_iter: int = 20, seed: int = 0) -> float:
        """Spectral-norm estimate via power iteration on demand.

        Callback operators carry no norm information, so this is the one
        place the package ever probes for ||A||.
        """
        if self._norm_estimate is None:
            rng = np.random.default_rng(seed)
            v = rng.standard_normal(self.dim)
            v /= np.linalg.norm(v)
            est = 0.0
            for _ in range(n_iter):
                w = self._matvec(v)
                est = float(np.linalg.norm(w))
                if est == 0.0:
                    break
                v = w / est
            self._norm_estimate = est
        return self._norm_estimate

    def to_dense(self) -> np.ndarray:
        """Materialize the operator as a dense symmetric array.

        Intended for diagnostics and oracles only; cost is n applies for
        representations without explicit storage.
        """
        n = self.dim
        out = np.empty((n, n))
        e = np.zeros(n)
        for i in range(n):
            e[i] = 1.0
            out[:, i] = self._matvec(e)
            e[i] = 0.0
        return 0.5 * (out + out.T)


class DenseOp(SymOp):
    """Dense symmetric matrix; symmetrized as (X + X^T)/2 at construction."""

    def __init__(self, matrix):
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("dense operator requires a square matrix")
        sym = 0.5 * (matrix + matrix.T)
        denom = max(np.linalg.norm(matrix, "fro"), 1e-300)
        if np.linalg.norm(matrix - sym, "fro") / denom > 1e-12:
            raise ValueError("matrix is not symmetric to relative tolerance 1e-12")
        super().__init__(matrix.shape[0])
        self.matrix = sym

    def _matvec(self, v):
        return self.matrix @ v

    def to_dense(self):
        return self.matrix.copy()


class DiagonalOp(SymOp):
    """Diagonal operator stored as its length-n diagonal."""

    def __init__(self, diag):
        diag = np.asarray(diag, dtype=float)
        if diag.ndim != 1:
            raise ValueError("diagonal must be a vector")
        super().__init__(diag.shape[0])
        self.diag = diag

    def _matvec(self, v):
        return self.diag * v

    def to_dense(self):
        return np.diag(self.diag)


class EigLowRankOp(SymOp):
    """U diag(d) U^T + sigma*I with orthonormal n-by-r factor U."""

    def __init__(self, u, d, shift: float = 0.0):
        u = np.asarray(u, dtype=float)
        d = np.asarray(d, dtype=float)
        if u.ndim != 2 or d.ndim != 1 or u.shape[1] != d.shape[0]:
            raise ValueError("factor U must be n-by-r with r eigenvalues")
        r = u.shape[1]
        if np.linalg.norm(u.T @ u - np.eye(r), "fro") > 1e-10:
            raise ValueError("factor U is not orthonormal (||U^T U - I|| > 1e-10)")
        super().__init__(u.shape[0])
        self.u = u
        self.d = d
        self.shift = float(shift)

    def _matvec(self, v):
        return self.u @ (self.d * (self.u.T @ v)) + self.shift * v

    def to_dense(self):
        return (self.u * self.d) @ self.u.T + self.shift * np.eye(self.dim)


class CallbackOp(SymOp):
    """Opaque matrix-free operator defined by an apply function."""

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], dim: int):
        super().__init__(dim)
        self._fn = fn

    def _matvec(self, v):
        out = np.asarray(self._fn(v), dtype=float)
        if out.shape != (self.dim,):
            raise DimensionMismatchError("callback returned wrong shape")
        return out


def apply(op: SymOp, v) -> np.ndarray:
    """Return A v for the represented A."""
    return op.apply(v)


def quadratic_form(op: SymOp, v) -> float:
    """Return v^T A v, computed with one apply."""
    return op.quadratic_form(v)
