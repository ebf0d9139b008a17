"""Matrix-free minimal eigenpair computation.

Block Lanczos with full reorthogonalization.  Problem sizes here are
moderate, so robustness is preferred over memory: misclassifying a hard
case poisons the restart logic downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import numpy as np

from .linop import SymOp


class EigenSolverError(RuntimeError):
    """No convergence within the iteration budget; carries the best pair."""

    def __init__(self, message: str, lambda_min: float, vector: np.ndarray):
        super().__init__(message)
        self.lambda_min = lambda_min
        self.vector = vector


@dataclass(frozen=True)
class MinEigResult:
    lambda_min: float
    basis: List[np.ndarray]  # orthonormal, residual <= tol_eig*max(1,|lambda|)
    tol_eig: float
    iterations: int


def _orthonormalize(block: np.ndarray, against: np.ndarray | None) -> np.ndarray:
    """Orthogonalize columns of ``block`` against ``against`` and each other.

    Two rounds of classical Gram-Schmidt followed by a QR; rank-deficient
    columns are dropped.
    """
    for _ in range(2):
        if against is not None and against.shape[1] > 0:
            block = block - against @ (against.T @ block)
    q, r = np.linalg.qr(block)
    keep = np.abs(np.diag(r)) > 1e-12 * max(1.0, np.abs(r).max())
    return q[:, keep]


def min_eigpair(
    a: SymOp,
    tol: float = 1e-10,
    max_iter: int | None = None,
    block: int = 2,
    seed: int = 0,
) -> MinEigResult:
    """Smallest eigenvalue of A and an orthonormal basis of its Ritz cluster.

    Ritz values within ``10*tol`` (relative) of the smallest are grouped
    into the returned basis, approximating the minimal eigenspace when the
    eigenvalue is numerically multiple.  ``block > 1`` is what makes that
    detection possible.
    """
    n = a.dim
    if tol <= 0:
        raise ValueError("tol must be positive")
    block = max(1, min(block, min(8, n)))
    if max_iter is None:
        max_iter = 10 * n

    rng = np.random.default_rng(seed)
    v = _orthonormalize(rng.standard_normal((n, block)), None)
    basis = np.zeros((n, 0))
    a_basis = np.zeros((n, 0))
    best_val = np.inf
    best_vec = None

    iterations = 0
    while iterations < max_iter and basis.shape[1] < n:
        iterations += 1
        if v.shape[1] == 0:
            # Krylov breakdown: restart with fresh random directions in the
            # orthogonal complement.
            v = _orthonormalize(rng.standard_normal((n, block)), basis)
            if v.shape[1] == 0:
                break
        basis = np.hstack([basis, v])
        av = np.column_stack([a.apply(v[:, j]) for j in range(v.shape[1])])
        a_basis = np.hstack([a_basis, av])

        h = basis.T @ a_basis
        h = 0.5 * (h + h.T)
        theta, s = np.linalg.eigh(h)
        ritz = basis @ s[:, 0]
        a_ritz = a_basis @ s[:, 0]
        res = float(np.linalg.norm(a_ritz - theta[0] * ritz))
        best_val, best_vec = theta[0], ritz

        if res <= tol * max(1.0, abs(theta[0])):
            cluster = np.flatnonzero(
                theta - theta[0] <= 10.0 * tol * max(1.0, abs(theta[0]))
            )
            vecs, ok = [], True
            for j in cluster:
                y = basis @ s[:, j]
                ay = a_basis @ s[:, j]
                if np.linalg.norm(ay - theta[j] * y) <= tol * max(1.0, abs(theta[j])):
                    vecs.append(y / np.linalg.norm(y))
                else:
                    ok = False
            # Certify the cluster boundary: the smallest Ritz value outside
            # the cluster must itself be converged, otherwise an unresolved
            # copy of lambda_min could still be hiding above it.
            edge = len(cluster)
            if ok and edge < len(theta):
                y = basis @ s[:, edge]
                ay = a_basis @ s[:, edge]
                ok = (
                    np.linalg.norm(ay - theta[edge] * y)
                    <= tol * max(1.0, abs(theta[edge]))
                )
            if ok and vecs:
                return MinEigResult(float(theta[0]), vecs, tol, iterations)

        v = _orthonormalize(av, basis)

    if basis.shape[1] >= n:
        # Krylov space exhausted: the Ritz decomposition is exact.
        h = basis.T @ a_basis
        h = 0.5 * (h + h.T)
        theta, s = np.linalg.eigh(h)
        cluster = np.flatnonzero(
            theta - theta[0] <= 10.0 * tol * max(1.0, abs(theta[0]))
        )
        vecs = []
        for j in cluster:
            y = basis @ s[:, j]
            vecs.append(y / np.linalg.norm(y))
        return MinEigResult(float(theta[0]), vecs, tol, iterations)

    raise EigenSolverError(
        f"no convergence within {max_iter} iterations", float(best_val), best_vec
    )
