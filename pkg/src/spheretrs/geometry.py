"""The unit sphere as a Riemannian manifold under a variable metric.

All formulas are expressed in ambient coordinates.  With metric matrix M_x
the tangent projector is P_x = I - (x' M_x^{-1} x)^{-1} M_x^{-1} x x', the
retraction is radial normalization, transport is projection at the target
point, and the gradient of q is P_x M_x^{-1} (Ax + b).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .btrs import BtrsProblem, affine_rayleigh
from .precond import PhiFilter, Preconditioner


@dataclass(frozen=True)
class TangentVector:
    """Ambient direction attached to a base point on the sphere."""

    at: np.ndarray
    dir: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "at", np.asarray(self.at, dtype=float))
        object.__setattr__(self, "dir", np.asarray(self.dir, dtype=float))


def _same_base(eta: TangentVector, xi: TangentVector) -> None:
    if eta.at is not xi.at and not np.array_equal(eta.at, xi.at):
        raise ValueError("tangent vectors have different base points")


class MetricScheme:
    """Map x -> M_x defining the Riemannian metric in ambient coordinates."""

    def mapply(self, p: BtrsProblem, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        """M_x v."""
        raise NotImplementedError

    def minv(self, p: BtrsProblem, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        """M_x^{-1} v."""
        raise NotImplementedError

    def shift_at(self, p: BtrsProblem, x: np.ndarray, mu: float | None = None) -> float:
        """Scalar state of the metric at x (used to reuse mu_x computations)."""
        return 0.0


class StandardMetric(MetricScheme):
    """M_x = I; the sphere as a Riemannian submanifold of Euclidean space."""

    def mapply(self, p, x, v):
        return v

    def minv(self, p, x, v):
        return v


class SeededMetric(MetricScheme):
    """M_x = M + phi(-mu_x) I for a fixed seed M and smooth filter phi."""

    def __init__(self, seed: Preconditioner, phi: PhiFilter):
        self.seed = seed
        self.phi = phi

    def shift_at(self, p, x, mu=None):
        if mu is None:
            mu = affine_rayleigh(p, x)
        return self.phi(-mu)

    def mapply(self, p, x, v, shift: float | None = None):
        if shift is None:
            shift = self.shift_at(p, x)
        return self.seed.apply(v) + shift * v

    def minv(self, p, x, v, shift: float | None = None):
        if shift is None:
            shift = self.shift_at(p, x)
        return self.seed.solve(shift, v)


def metric_inner(
    m: MetricScheme,
    p: BtrsProblem,
    x,
    eta: TangentVector,
    xi: TangentVector,
) -> float:
    """g_x(eta, xi) = eta' M_x xi."""
    _same_base(eta, xi)
    return float(eta.dir @ m.mapply(p, np.asarray(x, dtype=float), xi.dir))


def project_tangent(m: MetricScheme, p: BtrsProblem, x, v) -> TangentVector:
    """Metric-orthogonal projection of an ambient vector onto the tangent space."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if isinstance(m, StandardMetric):
        return TangentVector(x, v - x * float(x @ v))
    minv_x = m.minv(p, x, x)
    denom = float(x @ minv_x)
    return TangentVector(x, v - (float(x @ v) / denom) * minv_x)


def retract(x, eta: TangentVector) -> np.ndarray:
    """R_x(eta) = (x + eta)/||x + eta||."""
    y = np.asarray(x, dtype=float) + eta.dir
    return y / np.linalg.norm(y)


def rgrad(m: MetricScheme, p: BtrsProblem, x, ax: np.ndarray | None = None) -> TangentVector:
    """Riemannian gradient P_x M_x^{-1} (Ax + b) of q at x."""
    x = np.asarray(x, dtype=float)
    if ax is None:
        ax = p.a.apply(x)
    egrad = ax + p.b
    if isinstance(m, StandardMetric):
        return TangentVector(x, egrad - x * float(x @ egrad))
    if isinstance(m, SeededMetric):
        mu = float(x @ ax) + float(p.b @ x)
        shift = m.shift_at(p, x, mu)
        u = m.minv(p, x, egrad, shift)
        y = m.minv(p, x, x, shift)
    else:
        u = m.minv(p, x, egrad)
        y = m.minv(p, x, x)
    return TangentVector(x, u - (float(x @ u) / float(x @ y)) * y)


def transport(
    m: MetricScheme, p: BtrsProblem, eta: TangentVector, xi: TangentVector
) -> TangentVector:
    """Vector transport: project xi onto the tangent space at R_x(eta)."""
    _same_base(eta, xi)
    y = retract(eta.at, eta)
    return project_tangent(m, p, y, xi.dir)


def hess_apply_stationary(
    m: MetricScheme, p: BtrsProblem, xbar, mu: float, eta: TangentVector
) -> TangentVector:
    """Riemannian Hessian at a stationary point: P_x M_x^{-1}[A - mu*I] eta."""
    xbar = np.asarray(xbar, dtype=float)
    w = p.a.apply(eta.dir) - mu * eta.dir
    if isinstance(m, StandardMetric):
        return TangentVector(xbar, w - xbar * float(xbar @ w))
    if isinstance(m, SeededMetric):
        shift = m.phi(-mu)  # mu_xbar == mu at a stationary point
        u = m.minv(p, xbar, w, shift)
        y = m.minv(p, xbar, xbar, shift)
    else:
        u = m.minv(p, xbar, w)
        y = m.minv(p, xbar, xbar)
    return TangentVector(xbar, u - (float(xbar @ u) / float(xbar @ y)) * y)


def tangent_basis(x) -> np.ndarray:
    """Orthonormal (dot-product) basis of the tangent space at x.

    Householder complement: deterministic given x.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    w = x.copy()
    w[0] += np.sign(x[0]) if x[0] != 0 else 1.0
    w /= np.linalg.norm(w)
    h = np.eye(n) - 2.0 * np.outer(w, w)
    # Column 0 of H is -sign(x[0]) * x; the rest span the complement.
    return h[:, 1:]
