"""First-order sphere solvers: gradient descent, conjugate gradient, the
double-start strategy, and the restart scheme driven by the reflection
across a minimal eigenvector.

All solvers share one descent loop with Armijo backtracking.  The initial
trial step is 1/||b|| whenever the step cap is enabled: steps below that
bound keep iterates inside the set S_E = {x : (v'b)(v'x) <= 0 for all
minimal eigenvectors v}, which is what makes the -b/||b|| start reach the
global optimum in the easy case.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from .btrs import BtrsProblem, classify, residual
from .eigmin import MinEigResult, min_eigpair
from .geometry import (
    MetricScheme,
    SeededMetric,
    StandardMetric,
    TangentVector,
    metric_inner,
)

STATUS_CONVERGED = "converged"
STATUS_MAX_ITER = "max_iter"
STATUS_FAILED = "failed"


@dataclass(frozen=True)
class SolverConfig:
    tol_grad: float = 1e-8
    tol_res: float = 1e-8
    max_iter: int = 10000
    armijo_tau: float = 0.5
    armijo_c: float = 1e-4
    step_cap_enabled: bool = True
    cg_restart: int | None = None  # default: problem dimension
    rng_seed: int = 0
    record_iterates: bool = False

    def __post_init__(self):
        if not (0.0 < self.armijo_tau < 1.0 and 0.0 < self.armijo_c < 1.0):
            raise ValueError("armijo parameters must lie in (0, 1)")


@dataclass
class SolveTrace:
    """Per-iteration scalars plus restart markers.

    Columns written by :meth:`to_csv`:
    iter,q,grad_norm,res_norm,step,elapsed_s,marker
    """

    iters: List[int] = field(default_factory=list)
    q: List[float] = field(default_factory=list)
    grad_norm: List[float] = field(default_factory=list)
    res_norm: List[float] = field(default_factory=list)
    step: List[float] = field(default_factory=list)
    elapsed_s: List[float] = field(default_factory=list)
    markers: List[Tuple[int, str]] = field(default_factory=list)
    iterates: List[np.ndarray] = field(default_factory=list)

    def record(self, it, qv, gn, rn, st, el, x=None):
        self.iters.append(it)
        self.q.append(qv)
        self.grad_norm.append(gn)
        self.res_norm.append(rn)
        self.step.append(st)
        self.elapsed_s.append(el)
        if x is not None:
            self.iterates.append(x)

    def mark(self, kind: str):
        self.markers.append((len(self.iters), kind))

    def extend(self, other: "SolveTrace"):
        offset = len(self.iters)
        self.iters.extend(i + offset for i in other.iters)
        self.q.extend(other.q)
        self.grad_norm.extend(other.grad_norm)
        self.res_norm.extend(other.res_norm)
        self.step.extend(other.step)
        self.elapsed_s.extend(other.elapsed_s)
        self.markers.extend((i + offset, k) for i, k in other.markers)
        self.iterates.extend(other.iterates)

    def to_csv(self, path):
        marker_at = dict(self.markers)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["iter", "q", "grad_norm", "res_norm", "step", "elapsed_s", "marker"])
            for k in range(len(self.iters)):
                w.writerow(
                    [
                        self.iters[k],
                        repr(float(self.q[k])),
                        repr(float(self.grad_norm[k])),
                        repr(float(self.res_norm[k])),
                        repr(float(self.step[k])),
                        repr(float(self.elapsed_s[k])),
                        marker_at.get(k, ""),
                    ]
                )


@dataclass
class SolveResult:
    x: np.ndarray
    mu: float
    q: float
    status: str
    trace: SolveTrace
    restarts: int = 0
    reason: str = ""

    @property
    def converged(self) -> bool:
        return self.status == STATUS_CONVERGED


def haar_unit(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform point on the sphere (normalized standard normal)."""
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def _initial_step(p: BtrsProblem, cfg: SolverConfig) -> float:
    if p.b_norm > 0 and cfg.step_cap_enabled:
        return 1.0 / p.b_norm
    # b = 0 makes the cap vacuous; scale by the curvature instead.
    return 2.0 / max(1e-16, p.a.norm_estimate())


def armijo_step(
    m: MetricScheme,
    p: BtrsProblem,
    x: np.ndarray,
    eta: TangentVector,
    cfg: SolverConfig,
) -> Tuple[float, np.ndarray]:
    """Backtrack from t = 1/||b|| until q(x) - q(R_x(-t eta)) >= t*c*g(eta,eta).

    ``eta`` is the Riemannian gradient (or any direction with the same
    sufficient-decrease measure); the step taken is R_x(-t eta).
    """
    ax = p.a.apply(x)
    q0 = 0.5 * float(x @ ax) + float(p.b @ x)
    gg = metric_inner(m, p, x, eta, eta)
    t, x_next, _, _ = _armijo(m, p, x, q0, ax, -eta.dir, gg, cfg)
    if t is None:
        raise RuntimeError("line search stalled (step below 1e-18)")
    return t, x_next


def _armijo(m, p, x, q0, ax, d, decrease, cfg, exact_init=False):
    """Backtracking line search along y(t) = (x + t d)/||x + t d||; accept
    when q(x) - q(y) >= t * c * decrease.  Returns (t, y, ay, qy) or
    (None,)*4 when no acceptable step exists above 1e-18.

    The decrease q(y) - q(x) is evaluated through its exact scalar
    expansion in t, which stays fully accurate even when the per-step
    decrease is far below the rounding level of q itself.

    With ``exact_init`` the first trial is the minimizer of the
    second-order model along the path, t = -d'(Ax+b) / d'(A - mu_x I)d;
    otherwise it is the capped step 1/||b||.
    """
    c = cfg.armijo_c
    tau = cfg.armijo_tau
    b = p.b
    # Scalars for the exact expansion of q((x+td)/||x+td||) - q(x).  The
    # first-order term d'(Ax+b) is a single dot product, so the computed
    # decrease keeps full relative accuracy even when it is far below the
    # rounding level of q itself.
    ad = p.a.apply(d)
    bx = float(b @ x)
    bd = float(b @ d)
    xax = float(x @ ax)
    de = float(d @ (ax + b))
    dad = float(d @ ad)
    xd = float(x @ d)
    dd = float(d @ d)
    t = _initial_step(p, cfg)
    if exact_init:
        curv = dad - dd * (xax + bx)
        if de < 0.0 and curv > 0.0:
            t = -de / curv
    while t >= 1e-18:
        s2m1 = 2.0 * t * xd + t * t * dd  # ||x+td||^2 - 1
        s2 = 1.0 + s2m1
        s = np.sqrt(s2)
        sm1 = s2m1 / (1.0 + s)
        dq = (
            t * de + t * bd * sm1 + 0.5 * t * t * dad - 0.5 * xax * s2m1
        ) / s2 - bx * sm1 / s
        if -dq >= t * c * decrease:
            y = x + t * d
            y /= np.linalg.norm(y)
            ay = p.a.apply(y)
            return t, y, ay, q0 + dq
        t *= tau
    return None, None, None, None


def _descent_loop(
    m: MetricScheme,
    p: BtrsProblem,
    x0: np.ndarray,
    cfg: SolverConfig,
    use_cg: bool,
    res_cap: Optional[float] = None,
) -> SolveResult:
    """Shared RGD/RCG loop with Armijo backtracking and a combined
    gradient-norm / stationarity-residual stopping rule."""
    b = p.b
    eff_tol_res = cfg.tol_res * max(1.0, p.b_norm)
    if res_cap is not None:
        eff_tol_res = min(eff_tol_res, res_cap)
    cg_restart = cfg.cg_restart if cfg.cg_restart is not None else p.dim
    standard = isinstance(m, StandardMetric)
    seeded = isinstance(m, SeededMetric)

    trace = SolveTrace()
    t_start = time.perf_counter()

    x = np.asarray(x0, dtype=float)
    x = x / np.linalg.norm(x)
    ax = p.a.apply(x)
    bx = float(b @ x)
    xax = float(x @ ax)
    q = 0.5 * xax + bx
    mu = xax + bx

    def gradient(x, ax, mu):
        egrad = ax + b
        if standard:
            g = egrad - x * float(x @ egrad)
            return g, g  # (direction form, M_x . tangent form coincide)
        if seeded:
            shift = m.phi(-mu)
            u = m.minv(p, x, egrad, shift)
            y = m.minv(p, x, x, shift)
        else:
            u = m.minv(p, x, egrad)
            y = m.minv(p, x, x)
        g = u - (float(x @ u) / float(x @ y)) * y
        if seeded:
            mg = m.mapply(p, x, g, shift)
        else:
            mg = m.mapply(p, x, g)
        return g, mg

    g, mg = gradient(x, ax, mu)
    gg = float(g @ mg)  # metric norm squared of the gradient
    d = -g
    dg = -gg  # g(d, grad)
    since_reset = 0
    status = STATUS_MAX_ITER
    reason = ""
    step = 0.0

    for it in range(cfg.max_iter):
        rn = float(np.linalg.norm(mu * x - ax - b))
        trace.record(
            it,
            q,
            np.sqrt(max(gg, 0.0)),
            rn,
            step,
            time.perf_counter() - t_start,
            x.copy() if cfg.record_iterates else None,
        )
        if gg <= cfg.tol_grad**2 and rn <= eff_tol_res:
            status = STATUS_CONVERGED
            break

        t, y, ay, qy = _armijo(
            m, p, x, q, ax, d, -dg, cfg, exact_init=not standard
        )
        if t is None:
            status = STATUS_FAILED
            reason = "stalled"
            break
        step = t

        if use_cg:
            g_old, gg_old, d_old = g, gg, d
        x, ax = y, ay
        bx = float(b @ x)
        xax = float(x @ ax)
        q = qy
        mu = xax + bx
        g, mg = gradient(x, ax, mu)
        gg = float(g @ mg)

        if use_cg:
            since_reset += 1
            # Transport the previous gradient and direction by projection.
            if standard:
                tg = g_old - x * float(x @ g_old)
                td = d_old - x * float(x @ d_old)
                mtg = tg
            else:
                if seeded:
                    shift = m.phi(-mu)
                    minv_x = m.minv(p, x, x, shift)
                else:
                    minv_x = m.minv(p, x, x)
                denom = float(x @ minv_x)
                tg = g_old - (float(x @ g_old) / denom) * minv_x
                td = d_old - (float(x @ d_old) / denom) * minv_x
                if seeded:
                    mtg = m.mapply(p, x, tg, shift)
                else:
                    mtg = m.mapply(p, x, tg)
            # Polak-Ribiere+ with metric inner products.
            beta = float(g @ mg - g @ mtg) / gg_old if gg_old > 0 else 0.0
            beta = max(0.0, beta)
            d = -g + beta * td
            dg = float(d @ mg)
            if dg >= 0.0 or since_reset >= cg_restart:
                d = -g
                dg = -gg
                since_reset = 0
        else:
            d = -g
            dg = -gg

    if status == STATUS_MAX_ITER:
        # The loop exhausted its budget after taking a step; log the final point.
        rn = float(np.linalg.norm(mu * x - ax - b))
        trace.record(
            len(trace.iters),
            q,
            np.sqrt(max(gg, 0.0)),
            rn,
            step,
            time.perf_counter() - t_start,
            x.copy() if cfg.record_iterates else None,
        )
    return SolveResult(x=x, mu=mu, q=q, status=status, trace=trace, reason=reason)


def naive_rgd(
    p: BtrsProblem,
    x0: np.ndarray,
    cfg: SolverConfig = SolverConfig(),
    res_cap: Optional[float] = None,
) -> SolveResult:
    """Riemannian gradient descent with the standard metric and radial
    retraction; the building block of the double-start strategy."""
    return _descent_loop(StandardMetric(), p, x0, cfg, use_cg=False, res_cap=res_cap)


def rcg(
    m: MetricScheme,
    p: BtrsProblem,
    x0: np.ndarray,
    cfg: SolverConfig = SolverConfig(),
    res_cap: Optional[float] = None,
) -> SolveResult:
    """Riemannian conjugate gradient (Polak-Ribiere+, projection transport)."""
    return _descent_loop(m, p, x0, cfg, use_cg=True, res_cap=res_cap)


def rgd(
    m: MetricScheme,
    p: BtrsProblem,
    x0: np.ndarray,
    cfg: SolverConfig = SolverConfig(),
    res_cap: Optional[float] = None,
) -> SolveResult:
    """Riemannian gradient descent under an arbitrary metric scheme."""
    return _descent_loop(m, p, x0, cfg, use_cg=False, res_cap=res_cap)


def double_start(p: BtrsProblem, cfg: SolverConfig = SolverConfig()) -> SolveResult:
    """Run gradient descent from -b/||b|| and from a random sphere point,
    return the better result.  The first start covers the easy case (it
    stays in S_E), the second covers the hard case (almost surely in S_H)."""
    rng = np.random.default_rng(cfg.rng_seed)
    results = []
    trace = SolveTrace()
    if p.b_norm > 0:
        trace.mark("cold_start")
        r1 = naive_rgd(p, -p.b / p.b_norm, cfg)
        trace.extend(r1.trace)
        results.append(r1)
    trace.mark("cold_start")
    r2 = naive_rgd(p, haar_unit(p.dim, rng), cfg)
    trace.extend(r2.trace)
    results.append(r2)

    ok = [r for r in results if r.status != STATUS_FAILED]
    if not ok:
        best = results[0]
        return replace(best, trace=trace)
    if len(ok) == 2 and abs(ok[0].q - ok[1].q) <= 1e-14 * max(1.0, abs(ok[0].q)):
        best = ok[0]  # tie: prefer the deterministic S_E start
    else:
        best = min(ok, key=lambda r: r.q)
    return SolveResult(
        x=best.x,
        mu=best.mu,
        q=best.q,
        status=best.status,
        trace=trace,
        reason=best.reason,
    )


def lpr_transform(x: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Reflection x - 2(u'x)u across the hyperplane orthogonal to u.

    Drops the objective by exactly 2(u'b)(u'x) and preserves unit norm.
    """
    return x - 2.0 * float(u @ x) * u


def lpr_solve(
    p: BtrsProblem,
    m: MetricScheme = StandardMetric(),
    inner: str = "rcg",
    cfg: SolverConfig = SolverConfig(),
    eig: Optional[MinEigResult] = None,
    x0: Optional[np.ndarray] = None,
    max_restarts: int = 10,
) -> SolveResult:
    """Globally convergent solver built on reflection restarts.

    A minimal eigenvector u of A with u'b != 0 certifies the easy case; the
    inner solver then runs with its stationarity test tightened to
    ||r|| <= |u'b|/2, and any return with mu >= lambda_min(A) is reflected
    across u and restarted.  In the hard case a single run from a random
    start suffices (its only stable stationary points are global optima).
    """
    if inner not in ("rgd", "rcg"):
        raise ValueError("inner solver must be 'rgd' or 'rcg'")
    run = rcg if inner == "rcg" else rgd
    rng = np.random.default_rng(cfg.rng_seed)
    if eig is None:
        eig = min_eigpair(p.a, tol=1e-10, seed=cfg.rng_seed)
    case = classify(p, eig)

    if not case.is_easy:
        start = x0 if x0 is not None else haar_unit(p.dim, rng)
        res = run(m, p, start, cfg)
        return res

    u = case.u
    alpha = case.alpha
    if x0 is None:
        # Deterministic start inside S_E (and S_H): the minimal eigenvector
        # signed against b.
        x0 = -np.sign(float(u @ p.b)) * u
    x = np.asarray(x0, dtype=float)
    trace = SolveTrace()
    restarts = 0
    while True:
        res = run(m, p, x, cfg, res_cap=alpha / 2.0)
        trace.extend(res.trace)
        if res.status == STATUS_FAILED:
            return replace(res, trace=trace, restarts=restarts)
        if res.mu < eig.lambda_min:
            return replace(res, trace=trace, restarts=restarts)
        restarts += 1
        if restarts > max_restarts:
            return SolveResult(
                x=res.x,
                mu=res.mu,
                q=res.q,
                status=STATUS_FAILED,
                trace=trace,
                restarts=restarts,
                reason="pathological",
            )
        trace.mark("lpr")
        x = lpr_transform(res.x, u)
