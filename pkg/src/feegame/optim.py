"""Symmetric equilibrium computation by projected gradient ascent.

Both mechanisms admit a concave program over the capped simplex
{p : sum(p) = b, 0 <= p_i <= 1} whose KKT points are exactly the symmetric
Nash equilibria:

    RFA:  maximize  sum_i v_i * integral_0^{p_i} alpha_hat(q) dq
    CFS:  maximize  sum_i (v_i / N) * (1 - (1 - p_i)^N)

Fixed-step projected gradient ascent from the uniform feasible start is
monotone and deterministic; the step comes from a bound on the gradient's
Lipschitz constant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleCapacity
from .pool import GameConfig, MarginalStrategy, TransactionPool, as_marginals
from .share import Mechanism, alpha_hat, cfs_share, rfa_potential

__all__ = [
    "SolverConfig",
    "EquilibriumResult",
    "project_capped_simplex",
    "objective",
    "gradient",
    "solve_ne",
    "kkt_residual",
]

# Entries this close to 0 or 1 are treated as boundary in KKT classification.
SNAP_TOL = 1e-12

# converged requires the KKT residual to be below this multiple of the top fee
KKT_TOL_FACTOR = 1e-6


@dataclass(frozen=True)
class SolverConfig:
    """Projected-gradient settings.  step_size None means the Lipschitz default."""

    step_size: float | None = None
    max_iters: int = 100_000
    tol: float = 1e-9

    def __post_init__(self):
        if self.step_size is not None and self.step_size <= 0:
            raise ValueError("step_size must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


@dataclass
class EquilibriumResult:
    """Solver output: the strategy plus convergence diagnostics."""

    strategy: MarginalStrategy
    iterations: int
    kkt_residual: float
    objective: float
    converged: bool


def _project(y: np.ndarray, b: float, hint: float | None = None):
    """Euclidean projection onto {p : sum(p) = b, 0 <= p <= 1}.

    Bisects the shift lam in p = clip(y - lam, 0, 1); the coordinate sum is
    continuous and nonincreasing in lam.  Returns (p, lam); ``hint`` seeds
    the bracket with the previous shift, which tightens quickly inside an
    iterative solver.
    """
    y = np.asarray(y, dtype=float).ravel()
    m = y.size
    if not 0 <= b <= m:
        raise InfeasibleCapacity(f"capacity {b} outside [0, {m}]")
    if b == 0:
        return np.zeros(m), float(y.max())
    if b == m:
        return np.ones(m), float(y.min()) - 1.0

    def total(lam):
        return float(np.clip(y - lam, 0.0, 1.0).sum())

    lo_cold = float(y.min()) - 1.0  # total = m >= b
    hi_cold = float(y.max())        # total = 0 <= b
    if hint is not None:
        w = 1e-6
        lo = max(lo_cold, hint - w)
        hi = min(hi_cold, hint + w)
        while total(lo) < b and lo > lo_cold:
            w *= 16.0
            lo = max(lo_cold, hint - w)
        while total(hi) > b and hi < hi_cold:
            w *= 16.0
            hi = min(hi_cold, hint + w)
    else:
        lo, hi = lo_cold, hi_cold

    tol = 1e-12 * max(b, 1.0)
    lam = 0.5 * (lo + hi)
    for _ in range(200):
        lam = 0.5 * (lo + hi)
        s = total(lam)
        if abs(s - b) <= tol:
            break
        if s > b:
            lo = lam
        else:
            hi = lam
        if hi - lo <= 1e-16 * max(1.0, abs(hi)):
            break
    p = np.clip(y - lam, 0.0, 1.0)

    # Spread the floating-point residual over the free coordinates so the
    # sum constraint holds exactly.
    r = b - p.sum()
    if r != 0.0:
        free = (p > 0.0) & (p < 1.0)
        if free.any():
            p[free] = np.clip(p[free] + r / free.sum(), 0.0, 1.0)
    return p, lam


def project_capped_simplex(y, b) -> MarginalStrategy:
    """argmin ||p - y||^2 subject to sum(p) = b and 0 <= p_i <= 1."""
    p, _ = _project(np.asarray(y, dtype=float), b)
    return MarginalStrategy(q=p)


def _gradient_arr(mechanism: Mechanism, p: np.ndarray, fees: np.ndarray, n: int) -> np.ndarray:
    if mechanism is Mechanism.RFA:
        return fees * alpha_hat(p, n)
    return fees * (1.0 - p) ** (n - 1)


def objective(mechanism: Mechanism, strategy, pool: TransactionPool, config: GameConfig) -> float:
    """Value of the concave program at the given strategy."""
    p = as_marginals(strategy)
    v = pool.fees
    n = config.n_validators
    if mechanism is Mechanism.RFA:
        return float(np.sum(v * rfa_potential(p, n)))
    return float(np.sum((v / n) * (1.0 - (1.0 - p) ** n)))


def gradient(mechanism: Mechanism, strategy, pool: TransactionPool, config: GameConfig) -> np.ndarray:
    """Per-transaction marginal reward: v_i * alpha_hat(p_i) (RFA) or v_i (1-p_i)^(N-1) (CFS)."""
    p = as_marginals(strategy)
    return _gradient_arr(mechanism, p, pool.fees, config.n_validators)


def kkt_residual(mechanism: Mechanism, strategy, pool: TransactionPool, config: GameConfig) -> float:
    """How far a strategy is from the equilibrium optimality conditions.

    The equilibrium multiplier is estimated as the median of v_i f(p_i) over
    interior coordinates (falling back to the largest excluded value, then 0);
    the residual is the worst violation of stationarity and complementary
    slackness against that multiplier.  Zero certifies a symmetric NE.
    """
    p = as_marginals(strategy).copy()
    p[p < SNAP_TOL] = 0.0
    p[p > 1.0 - SNAP_TOL] = 1.0
    n = config.n_validators
    if mechanism is Mechanism.RFA:
        g = pool.fees * alpha_hat(p, n)
    else:
        g = pool.fees * cfs_share(p, n)
    interior = (p > 0.0) & (p < 1.0)
    at_zero = p == 0.0
    at_one = p == 1.0
    if interior.any():
        lam = float(np.median(g[interior]))
    elif at_zero.any():
        lam = float(g[at_zero].max())
    else:
        lam = 0.0
    res = 0.0
    if interior.any():
        res = max(res, float(np.abs(g[interior] - lam).max()))
    if at_zero.any():
        res = max(res, float(np.maximum(g[at_zero] - lam, 0.0).max()))
    if at_one.any():
        res = max(res, float(np.maximum(lam - g[at_one], 0.0).max()))
    return res


def _auto_step(mechanism: Mechanism, top_fee: float, n: int) -> float:
    # Conservative per-coordinate Lipschitz bounds for the gradients:
    # |d/dp v alpha_hat| <= v N / 2 (RFA), |d/dp v (1-p)^(N-1)| <= v (N-1) (CFS).
    if mechanism is Mechanism.RFA:
        lipschitz = top_fee * n / 2.0
    else:
        lipschitz = top_fee * (n - 1)
    return 1.0 / (lipschitz + 1.0)


def solve_ne(
    mechanism: Mechanism,
    pool: TransactionPool,
    config: GameConfig,
    solver: SolverConfig | None = None,
    callback=None,
) -> EquilibriumResult:
    """Symmetric NE by fixed-step projected gradient ascent.

    Starts from the uniform feasible point p_i = b/m and stops when the
    max-norm iterate change drops below ``solver.tol`` or ``max_iters`` is
    reached.  ``converged`` additionally requires the KKT residual to fall
    below 1e-6 times the top fee.  ``callback``, if given, receives a copy of
    each iterate.
    """
    solver = solver or SolverConfig()
    v = pool.fees
    m = pool.m
    b = config.block_capacity
    n = config.n_validators
    if b > m:
        raise InfeasibleCapacity(f"capacity {b} exceeds pool size {m}")
    eta = solver.step_size
    if eta is None:
        eta = _auto_step(mechanism, float(v[0]), n)

    p = np.full(m, b / m, dtype=float)
    lam_hint = None
    delta = np.inf
    iterations = 0
    for iterations in range(1, solver.max_iters + 1):
        g = _gradient_arr(mechanism, p, v, n)
        p_next, lam_hint = _project(p + eta * g, b, hint=lam_hint)
        delta = float(np.abs(p_next - p).max())
        p = p_next
        if callback is not None:
            callback(p.copy())
        if delta < solver.tol:
            break

    kkt = kkt_residual(mechanism, p, pool, config)
    converged = delta < solver.tol and kkt <= KKT_TOL_FACTOR * float(v[0])
    return EquilibriumResult(
        strategy=MarginalStrategy(q=p),
        iterations=iterations,
        kkt_residual=kkt,
        objective=objective(mechanism, p, pool, config),
        converged=converged,
    )
