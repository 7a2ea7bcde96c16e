"""Benchmark strategies and a dispatch facade over all four."""

from __future__ import annotations

import enum

import numpy as np

from .errors import InfeasibleCapacity
from .optim import SolverConfig, solve_ne
from .pool import GameConfig, MarginalStrategy, TransactionPool, validate_marginals
from .share import Mechanism

__all__ = ["StrategyKind", "rts", "pts", "make_strategy"]


class StrategyKind(enum.Enum):
    RTS = "rts"
    PTS = "pts"
    NE_RFA = "ne_rfa"
    NE_CFS = "ne_cfs"


def _check_capacity(pool: TransactionPool, config: GameConfig) -> None:
    if config.block_capacity > pool.m:
        raise InfeasibleCapacity(
            f"capacity {config.block_capacity} exceeds pool size {pool.m}"
        )


def rts(pool: TransactionPool, config: GameConfig) -> MarginalStrategy:
    """Uniform selection: every transaction at q_i = b/m."""
    _check_capacity(pool, config)
    q = np.full(pool.m, config.block_capacity / pool.m)
    return validate_marginals(q, config)


def pts(pool: TransactionPool, config: GameConfig) -> MarginalStrategy:
    """Fee-proportional selection: q_i = b * v_i / sum(v).

    When the raw proportions exceed 1, the excess is clipped iteratively:
    saturated transactions are pinned at 1 and the remaining capacity is
    re-split proportionally over the rest, which preserves proportionality
    among unsaturated fees and the exact capacity sum.
    """
    _check_capacity(pool, config)
    fees = pool.fees
    m = pool.m
    q = np.zeros(m)
    free = np.ones(m, dtype=bool)
    capacity = float(config.block_capacity)
    for _ in range(m):
        w = fees[free]
        raw = capacity * w / w.sum()
        over = raw > 1.0
        if not over.any():
            q[free] = raw
            break
        idx = np.flatnonzero(free)[over]
        q[idx] = 1.0
        free[idx] = False
        capacity -= idx.size
    return validate_marginals(q, config)


def make_strategy(
    kind: StrategyKind,
    pool: TransactionPool,
    config: GameConfig,
    solver: SolverConfig | None = None,
) -> MarginalStrategy:
    """Build any of the four strategies for a pool."""
    if kind is StrategyKind.RTS:
        return rts(pool, config)
    if kind is StrategyKind.PTS:
        return pts(pool, config)
    mechanism = Mechanism.RFA if kind is StrategyKind.NE_RFA else Mechanism.CFS
    return solve_ne(mechanism, pool, config, solver).strategy
