"""Analytic throughput metrics, symmetric payoffs, and equilibrium certification."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pool import GameConfig, MarginalStrategy, TransactionPool, as_marginals
from .share import Mechanism, alpha_hat

__all__ = [
    "ThroughputReport",
    "effective_tx_throughput",
    "effective_fee_throughput",
    "throughput_report",
    "symmetric_payoff",
    "best_response",
    "ne_gap",
]


@dataclass
class ThroughputReport:
    """Expected unique transactions, total fee reward, and per-validator payoff."""

    theta_tx: float
    theta_fee: float
    per_validator_payoff: float


def _coverage(q: np.ndarray, n: int) -> np.ndarray:
    # P(included by at least one of N validators) per transaction
    return 1.0 - (1.0 - q) ** n


def effective_tx_throughput(strategy, config: GameConfig) -> float:
    """Expected number of transactions included by at least one validator."""
    q = as_marginals(strategy)
    return float(_coverage(q, config.n_validators).sum())


def effective_fee_throughput(strategy, pool: TransactionPool, config: GameConfig) -> float:
    """Expected total fee value over transactions included by at least one validator."""
    q = as_marginals(strategy)
    return float((pool.fees * _coverage(q, config.n_validators)).sum())


def throughput_report(strategy, pool: TransactionPool, config: GameConfig) -> ThroughputReport:
    """Both throughputs plus the symmetric per-validator payoff (fee split / N)."""
    theta_tx = effective_tx_throughput(strategy, config)
    theta_fee = effective_fee_throughput(strategy, pool, config)
    return ThroughputReport(
        theta_tx=theta_tx,
        theta_fee=theta_fee,
        per_validator_payoff=theta_fee / config.n_validators,
    )


def symmetric_payoff(
    mechanism: Mechanism, strategy, pool: TransactionPool, config: GameConfig
) -> float:
    """Expected reward of one validator when all play the same marginals.

    Equals effective_fee_throughput / N for both mechanisms: the collected
    fees are split symmetrically, only the split rule differs.
    """
    q = as_marginals(strategy)
    v = pool.fees
    n = config.n_validators
    if mechanism is Mechanism.RFA:
        return float(np.sum(q * v * alpha_hat(q, n)))
    return float(np.sum((v / n) * _coverage(q, n)))


def best_response(
    mechanism: Mechanism, strategy, pool: TransactionPool, config: GameConfig
) -> tuple[MarginalStrategy, float]:
    """Optimal deviation against everyone else playing ``strategy``.

    The deviator's payoff is linear in its own marginals, with coefficient
    v_i * alpha_hat(q_i) under RFA and (v_i / N)(1 - q_i)^(N-1) under CFS
    (plus, for CFS, a baseline collected from others' inclusions regardless
    of the deviation).  An extreme point is therefore optimal: put mass 1 on
    the b largest coefficients, ties broken toward the lower index.
    """
    q = as_marginals(strategy)
    v = pool.fees
    n = config.n_validators
    b = config.block_capacity
    if mechanism is Mechanism.RFA:
        coef = v * alpha_hat(q, n)
        baseline = 0.0
    else:
        others_cover = 1.0 - (1.0 - q) ** (n - 1)
        coef = (v / n) * (1.0 - q) ** (n - 1)
        baseline = float(np.sum((v / n) * others_cover))
    order = np.argsort(-coef, kind="stable")
    chosen = order[:b]
    x = np.zeros(q.size)
    x[chosen] = 1.0
    payoff = baseline + float(coef[chosen].sum())
    return MarginalStrategy(q=x), payoff


def ne_gap(mechanism: Mechanism, strategy, pool: TransactionPool, config: GameConfig) -> float:
    """Best-response payoff minus the symmetric payoff, floored at zero."""
    _, deviation = best_response(mechanism, strategy, pool, config)
    gap = deviation - symmetric_payoff(mechanism, strategy, pool, config)
    return max(gap, 0.0)
