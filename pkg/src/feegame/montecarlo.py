"""Monte Carlo validation: realize marginals as exact-size blocks and simulate rewards.

A marginal vector q with sum(q) = b is realized as a random b-subset by
systematic (Madow) sampling: lay the q_i out as consecutive intervals along
[0, b] in a uniformly random order, then select the b intervals hit by the
grid u, u+1, ..., u+b-1 for a single uniform offset u.  Every draw has
exactly b distinct indices and inclusion probabilities exactly q_i; the
random permutation removes the method's dependence between adjacent indices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleCapacity
from .pool import GameConfig, TransactionPool, as_marginals
from .rng import derive_seed
from .share import Mechanism

__all__ = ["SimulationReport", "sample_subset", "simulate"]

# tags for per-(run, validator) and per-run reward sub-streams
_DRAW_TAG = 0
_WINNER_TAG = 1


@dataclass
class SimulationReport:
    """Per-run means and sample standard deviations over a simulation batch."""

    runs: int
    theta_tx_mean: float
    theta_tx_std: float
    theta_fee_mean: float
    theta_fee_std: float
    per_validator_reward_mean: float
    per_validator_reward_std: float
    seed: int


def sample_subset(strategy, config: GameConfig, rng: np.random.Generator) -> np.ndarray:
    """Draw one block: exactly b distinct indices with inclusion probabilities q.

    The marginals are renormalized multiplicatively to sum to b exactly
    (correction at most the validation tolerance) before the systematic pass,
    so floating error can never change the block size.
    """
    q = as_marginals(strategy)
    m = q.size
    b = config.block_capacity
    if b > m:
        raise InfeasibleCapacity(f"capacity {b} exceeds strategy length {m}")
    q = np.minimum(q * (b / q.sum()), 1.0)
    perm = rng.permutation(m)
    edges = np.minimum(np.cumsum(q[perm]), float(b))
    edges[-1] = b  # absorb cumulative rounding dust in the last interval
    offset = rng.random()
    picks = np.searchsorted(edges, offset + np.arange(b), side="right")
    chosen = perm[picks]
    assert chosen.size == b and np.unique(chosen).size == b
    return np.sort(chosen)


def _run_once(strategy, pool, config, mechanism, seed, run_index):
    """One simulated round: (unique count, collected fees, per-validator rewards).

    Each validator draws on a sub-stream derived from (seed, run, validator),
    so the result is independent of execution order; RFA winner picks consume
    a separate per-run stream in ascending transaction order.
    """
    n = config.n_validators
    fees = pool.fees
    included_by = np.zeros((n, pool.m), dtype=bool)
    for k in range(n):
        rng = np.random.default_rng(derive_seed(seed, _DRAW_TAG, run_index, k))
        included_by[k, sample_subset(strategy, config, rng)] = True
    included = np.flatnonzero(included_by.any(axis=0))
    fee_total = float(fees[included].sum())
    if mechanism is Mechanism.RFA:
        rewards = np.zeros(n)
        winner_rng = np.random.default_rng(derive_seed(seed, _WINNER_TAG, run_index))
        for i in included:
            owners = np.flatnonzero(included_by[:, i])
            rewards[owners[winner_rng.integers(owners.size)]] += fees[i]
    else:
        rewards = np.full(n, fee_total / n)
    return included.size, fee_total, rewards


def simulate(
    strategy,
    pool: TransactionPool,
    config: GameConfig,
    mechanism: Mechanism,
    runs: int,
    seed: int,
) -> SimulationReport:
    """Simulate N validators drawing blocks independently for ``runs`` rounds.

    Collected fees are the fees of transactions included at least once; under
    RFA each such fee goes to one uniformly random includer, under CFS every
    validator is credited fee/N.  The per-validator figure aggregated across
    runs is the per-run average over validators; std fields are sample
    standard deviations over runs (zero for a single run).  Deterministic
    given ``seed``.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    tx_counts = np.empty(runs)
    fee_totals = np.empty(runs)
    per_validator = np.empty(runs)
    for r in range(runs):
        tx_counts[r], fee_totals[r], rewards = _run_once(
            strategy, pool, config, mechanism, seed, r
        )
        per_validator[r] = rewards.mean()

    def _std(x):
        return float(np.std(x, ddof=1)) if runs > 1 else 0.0

    return SimulationReport(
        runs=runs,
        theta_tx_mean=float(tx_counts.mean()),
        theta_tx_std=_std(tx_counts),
        theta_fee_mean=float(fee_totals.mean()),
        theta_fee_std=_std(fee_totals),
        per_validator_reward_mean=float(per_validator.mean()),
        per_validator_reward_std=_std(per_validator),
        seed=seed,
    )
