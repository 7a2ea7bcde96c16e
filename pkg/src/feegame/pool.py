"""Transaction pools, fee levels, Zipf-like fee generation, and strategy validation."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BoundViolation, SumMismatch

__all__ = [
    "TransactionPool",
    "FeeLevels",
    "ZipfSpec",
    "GameConfig",
    "MarginalStrategy",
    "group_fee_levels",
    "zipf_pool",
    "validate_marginals",
    "as_marginals",
    "read_pool",
    "write_pool",
]

SUM_TOL = 1e-9


@dataclass
class TransactionPool:
    """The shared mempool: positive fees, held sorted in descending order."""

    fees: np.ndarray

    def __post_init__(self):
        fees = np.asarray(self.fees, dtype=float).ravel()
        if fees.size < 1:
            raise ValueError("pool must contain at least one transaction")
        if np.any(fees <= 0.0) or not np.all(np.isfinite(fees)):
            raise ValueError("all fees must be positive and finite")
        self.fees = np.sort(fees)[::-1].copy()

    @property
    def m(self) -> int:
        return self.fees.size

    @property
    def max_fee(self) -> float:
        return float(self.fees[0])


@dataclass
class FeeLevels:
    """Distinct fee values with multiplicities, values strictly decreasing."""

    values: np.ndarray
    counts: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).ravel()
        self.counts = np.asarray(self.counts, dtype=int).ravel()
        if self.values.size != self.counts.size or self.values.size == 0:
            raise ValueError("values and counts must be nonempty and aligned")
        if np.any(np.diff(self.values) >= 0):
            raise ValueError("fee values must be strictly decreasing")
        if np.any(self.counts < 1):
            raise ValueError("every level needs a positive count")

    @property
    def n_levels(self) -> int:
        return self.values.size

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def expand(self) -> np.ndarray:
        """Per-transaction fees, descending (inverse of grouping)."""
        return np.repeat(self.values, self.counts)


@dataclass(frozen=True)
class ZipfSpec:
    """Zipf-like fee sampling: fee value i in 1..max_fee has weight i^(-shape)."""

    max_fee: int
    shape: float
    m: int
    seed: int

    def __post_init__(self):
        if self.max_fee < 1:
            raise ValueError("max_fee must be >= 1")
        if self.shape < 0:
            raise ValueError("shape must be >= 0")
        if self.m < 1:
            raise ValueError("m must be >= 1")


@dataclass(frozen=True)
class GameConfig:
    """Validator count and per-block capacity."""

    n_validators: int
    block_capacity: int

    def __post_init__(self):
        if self.n_validators < 2:
            raise ValueError("need at least 2 validators")
        if self.block_capacity < 1:
            raise ValueError("block capacity must be >= 1")


@dataclass
class MarginalStrategy:
    """A mixed strategy in marginal form: q[i] = P(transaction i is included)."""

    q: np.ndarray

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float).ravel()

    def __len__(self) -> int:
        return self.q.size


def as_marginals(strategy) -> np.ndarray:
    """Coerce a MarginalStrategy or array-like to a float vector."""
    if isinstance(strategy, MarginalStrategy):
        return strategy.q
    return np.asarray(strategy, dtype=float).ravel()


def group_fee_levels(pool: TransactionPool) -> FeeLevels:
    """Group the pool's fees into distinct descending levels with counts."""
    values, counts = np.unique(pool.fees, return_counts=True)
    return FeeLevels(values=values[::-1].copy(), counts=counts[::-1].copy())


def zipf_pool(spec: ZipfSpec) -> TransactionPool:
    """Draw m i.i.d. fees from {1, ..., max_fee} with P(i) proportional to i^(-shape).

    The stream is numpy's PCG64 seeded with ``spec.seed``, so identical specs
    produce identical pools on every platform.  shape = 0 is the uniform
    distribution.
    """
    values = np.arange(1, spec.max_fee + 1, dtype=float)
    weights = values ** (-spec.shape)
    probs = weights / weights.sum()
    rng = np.random.default_rng(spec.seed)
    fees = rng.choice(values, size=spec.m, p=probs)
    return TransactionPool(fees=fees)


def validate_marginals(q, config: GameConfig) -> MarginalStrategy:
    """Check box bounds and the coordinate sum against the block capacity."""
    arr = np.asarray(q, dtype=float).ravel()
    bad = np.flatnonzero((arr < 0.0) | (arr > 1.0) | ~np.isfinite(arr))
    if bad.size:
        i = int(bad[0])
        raise BoundViolation(i, float(arr[i]))
    b = config.block_capacity
    if abs(arr.sum() - b) > SUM_TOL * b:
        raise SumMismatch(f"sum(q) = {arr.sum()!r}, expected {b}")
    return MarginalStrategy(q=arr)


def _format_fee(x: float) -> str:
    if x == int(x):
        return str(int(x))
    return repr(x)


def read_pool(path) -> TransactionPool:
    """Load a pool from disk; format chosen by extension.

    ``.json`` holds a JSON array of positive numbers; ``.txt`` and ``.csv``
    hold one positive number per line.
    """
    path = Path(path)
    ext = path.suffix.lower()
    if ext == ".json":
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, list):
            raise ValueError(f"{path}: expected a JSON array of fees")
        fees = [float(x) for x in data]
    elif ext in (".txt", ".csv"):
        with open(path) as fh:
            fees = [float(line) for line in fh if line.strip()]
    else:
        raise ValueError(f"{path}: unsupported pool extension {ext!r} (use .json, .txt or .csv)")
    return TransactionPool(fees=np.asarray(fees, dtype=float))


def write_pool(pool: TransactionPool, path) -> None:
    """Write a pool to disk in the format implied by the extension."""
    path = Path(path)
    ext = path.suffix.lower()
    if ext == ".json":
        items = [int(f) if f == int(f) else f for f in pool.fees]
        with open(path, "w") as fh:
            json.dump(items, fh)
            fh.write("\n")
    elif ext in (".txt", ".csv"):
        with open(path, "w") as fh:
            for f in pool.fees:
                fh.write(_format_fee(float(f)) + "\n")
    else:
        raise ValueError(f"{path}: unsupported pool extension {ext!r} (use .json, .txt or .csv)")
