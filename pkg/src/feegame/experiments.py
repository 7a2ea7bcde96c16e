"""Parameter sweeps over pool size, fee ceiling, and fee skew, with CSV/JSON output.

Each swept value is evaluated on ``sim`` independent pools; the pool of a
replicate is shared by all strategies (paired comparison), and analytic
throughput formulas are the measurement, so a sweep is a deterministic
function of its base seed.  Replicate seeds come from
``derive_seed(base_seed, value_index, replicate_index)``; appending values to
a sweep therefore never perturbs existing cells.
"""

from __future__ import annotations

import concurrent.futures
import csv
import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .metrics import effective_fee_throughput, effective_tx_throughput
from .pool import GameConfig, ZipfSpec, zipf_pool
from .rng import derive_seed
from .strategies import StrategyKind, make_strategy

__all__ = [
    "Vary",
    "SweepBase",
    "SweepSpec",
    "SweepRow",
    "run_sweep",
    "write_results",
    "PAPER_M_GRID",
    "PAPER_MAXFEE_GRID",
    "PAPER_S_GRID",
]

RESULT_HEADER = [
    "vary_name",
    "vary_value",
    "strategy",
    "theta_tx_mean",
    "theta_tx_std",
    "theta_fee_mean",
    "theta_fee_std",
    "runs",
    "seed",
]

PAPER_M_GRID = (100, 200, 500, 1000, 2000, 5000, 10000)
PAPER_MAXFEE_GRID = tuple(range(5, 101, 5))
PAPER_S_GRID = tuple(round(0.1 * i, 1) for i in range(15))

ALL_STRATEGIES = (StrategyKind.RTS, StrategyKind.PTS, StrategyKind.NE_RFA, StrategyKind.NE_CFS)


class Vary(enum.Enum):
    M = "m"
    MAXFEE = "maxfee"
    S = "s"


@dataclass(frozen=True)
class SweepBase:
    """Baseline parameters; the defaults are the evaluation setup used throughout."""

    n_validators: int = 10
    block_capacity: int = 100
    m: int = 1000
    max_fee: int = 10
    shape: float = 0.0
    sim: int = 50
    seed: int = 1

    def __post_init__(self):
        if min(self.n_validators, self.block_capacity, self.m, self.max_fee, self.sim) < 1:
            raise ValueError("base parameters must be positive")
        if self.shape < 0:
            raise ValueError("shape must be >= 0")


@dataclass(frozen=True)
class SweepSpec:
    vary: Vary
    values: tuple
    base: SweepBase = SweepBase()
    strategies: tuple = ALL_STRATEGIES

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("sweep needs at least one value")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("sweep values must be strictly increasing")
        if not self.strategies:
            raise ValueError("sweep needs at least one strategy")


@dataclass
class SweepRow:
    vary_name: str
    vary_value: float
    strategy: str
    theta_tx_mean: float
    theta_tx_std: float
    theta_fee_mean: float
    theta_fee_std: float
    runs: int
    seed: int


def _cell_params(base: SweepBase, vary: Vary, value):
    m, max_fee, shape = base.m, base.max_fee, base.shape
    if vary is Vary.M:
        m = int(value)
    elif vary is Vary.MAXFEE:
        max_fee = int(value)
    else:
        shape = float(value)
    return m, max_fee, shape


def _run_replicate(base: SweepBase, vary: Vary, value_index: int, value, replicate: int,
                   strategies: tuple):
    """Metrics of every strategy on one replicate pool; None marks a failure."""
    m, max_fee, shape = _cell_params(base, vary, value)
    seed = derive_seed(base.seed, value_index, replicate)
    pool = zipf_pool(ZipfSpec(max_fee=max_fee, shape=shape, m=m, seed=seed))
    config = GameConfig(n_validators=base.n_validators, block_capacity=base.block_capacity)
    out = {}
    for kind in strategies:
        try:
            q = make_strategy(kind, pool, config)
            out[kind] = (
                effective_tx_throughput(q, config),
                effective_fee_throughput(q, pool, config),
            )
        except Exception:
            out[kind] = None
    return (value_index, replicate), out


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Evaluate every (value, strategy) cell; one row per pair, in sweep order.

    A cell whose computation fails on any replicate is recorded with NaN
    means and stds rather than aborting the sweep.  Replicates are
    independent, so ``workers > 1`` fans them out over processes; results are
    identical to a serial run.
    """
    base = spec.base
    tasks = [
        (base, spec.vary, vi, value, r, tuple(spec.strategies))
        for vi, value in enumerate(spec.values)
        for r in range(base.sim)
    ]
    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool_:
            results = dict(pool_.map(_run_replicate_star, tasks, chunksize=4))
    else:
        results = dict(_run_replicate(*t) for t in tasks)

    rows = []
    for vi, value in enumerate(spec.values):
        per_strategy = {kind: [] for kind in spec.strategies}
        for r in range(base.sim):
            cell = results[(vi, r)]
            for kind in spec.strategies:
                per_strategy[kind].append(cell[kind])
        for kind in spec.strategies:
            samples = per_strategy[kind]
            if any(s is None for s in samples):
                tx_mean = tx_std = fee_mean = fee_std = math.nan
            else:
                tx = np.array([s[0] for s in samples])
                fee = np.array([s[1] for s in samples])
                ddof = 1 if base.sim > 1 else 0
                tx_mean, tx_std = float(tx.mean()), float(tx.std(ddof=ddof))
                fee_mean, fee_std = float(fee.mean()), float(fee.std(ddof=ddof))
            rows.append(
                SweepRow(
                    vary_name=spec.vary.value,
                    vary_value=value,
                    strategy=kind.name,
                    theta_tx_mean=tx_mean,
                    theta_tx_std=tx_std,
                    theta_fee_mean=fee_mean,
                    theta_fee_std=fee_std,
                    runs=base.sim,
                    seed=base.seed,
                )
            )
    return rows


def _run_replicate_star(args):
    return _run_replicate(*args)


def _fmt_value(x) -> str:
    if isinstance(x, float) and not x.is_integer():
        return format(x, ".9g")
    return str(int(x)) if isinstance(x, float) else str(x)


def _fmt_float(x: float) -> str:
    return format(x, ".9g")


def write_results(rows: list[SweepRow], path, fmt: str = "csv") -> None:
    """Persist sweep rows as CSV (exact canonical header) or JSON.

    Floats carry 9 significant digits; failed cells appear as ``nan`` in CSV
    and ``null`` in JSON.  Identical rows always produce identical bytes.
    """
    path = Path(path)
    try:
        if fmt == "csv":
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(RESULT_HEADER)
                for row in rows:
                    writer.writerow(
                        [
                            row.vary_name,
                            _fmt_value(row.vary_value),
                            row.strategy,
                            _fmt_float(row.theta_tx_mean),
                            _fmt_float(row.theta_tx_std),
                            _fmt_float(row.theta_fee_mean),
                            _fmt_float(row.theta_fee_std),
                            row.runs,
                            row.seed,
                        ]
                    )
        elif fmt == "json":
            def num(x):
                return float(format(x, ".9g")) if math.isfinite(x) else None

            payload = [
                {
                    "vary_name": row.vary_name,
                    "vary_value": row.vary_value,
                    "strategy": row.strategy,
                    "theta_tx_mean": num(row.theta_tx_mean),
                    "theta_tx_std": num(row.theta_tx_std),
                    "theta_fee_mean": num(row.theta_fee_mean),
                    "theta_fee_std": num(row.theta_fee_std),
                    "runs": row.runs,
                    "seed": row.seed,
                }
                for row in rows
            ]
            with open(path, "w") as fh:
                json.dump(payload, fh, indent=2)
                fh.write("\n")
        else:
            raise ValueError(f"unknown results format {fmt!r}")
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc
