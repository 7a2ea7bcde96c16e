"""Command-line front end: solve strategies, evaluate metrics, simulate, sweep.

Exit codes: 0 success, 2 usage errors, 3 solver non-convergence (output is
still written), 4 I/O or file-content errors.  Every subcommand is a
deterministic function of its flags; all randomness is seeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import InfeasibleCapacity
from .experiments import (
    PAPER_M_GRID,
    PAPER_MAXFEE_GRID,
    PAPER_S_GRID,
    SweepBase,
    SweepSpec,
    Vary,
    run_sweep,
    write_results,
)
from .metrics import ne_gap, throughput_report
from .montecarlo import simulate
from .optim import SolverConfig, solve_ne
from .pool import GameConfig, TransactionPool, ZipfSpec, read_pool, validate_marginals, zipf_pool
from .share import Mechanism
from .strategies import StrategyKind, pts, rts

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NOT_CONVERGED = 3
EXIT_IO = 4

_MECHANISMS = {"rfa": Mechanism.RFA, "cfs": Mechanism.CFS}


def _add_pool_flags(parser: argparse.ArgumentParser) -> None:
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--pool", metavar="FILE", help="pool file (.json array or .txt/.csv lines)")
    src.add_argument("--zipf", metavar="MAXFEE,S,M,SEED", help="generate a Zipf-like pool")
    parser.add_argument("--n", type=int, required=True, help="number of validators (>= 2)")
    parser.add_argument("--b", type=int, required=True, help="block capacity (>= 1)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="feegame", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="compute a strategy and its diagnostics")
    p_solve.add_argument("--model", choices=["rfa", "cfs", "rts", "pts"], required=True)
    _add_pool_flags(p_solve)
    p_solve.add_argument("--tol", type=float, default=None)
    p_solve.add_argument("--max-iters", type=int, default=None)
    p_solve.add_argument("--out", metavar="FILE")

    p_metrics = sub.add_parser("metrics", help="analytic throughputs of a strategy file")
    p_metrics.add_argument("--strategy", metavar="FILE", required=True)
    _add_pool_flags(p_metrics)
    p_metrics.add_argument("--mechanism", choices=["rfa", "cfs"], required=True)
    p_metrics.add_argument("--out", metavar="FILE")

    p_sim = sub.add_parser("simulate", help="Monte Carlo block draws for a strategy file")
    p_sim.add_argument("--strategy", metavar="FILE", required=True)
    _add_pool_flags(p_sim)
    p_sim.add_argument("--mechanism", choices=["rfa", "cfs"], required=True)
    p_sim.add_argument("--runs", type=int, default=50)
    p_sim.add_argument("--seed", type=int, default=1)
    p_sim.add_argument("--out", metavar="FILE")

    p_sweep = sub.add_parser("sweep", help="parameter sweep over m, maxfee or s")
    p_sweep.add_argument("--vary", choices=["m", "maxfee", "s"], required=True)
    grid = p_sweep.add_mutually_exclusive_group(required=True)
    grid.add_argument("--paper-grid", action="store_true", help="use the built-in grid")
    grid.add_argument("--values", metavar="V1,V2,...", help="explicit sweep values")
    p_sweep.add_argument(
        "--strategies",
        default="rts,pts,ne_rfa,ne_cfs",
        metavar="LIST",
        help="comma list from rts,pts,ne_rfa,ne_cfs",
    )
    p_sweep.add_argument("--out", metavar="FILE", required=True)
    p_sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    p_sweep.add_argument("--n", type=int, default=10)
    p_sweep.add_argument("--b", type=int, default=100)
    p_sweep.add_argument("--m", type=int, default=1000)
    p_sweep.add_argument("--maxfee", type=int, default=10)
    p_sweep.add_argument("--s", type=float, default=0.0)
    p_sweep.add_argument("--sim", type=int, default=50)
    p_sweep.add_argument("--seed", type=int, default=1)
    p_sweep.add_argument("--jobs", type=int, default=1, help="parallel replicate workers")
    return parser


def _parse_zipf(parser, text: str) -> ZipfSpec:
    parts = text.split(",")
    if len(parts) != 4:
        parser.error("--zipf expects MAXFEE,S,M,SEED")
    try:
        return ZipfSpec(max_fee=int(parts[0]), shape=float(parts[1]), m=int(parts[2]), seed=int(parts[3]))
    except ValueError as exc:
        parser.error(f"bad --zipf value: {exc}")


def _load_pool(parser, args) -> TransactionPool:
    if args.zipf is not None:
        return zipf_pool(_parse_zipf(parser, args.zipf))
    return read_pool(args.pool)


def _load_strategy(path, pool: TransactionPool, config: GameConfig):
    with open(path) as fh:
        data = json.load(fh)
    q = data["q"] if isinstance(data, dict) else data
    strategy = validate_marginals(q, config)
    if len(strategy) != pool.m:
        raise ValueError(f"strategy length {len(strategy)} does not match pool size {pool.m}")
    return strategy


def _emit(payload: dict, out_path) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail_io(exc) -> int:
    print(f"error: {exc}", file=sys.stderr)
    return EXIT_IO


def _cmd_solve(parser, args) -> int:
    try:
        pool = _load_pool(parser, args)
    except (OSError, ValueError) as exc:
        return _fail_io(exc)
    config = GameConfig(n_validators=args.n, block_capacity=args.b)

    exit_code = EXIT_OK
    if args.model in _MECHANISMS:
        mechanism = _MECHANISMS[args.model]
        overrides = {}
        if args.tol is not None:
            overrides["tol"] = args.tol
        if args.max_iters is not None:
            overrides["max_iters"] = args.max_iters
        result = solve_ne(mechanism, pool, config, SolverConfig(**overrides))
        strategy = result.strategy
        diagnostics = {
            "iterations": result.iterations,
            "kkt_residual": result.kkt_residual,
            "converged": result.converged,
            "ne_gap": ne_gap(mechanism, strategy, pool, config),
        }
        if not result.converged:
            exit_code = EXIT_NOT_CONVERGED
    else:
        strategy = rts(pool, config) if args.model == "rts" else pts(pool, config)
        # benchmark strategies are mechanism-free: no residual or gap to report
        diagnostics = {"iterations": 0, "kkt_residual": None, "converged": True, "ne_gap": None}

    payload = {
        "model": args.model,
        "n": args.n,
        "b": args.b,
        "q": [float(x) for x in strategy.q],
        "diagnostics": diagnostics,
    }
    try:
        _emit(payload, args.out)
    except OSError as exc:
        return _fail_io(exc)
    return exit_code


def _cmd_metrics(parser, args) -> int:
    config = GameConfig(n_validators=args.n, block_capacity=args.b)
    try:
        pool = _load_pool(parser, args)
        strategy = _load_strategy(args.strategy, pool, config)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        return _fail_io(exc)
    mechanism = _MECHANISMS[args.mechanism]
    report = throughput_report(strategy, pool, config)
    payload = {
        "theta_tx": report.theta_tx,
        "theta_fee": report.theta_fee,
        "per_validator_payoff": report.per_validator_payoff,
        "ne_gap": ne_gap(mechanism, strategy, pool, config),
    }
    try:
        _emit(payload, args.out)
    except OSError as exc:
        return _fail_io(exc)
    return EXIT_OK


def _cmd_simulate(parser, args) -> int:
    config = GameConfig(n_validators=args.n, block_capacity=args.b)
    try:
        pool = _load_pool(parser, args)
        strategy = _load_strategy(args.strategy, pool, config)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        return _fail_io(exc)
    report = simulate(strategy, pool, config, _MECHANISMS[args.mechanism], args.runs, args.seed)
    payload = {
        "runs": report.runs,
        "theta_tx_mean": report.theta_tx_mean,
        "theta_tx_std": report.theta_tx_std,
        "theta_fee_mean": report.theta_fee_mean,
        "theta_fee_std": report.theta_fee_std,
        "per_validator_reward_mean": report.per_validator_reward_mean,
        "per_validator_reward_std": report.per_validator_reward_std,
        "seed": report.seed,
    }
    try:
        _emit(payload, args.out)
    except OSError as exc:
        return _fail_io(exc)
    return EXIT_OK


_PAPER_GRIDS = {"m": PAPER_M_GRID, "maxfee": PAPER_MAXFEE_GRID, "s": PAPER_S_GRID}


def _cmd_sweep(parser, args) -> int:
    if args.paper_grid:
        values = _PAPER_GRIDS[args.vary]
    else:
        try:
            caster = float if args.vary == "s" else int
            values = tuple(caster(x) for x in args.values.split(","))
        except ValueError as exc:
            parser.error(f"bad --values: {exc}")
    try:
        strategies = tuple(StrategyKind[x.strip().upper()] for x in args.strategies.split(","))
    except KeyError as exc:
        parser.error(f"unknown strategy {exc}")
    base = SweepBase(
        n_validators=args.n,
        block_capacity=args.b,
        m=args.m,
        max_fee=args.maxfee,
        shape=args.s,
        sim=args.sim,
        seed=args.seed,
    )
    try:
        spec = SweepSpec(vary=Vary(args.vary), values=values, base=base, strategies=strategies)
    except ValueError as exc:
        parser.error(str(exc))
    rows = run_sweep(spec, workers=max(1, args.jobs))
    try:
        write_results(rows, args.out, fmt=args.format)
    except OSError as exc:
        return _fail_io(exc)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "solve":
            return _cmd_solve(parser, args)
        if args.command == "metrics":
            return _cmd_metrics(parser, args)
        if args.command == "simulate":
            return _cmd_simulate(parser, args)
        return _cmd_sweep(parser, args)
    except InfeasibleCapacity as exc:
        parser.error(str(exc))


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
