"""Render throughput figures from sweep CSV files.

Input is the sweep results contract: a CSV with the exact header

    vary_name,vary_value,strategy,theta_tx_mean,theta_tx_std,
    theta_fee_mean,theta_fee_std,runs,seed

One line per strategy is drawn over the swept values, with a shaded
mean +/- std band.  Rendering is a pure function of the CSV bytes: fixed
style, no timestamps, so identical inputs give identical image files.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)
import numpy as np  # noqa: E402

EXPECTED_HEADER = [
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

METRICS = ("theta_fee", "theta_tx")

X_LABELS = {
    "m": "Number of Transactions (m)",
    "maxfee": "Maximum Fee (maxFee)",
    "s": "Zipf Parameter (s)",
}

Y_LABELS = {
    "theta_fee": "Expected Fee Throughput",
    "theta_tx": "Effective Throughput",
}

# canonical drawing order; anything else lands after these
STRATEGY_ORDER = ["RTS", "PTS", "NE_RFA", "NE_CFS"]


class SchemaError(ValueError):
    """The input file does not match the sweep results contract."""


@dataclass
class FigureSpec:
    input_csv: Path
    metric: str
    out_path: Path
    title: str | None = None
    xlabel: str | None = None
    ylabel: str | None = None


def load_rows(path) -> list[dict]:
    """Parse a sweep CSV, enforcing the exact header and at least one row."""
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"{path}: no such file")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if header != EXPECTED_HEADER:
            raise SchemaError(
                f"{path}: header mismatch; expected {','.join(EXPECTED_HEADER)}"
            )
        rows = []
        for lineno, record in enumerate(reader, start=2):
            if len(record) != len(EXPECTED_HEADER):
                raise SchemaError(f"{path}:{lineno}: wrong field count")
            row = dict(zip(EXPECTED_HEADER, record))
            try:
                row["vary_value"] = float(row["vary_value"])
                for key in ("theta_tx_mean", "theta_tx_std",
                            "theta_fee_mean", "theta_fee_std"):
                    row[key] = float(row[key])
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}") from None
            rows.append(row)
    if not rows:
        raise SchemaError(f"{path}: header only, nothing to plot")
    names = {row["vary_name"] for row in rows}
    if len(names) != 1:
        raise SchemaError(f"{path}: mixed vary_name values {sorted(names)}")
    return rows


def render(spec: FigureSpec) -> Path:
    """Draw one line with an error band per strategy; returns the output path."""
    if spec.metric not in METRICS:
        raise SchemaError(f"unknown metric {spec.metric!r}; choose from {METRICS}")
    rows = load_rows(spec.input_csv)
    vary_name = rows[0]["vary_name"]

    strategies = sorted(
        {row["strategy"] for row in rows},
        key=lambda s: (STRATEGY_ORDER.index(s) if s in STRATEGY_ORDER else len(STRATEGY_ORDER), s),
    )
    xlabel = spec.xlabel or X_LABELS.get(vary_name, vary_name)
    ylabel = spec.ylabel or Y_LABELS[spec.metric]
    title = spec.title or f"{ylabel} vs. {xlabel}"

    fig, ax = plt.subplots(figsize=(7.0, 4.5), dpi=150)
    for strategy in strategies:
        points = sorted(
            (row for row in rows if row["strategy"] == strategy),
            key=lambda row: row["vary_value"],
        )
        x = np.array([row["vary_value"] for row in points])
        mean = np.array([row[f"{spec.metric}_mean"] for row in points])
        std = np.array([row[f"{spec.metric}_std"] for row in points])
        label = strategy.replace("_", "-")
        (line,) = ax.plot(x, mean, marker="o", markersize=3.5, linewidth=1.6, label=label)
        ax.fill_between(x, mean - std, mean + std, alpha=0.2, color=line.get_color())
    if vary_name == "m":
        ax.set_xscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.out_path, metadata={"Software": "sweepfigs"})
    plt.close(fig)
    return Path(spec.out_path)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="plot a sweep CSV as one line per strategy"
    )
    parser.add_argument("--input", required=True, metavar="FILE", help="sweep CSV")
    parser.add_argument("--metric", required=True, choices=METRICS)
    parser.add_argument("--out", required=True, metavar="FILE", help="image file (.png, .svg, ...)")
    parser.add_argument("--title", default=None)
    args = parser.parse_args(argv)
    spec = FigureSpec(
        input_csv=Path(args.input),
        metric=args.metric,
        out_path=Path(args.out),
        title=args.title,
    )
    try:
        render(spec)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
