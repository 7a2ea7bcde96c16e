import csv
import json
import math

import numpy as np
import pytest

import feegame as fg
from feegame.experiments import RESULT_HEADER, SweepBase, SweepSpec, Vary
from feegame.strategies import StrategyKind

SMALL_BASE = SweepBase(n_validators=4, block_capacity=8, m=80, max_fee=6, shape=0.0, sim=3, seed=7)


def small_spec(**overrides):
    kwargs = dict(vary=Vary.S, values=(0.0, 0.5), base=SMALL_BASE,
                  strategies=(StrategyKind.RTS, StrategyKind.PTS))
    kwargs.update(overrides)
    return SweepSpec(**kwargs)


class TestSpecValidation:
    def test_values_must_increase(self):
        with pytest.raises(ValueError):
            small_spec(values=(0.5, 0.5))
        with pytest.raises(ValueError):
            small_spec(values=())

    def test_base_validation(self):
        with pytest.raises(ValueError):
            SweepBase(sim=0)
        with pytest.raises(ValueError):
            SweepBase(shape=-0.1)


class TestRunSweep:
    def test_single_cell(self):
        rows = fg.run_sweep(small_spec(values=(100,), vary=Vary.M,
                                       strategies=(StrategyKind.RTS,)))
        assert len(rows) == 1
        row = rows[0]
        assert row.vary_name == "m" and row.vary_value == 100
        assert row.strategy == "RTS" and row.runs == 3 and row.seed == 7

    def test_grid_row_count(self):
        values = tuple(round(0.1 * i, 1) for i in range(15))
        spec = small_spec(values=values,
                          strategies=(StrategyKind.RTS, StrategyKind.PTS,
                                      StrategyKind.NE_RFA, StrategyKind.NE_CFS))
        rows = fg.run_sweep(spec)
        assert len(rows) == 60

    def test_deterministic(self):
        spec = small_spec()
        assert fg.run_sweep(spec) == fg.run_sweep(spec)

    def test_appending_values_keeps_existing_cells(self):
        spec_a = small_spec(values=(0.0,))
        spec_b = small_spec(values=(0.0, 0.7))
        rows_a = fg.run_sweep(spec_a)
        rows_b = fg.run_sweep(spec_b)
        assert rows_a == rows_b[: len(rows_a)]

    def test_parallel_equals_serial(self):
        spec = small_spec()
        assert fg.run_sweep(spec, workers=2) == fg.run_sweep(spec, workers=1)

    def test_failed_cell_marked_not_fatal(self):
        # m = 10 cannot host a block of 12: every strategy fails there
        base = SweepBase(n_validators=3, block_capacity=12, m=50, max_fee=5, sim=2, seed=1)
        spec = SweepSpec(vary=Vary.M, values=(10, 50), base=base,
                         strategies=(StrategyKind.RTS,))
        rows = fg.run_sweep(spec)
        assert len(rows) == 2
        assert math.isnan(rows[0].theta_fee_mean)
        assert not math.isnan(rows[1].theta_fee_mean)

    def test_rts_metrics_value(self):
        rows = fg.run_sweep(small_spec(values=(0.0,), strategies=(StrategyKind.RTS,)))
        # RTS transaction throughput is pool-independent: m(1 - (1-b/m)^N)
        expect = 80 * (1 - (1 - 0.1) ** 4)
        assert rows[0].theta_tx_mean == pytest.approx(expect, abs=1e-9)
        assert rows[0].theta_tx_std == 0.0


class TestWriteResults:
    def test_header_only_for_empty(self, tmp_path):
        path = tmp_path / "empty.csv"
        fg.write_results([], path, fmt="csv")
        assert path.read_text() == ",".join(RESULT_HEADER) + "\n"

    def test_csv_line_count_and_round_trip(self, tmp_path):
        rows = fg.run_sweep(small_spec())
        path = tmp_path / "out.csv"
        fg.write_results(rows, path, fmt="csv")
        lines = path.read_text().splitlines()
        assert len(lines) == len(rows) + 1
        assert lines[0] == ",".join(RESULT_HEADER)
        with open(path) as fh:
            parsed = list(csv.DictReader(fh))
        for before, after in zip(rows, parsed):
            assert float(after["theta_fee_mean"]) == pytest.approx(
                before.theta_fee_mean, rel=1e-8
            )
            assert after["strategy"] == before.strategy
            assert int(after["runs"]) == before.runs

    def test_json_round_trip(self, tmp_path):
        rows = fg.run_sweep(small_spec())
        path = tmp_path / "out.json"
        fg.write_results(rows, path, fmt="json")
        data = json.loads(path.read_text())
        assert [d["strategy"] for d in data] == [r.strategy for r in rows]
        for d, r in zip(data, rows):
            assert d["theta_tx_mean"] == pytest.approx(r.theta_tx_mean, rel=1e-8)
            assert set(d) == set(RESULT_HEADER)

    def test_bitwise_reproducible(self, tmp_path):
        rows = fg.run_sweep(small_spec())
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        fg.write_results(rows, a, fmt="csv")
        fg.write_results(rows, b, fmt="csv")
        assert a.read_bytes() == b.read_bytes()

    def test_nan_serialization(self, tmp_path):
        row = fg.SweepRow("m", 10, "RTS", math.nan, math.nan, math.nan, math.nan, 2, 1)
        csv_path = tmp_path / "x.csv"
        json_path = tmp_path / "x.json"
        fg.write_results([row], csv_path, fmt="csv")
        fg.write_results([row], json_path, fmt="json")
        assert "nan" in csv_path.read_text()
        assert json.loads(json_path.read_text())[0]["theta_tx_mean"] is None

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            fg.write_results([], tmp_path / "x.xml", fmt="xml")


class TestPaperGrids:
    def test_grids(self):
        assert fg.PAPER_M_GRID[0] == 100 and fg.PAPER_M_GRID[-1] == 10000
        assert fg.PAPER_MAXFEE_GRID == tuple(range(5, 101, 5))
        assert len(fg.PAPER_S_GRID) == 15
        assert fg.PAPER_S_GRID[0] == 0.0 and fg.PAPER_S_GRID[-1] == 1.4
