"""Symmetric Nash equilibria and throughput analysis for transaction selection.

Validators in a DAG-style ledger each pick b transactions from a shared pool
of m; how fees are allocated on collisions (RFA: one random includer wins;
CFS: everyone shares) shapes the equilibrium selection strategy.  This
package computes those equilibria two independent ways (waterfilling over fee
levels and projected gradient ascent), benchmarks them against uniform and
fee-proportional selection, and validates the analytic throughput formulas by
Monte Carlo.
"""

from .errors import BoundViolation, InfeasibleCapacity, SumMismatch
from .experiments import (
    PAPER_M_GRID,
    PAPER_MAXFEE_GRID,
    PAPER_S_GRID,
    SweepBase,
    SweepRow,
    SweepSpec,
    Vary,
    run_sweep,
    write_results,
)
from .metrics import (
    ThroughputReport,
    best_response,
    effective_fee_throughput,
    effective_tx_throughput,
    ne_gap,
    symmetric_payoff,
    throughput_report,
)
from .montecarlo import SimulationReport, sample_subset, simulate
from .optim import (
    EquilibriumResult,
    SolverConfig,
    gradient,
    kkt_residual,
    objective,
    project_capped_simplex,
    solve_ne,
)
from .pool import (
    FeeLevels,
    GameConfig,
    MarginalStrategy,
    TransactionPool,
    ZipfSpec,
    group_fee_levels,
    read_pool,
    validate_marginals,
    write_pool,
    zipf_pool,
)
from .rng import derive_seed
from .share import (
    Mechanism,
    ShareModel,
    alpha_hat,
    cfs_share,
    cfs_share_inverse,
    rfa_potential,
    rfa_share,
    rfa_share_inverse,
    rfa_share_sum_form,
)
from .strategies import StrategyKind, make_strategy, pts, rts
from .waterfilling import (
    WaterfillingSolution,
    find_kmax_and_root,
    g_ell,
    theorem_equilibrium,
)

__version__ = "0.1.0"
