"""Direct construction of the symmetric equilibrium by fee-level waterfilling.

Group the pool into fee levels v_1 > ... > v_n with counts k_l.  For a water
level z, each level would be covered with marginal f^{-1}(z / v_l), clamped
to [0, 1].  The coverage excess

    G_l(z) = sum_{h <= l} k_h * clamp(f^{-1}(z / v_h)) - b

is continuous and nonincreasing in z.  The equilibrium takes the longest
prefix of levels k_max with G_l(v_l) <= 0 for every l <= k_max, then sets the
water level z = c to the root of G_{k_max}; levels beyond k_max get no
coverage, and within a level every transaction shares the level's mass
equally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleCapacity
from .pool import FeeLevels, GameConfig, MarginalStrategy, TransactionPool, group_fee_levels
from .share import Mechanism, ShareModel

__all__ = [
    "WaterfillingSolution",
    "g_ell",
    "find_kmax_and_root",
    "theorem_equilibrium",
]

# CFS roots can be astronomically small for large N (coverage approaches 1
# only as z^(1/(N-1)) -> 0), so the bracket floor sits near the bottom of the
# normal float range and bisection runs on the geometric mean.
_ROOT_FLOOR = 1e-300
_ROOT_REL_TOL = 1e-12
_ROOT_MAX_ITERS = 200


@dataclass
class WaterfillingSolution:
    """Equilibrium in level form plus the per-transaction marginals."""

    k_max: int
    c: float
    q_levels: np.ndarray
    strategy: MarginalStrategy


def g_ell(z: float, ell: int, levels: FeeLevels, config: GameConfig, inverse) -> float:
    """Coverage excess of the first ``ell`` levels at water level ``z``.

    ``inverse`` maps a marginal fee value to a coverage in [0, 1] (the
    mechanism's clamped share inverse).  Nonincreasing in z.
    """
    if z <= 0:
        raise ValueError("water level z must be positive")
    if not 1 <= ell <= levels.n_levels:
        raise ValueError(f"level index {ell} outside 1..{levels.n_levels}")
    cover = 0.0
    for h in range(ell):
        cover += levels.counts[h] * inverse(z / levels.values[h])
    return cover - config.block_capacity


def find_kmax_and_root(levels: FeeLevels, config: GameConfig, inverse) -> tuple[int, float]:
    """Longest admissible level prefix and the root of its coverage excess.

    k_max comes from a linear scan (the prefix condition G_l(v_l) <= 0 is
    checked level by level, stopping at the first violation; level 1 always
    passes since G_1(v_1) = -b).  The root c of G_{k_max} is then bisected on
    (0, v_1] to relative tolerance 1e-12, resolving flat stretches of G
    toward the smaller c.
    """
    b = config.block_capacity
    if b > levels.total:
        raise InfeasibleCapacity(f"capacity {b} exceeds pool size {levels.total}")

    k_max = 1
    for ell in range(2, levels.n_levels + 1):
        if g_ell(float(levels.values[ell - 1]), ell, levels, config, inverse) > 0:
            break
        k_max = ell

    def g(z):
        return g_ell(z, k_max, levels, config, inverse)

    lo = _ROOT_FLOOR
    hi = float(levels.values[0])  # z/v_h >= 1 >= f(0) everywhere, so G = -b < 0
    if g(lo) < 0:
        raise InfeasibleCapacity(
            f"capacity {b} exceeds the realizable coverage of the first {k_max} levels"
        )
    for _ in range(_ROOT_MAX_ITERS):
        mid = math.sqrt(lo * hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _ROOT_REL_TOL * hi:
            break
    return k_max, hi


def theorem_equilibrium(
    levels_or_pool, config: GameConfig, mechanism: Mechanism
) -> WaterfillingSolution:
    """Symmetric equilibrium marginals from the waterfilling construction.

    Accepts either a TransactionPool (grouped internally) or FeeLevels.
    Within a level, every transaction receives the level's mass divided by
    its count.  A full pool (b = m) short-circuits to all-ones coverage.
    """
    if isinstance(levels_or_pool, TransactionPool):
        levels = group_fee_levels(levels_or_pool)
    else:
        levels = levels_or_pool
    b = config.block_capacity
    m = levels.total
    if b > m:
        raise InfeasibleCapacity(f"capacity {b} exceeds pool size {m}")
    if b == m:
        return WaterfillingSolution(
            k_max=levels.n_levels,
            c=0.0,
            q_levels=levels.counts.astype(float),
            strategy=MarginalStrategy(q=np.ones(m)),
        )

    model = ShareModel(mechanism=mechanism, n_validators=config.n_validators)
    k_max, c = find_kmax_and_root(levels, config, model.clamped_inverse)

    per_level = np.zeros(levels.n_levels)
    for ell in range(k_max):
        per_level[ell] = model.clamped_inverse(c / float(levels.values[ell]))
    # Root finding leaves a residual of order the bisection tolerance; spread
    # it over interior levels so the marginals sum to b exactly.
    counts = levels.counts.astype(float)
    r = b - float(per_level @ counts)
    if r != 0.0:
        interior = (per_level > 0.0) & (per_level < 1.0)
        if interior.any():
            per_level[interior] = np.clip(
                per_level[interior] + r / counts[interior].sum(), 0.0, 1.0
            )
    return WaterfillingSolution(
        k_max=k_max,
        c=c,
        q_levels=per_level * counts,
        strategy=MarginalStrategy(q=np.repeat(per_level, levels.counts)),
    )
