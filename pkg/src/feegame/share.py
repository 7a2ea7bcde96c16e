"""Expected-share functions for the two fee allocation mechanisms.

Under RFA a transaction's fee goes to one uniformly random validator among
those that included it; under CFS the fee is split equally among all N
validators as soon as anyone includes it.  Both induce a strictly decreasing
share function f(p): the fraction of a transaction's fee a single validator
expects from including it when every validator includes it with marginal
probability p.

    RFA:  f(p) = (1 - (1-p)^N) / (N p)        on (0, 1]
    CFS:  f(p) = (1/N) (1-p)^(N-1)            on [0, 1]

All functions accept scalars or numpy arrays and are pure; they can be called
concurrently without synchronization.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Mechanism",
    "ShareModel",
    "rfa_share",
    "rfa_share_sum_form",
    "alpha_hat",
    "cfs_share",
    "cfs_share_inverse",
    "rfa_share_inverse",
    "rfa_potential",
]

# Below this, the direct RFA formula is 0/0 in floats; use the power series.
_SERIES_CUTOFF = 1e-8

_BISECT_TOL = 1e-12
_BISECT_MAX_ITERS = 200


class Mechanism(enum.Enum):
    """Fee allocation rule."""

    RFA = "rfa"
    CFS = "cfs"


def _check_validators(n: int) -> None:
    if n < 2:
        raise ValueError(f"need n >= 2 validators, got {n}")


def _checked(x, lo: float, hi: float, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(arr < lo) or np.any(arr > hi):
        raise ValueError(f"{name} must lie in [{lo}, {hi}]")
    return arr


def _scalar_like(x, out: np.ndarray):
    if np.ndim(x) == 0:
        return float(out)
    return out


def _rfa_core(p: np.ndarray, n: int) -> np.ndarray:
    """RFA share on [0, 1]; the p = 0 endpoint takes the limit value 1."""
    out = np.empty_like(p)
    small = p < _SERIES_CUTOFF
    if small.any():
        ps = p[small]
        # First terms of sum_k C(n,k)(-1)^(k+1) p^(k-1) / n; the truncated
        # tail is below C(n,4) p^3 / n, i.e. under 1e-15 for n p < 1e-4.
        out[small] = 1.0 - (n - 1) * ps / 2.0 + (n - 1) * (n - 2) * ps * ps / 6.0
    big = ~small
    if big.any():
        pb = p[big]
        with np.errstate(divide="ignore"):
            out[big] = -np.expm1(n * np.log1p(-pb)) / (n * pb)
    return out


def _rfa_core_scalar(p: float, n: int) -> float:
    # scalar twin of _rfa_core; keeps the inverse bisection off numpy overhead
    if p < _SERIES_CUTOFF:
        return 1.0 - (n - 1) * p / 2.0 + (n - 1) * (n - 2) * p * p / 6.0
    if p >= 1.0:
        return 1.0 / n
    return -math.expm1(n * math.log1p(-p)) / (n * p)


def rfa_share(p, n: int):
    """Expected fee fraction under RFA: (1 - (1-p)^n) / (n p).

    Strictly decreasing from 1 (as p -> 0) to 1/n (at p = 1).
    """
    _check_validators(n)
    arr = np.asarray(p, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr > 1.0):
        raise ValueError("p must lie in (0, 1] for rfa_share")
    return _scalar_like(p, _rfa_core(arr, n))


def rfa_share_sum_form(p: float, n: int) -> float:
    """RFA share as the binomial expectation E[1/(X+1)], X ~ Bin(n-1, p).

    Evaluates sum_{i=0}^{n-1} C(n-1,i) p^i (1-p)^(n-1-i) / (i+1) directly
    with exact integer binomial coefficients; serves as an independent check
    of :func:`rfa_share`.
    """
    _check_validators(n)
    if not 0.0 < p <= 1.0:
        raise ValueError("p must lie in (0, 1] for rfa_share_sum_form")
    terms = [
        math.comb(n - 1, i) * p**i * (1.0 - p) ** (n - 1 - i) / (i + 1)
        for i in range(n)
    ]
    return math.fsum(terms)


def alpha_hat(q, n: int):
    """Collision adjustment factor: the RFA share extended to q = 0.

    At q = 0 the value is the continuous limit 1, so gradients at zero
    coverage see the full marginal reward.
    """
    _check_validators(n)
    arr = _checked(q, 0.0, 1.0, "q")
    return _scalar_like(q, _rfa_core(arr, n))


def cfs_share(p, n: int):
    """Expected fee fraction under CFS: (1-p)^(n-1) / n.

    Strictly decreasing from 1/n (at p = 0) to 0 (at p = 1).
    """
    _check_validators(n)
    arr = _checked(p, 0.0, 1.0, "p")
    return _scalar_like(p, (1.0 - arr) ** (n - 1) / n)


def cfs_share_inverse(x, n: int):
    """Inverse of the CFS share: p = 1 - (n x)^(1/(n-1)) for x in [0, 1/n]."""
    _check_validators(n)
    arr = _checked(x, 0.0, 1.0 / n, "x")
    return _scalar_like(x, 1.0 - (n * arr) ** (1.0 / (n - 1)))


def rfa_share_inverse(x: float, n: int) -> float:
    """Inverse of the RFA share on [1/n, 1], by bisection.

    The share is strictly decreasing, so the root is unique; bisection runs
    to absolute tolerance 1e-12 on p.  Newton is avoided because the slope
    flattens near p = 0 for large n.
    """
    _check_validators(n)
    if not 1.0 / n <= x <= 1.0:
        raise ValueError(f"x must lie in [1/{n}, 1]")
    if x >= 1.0:
        return 0.0
    if x <= 1.0 / n:
        return 1.0
    lo, hi = 0.0, 1.0  # share(lo) >= x >= share(hi)
    for _ in range(_BISECT_MAX_ITERS):
        mid = 0.5 * (lo + hi)
        if _rfa_core_scalar(mid, n) > x:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _BISECT_TOL:
            break
    return 0.5 * (lo + hi)


def rfa_potential(p, n: int):
    """Cumulative RFA share: the integral of alpha_hat from 0 to p.

    Computed as (1/n) sum_{k=1}^{n} (1 - (1-p)^k) / k, an all-positive-terms
    rewrite of the polynomial (1/n) sum_k C(n,k)(-1)^(k+1) p^k / k.  Monotone
    nondecreasing and concave, with derivative alpha_hat(p, n) and value
    H_n / n at p = 1.
    """
    _check_validators(n)
    arr = _checked(p, 0.0, 1.0, "p")
    t = 1.0 - arr
    acc = np.zeros_like(arr)
    tk = np.ones_like(arr)
    for k in range(1, n + 1):
        tk = tk * t
        acc += (1.0 - tk) / k
    return _scalar_like(p, acc / n)


@dataclass(frozen=True)
class ShareModel:
    """A fee mechanism together with the validator count it is played by."""

    mechanism: Mechanism
    n_validators: int

    def __post_init__(self):
        # With a single validator both mechanisms collapse to full-fee capture.
        _check_validators(self.n_validators)

    @property
    def share_at_zero(self) -> float:
        if self.mechanism is Mechanism.RFA:
            return 1.0
        return 1.0 / self.n_validators

    @property
    def share_at_one(self) -> float:
        if self.mechanism is Mechanism.RFA:
            return 1.0 / self.n_validators
        return 0.0

    def share(self, p):
        """f(p) extended to p = 0 (RFA takes the limit value there)."""
        if self.mechanism is Mechanism.RFA:
            return alpha_hat(p, self.n_validators)
        return cfs_share(p, self.n_validators)

    def inverse(self, x: float) -> float:
        if self.mechanism is Mechanism.RFA:
            return rfa_share_inverse(x, self.n_validators)
        return float(cfs_share_inverse(x, self.n_validators))

    def clamped_inverse(self, x: float) -> float:
        """Coverage induced by a marginal fee value x, clamped to [0, 1].

        Values above f(0) cannot justify any coverage and map to 0; values
        at or below f(1) saturate at 1.
        """
        if x >= self.share_at_zero:
            return 0.0
        if x <= self.share_at_one:
            return 1.0
        return self.inverse(x)
