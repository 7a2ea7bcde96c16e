"""Shared test helpers: random instances and independent brute-force oracles."""

import itertools

import numpy as np

import feegame as fg


def draw_instance(rng, m_lo=20, m_hi=200, n_hi=20, cover_lo=0.03, cover_hi=0.30,
                  maxfee_hi=10, s_hi=1.4):
    """Random (pool, config) in the partial-coverage regime.

    The equilibrium comparison targets the regime the analysis is about:
    blocks well below the pool size.  Near coverage saturation the CFS
    marginal reward field (1-p)^(N-1) drops below float resolution, so no
    first-order iteration can separate strategies there and the comparison
    is not meaningful.
    """
    m = int(rng.integers(m_lo, m_hi + 1))
    n = int(rng.integers(2, n_hi + 1))
    b = max(1, int(round(m * rng.uniform(cover_lo, cover_hi))))
    maxfee = int(rng.integers(1, maxfee_hi + 1))
    s = float(rng.uniform(0.0, s_hi))
    pool = fg.zipf_pool(fg.ZipfSpec(max_fee=maxfee, shape=s, m=m, seed=int(rng.integers(2**32))))
    return pool, fg.GameConfig(n_validators=n, block_capacity=b)


_ASSIGNMENTS = {}


def _assignments(dim):
    # all {at-zero, at-one, free} labelings of `dim` coordinates
    if dim not in _ASSIGNMENTS:
        _ASSIGNMENTS[dim] = np.array(list(itertools.product((0, 1, 2), repeat=dim)))
    return _ASSIGNMENTS[dim]


def project_oracle(y, b):
    """Exact projection onto {sum p = b, 0 <= p <= 1} by face enumeration.

    For each assignment of coordinates to {0, 1, free}, the closest point of
    the corresponding face is computed in closed form; the projection is the
    feasible candidate of minimum distance.  Exponential in the dimension,
    usable up to ~8 coordinates.
    """
    y = np.asarray(y, dtype=float)
    dim = y.size
    a = _assignments(dim)
    at_one = a == 1
    free = a == 2
    n_free = free.sum(axis=1)
    n_one = at_one.sum(axis=1)

    candidates = np.where(at_one, 1.0, 0.0)
    ok = np.ones(len(a), dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        mu = ((y * free).sum(axis=1) - (b - n_one)) / n_free
    has_free = n_free > 0
    p_free = y[None, :] - mu[:, None]
    candidates = np.where(free, p_free, candidates)
    ok &= np.where(has_free, True, np.abs(n_one - b) < 1e-9)
    inside = ~free | ((p_free > -1e-12) & (p_free < 1.0 + 1e-12))
    ok &= inside.all(axis=1)
    candidates = np.clip(candidates, 0.0, 1.0)
    ok &= np.abs(candidates.sum(axis=1) - b) < 1e-9

    dists = ((candidates - y[None, :]) ** 2).sum(axis=1)
    dists[~ok] = np.inf
    return candidates[np.argmin(dists)]


def solver_for_comparison():
    """Solver settings used whenever the optimizer is compared to the theorem route."""
    return fg.SolverConfig(tol=1e-10, max_iters=300_000)


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if report.when == "call" and "test_acceptance" in report.nodeid:
        label = "PASS" if report.passed else "FAIL"
        name = report.nodeid.split("::")[-1]
        print(f"\n[acceptance] {label}: {name}", flush=True)
