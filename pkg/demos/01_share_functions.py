#!/usr/bin/env python3
"""Tour of the expected-share functions behind both fee mechanisms.

A validator weighing transaction inclusion cares about f(p): the expected
fraction of the fee it captures when every validator includes the
transaction with marginal probability p.  RFA rewards scarcity (one random
includer wins the whole fee), CFS rewards triggering (everyone gets fee/N
once anyone includes), and both are strictly decreasing in p.
"""

import numpy as np

import feegame as fg

N = 10

print("=" * 64)
print(f"Expected fee share vs. inclusion probability (N = {N})")
print("=" * 64)
print(f"{'p':>6} {'RFA f(p)':>12} {'CFS f(p)':>12} {'RFA/CFS':>10}")
for p in (0.01, 0.05, 0.1, 0.2, 0.5, 0.8, 1.0):
    rfa = fg.rfa_share(p, N)
    cfs = fg.cfs_share(p, N)
    ratio = f"{rfa / cfs:10.2f}" if cfs > 0 else f"{'inf':>10}"
    print(f"{p:6.2f} {rfa:12.6f} {cfs:12.6f} {ratio}")

print()
print("RFA spans [1/N, 1]; CFS spans [0, 1/N].  At p -> 0 an RFA includer")
print("keeps the whole fee, while CFS never pays more than the 1/N split.")

print()
print("Closed form vs. binomial-expectation form (identity check):")
grid = [(0.13, 3), (0.5, 2), (0.77, 25), (0.999, 50)]
for p, n in grid:
    a = fg.rfa_share(p, n)
    b = fg.rfa_share_sum_form(p, n)
    print(f"  p={p:5.3f} n={n:2d}: closed={a:.15f}  sum={b:.15f}  |diff|={abs(a - b):.2e}")

print()
print("Inverses recover the marginal from a target share:")
print(f"  CFS: f^-1(1/12) at N=3  -> {fg.cfs_share_inverse(1 / 12, 3):.6f} (expect 0.5)")
print(f"  RFA: f^-1(0.75) at N=2  -> {fg.rfa_share_inverse(0.75, 2):.6f} (expect 0.5)")

print()
print("The cumulative share integral drives the RFA equilibrium objective;")
print("its slope is the collision adjustment factor itself:")
for p in (0.25, 0.5, 0.9):
    h = 1e-7
    slope = (fg.rfa_potential(p + h, N) - fg.rfa_potential(p - h, N)) / (2 * h)
    print(f"  p={p:4.2f}: d/dp integral = {slope:.8f}   alpha_hat = {fg.alpha_hat(p, N):.8f}")
