"""
From m-adic to m**d-adic intervals
==================================

Grouping ``d`` digits keeps every mass and every density value:
``f'_k = f_{dk}`` with ``m' = m**d`` and the same ``alpha``.
"""

from madic import AlphaParam, block_lift, build_random, f_profile

alpha = AlphaParam(3, 1, 2)
mu = build_random(3, 6, seed=1)
lifted = block_lift(mu, 2)
print("base", lifted.m, "depth", lifted.depth, "nodes", len(lifted))

leaf = next(iter(mu.leaves()))
orig = f_profile(mu, alpha, leaf).values
new = f_profile(lifted, alpha.lift(2), next(iter(lifted.leaves()))).values
print([v.approx(6) for v in orig[::2]])
print([v.approx(6) for v in new])
assert new == orig[::2]
