"""
Marked intervals and avoidance decay
====================================

Children whose ratio ``z = w * mu(child) / mu(parent)`` falls in the target
set are marked.  The mass avoiding every mark decays like ``(1 - K)**n``.
"""

from fractions import Fraction

from madic import AlphaParam, build_marked_sets, build_random
from madic.theory import avoidance_decay_check

alpha = AlphaParam(2, 2, 5)
mu = build_random(2, 10, seed=7)
table = build_marked_sets(mu, alpha, delta=Fraction(1, 5))
print("tau =", table.tau, " u =", table.u, " K_lo ~", float(table.K_lo))

for n in range(1, 4):
    for c in table.marked(n):
        print(n, c.prefix, c.mark.value, c.ratio.approx(6))

###############################################################################
rep = avoidance_decay_check(mu, table)
for n, (a, b) in enumerate(zip(rep.avoid_mass, rep.bounds)):
    print(f"n'={n:2d}  avoid={float(a):.6f}  bound={float(b):.6f}")
assert rep.ok

###############################################################################
# Two levels at a time: base 4, same exponent (w**2 is still not an integer).
print("d_consec=2 ok:", avoidance_decay_check(mu, table, d_consec=2).ok)
