"""
Pigeonhole selection
====================

Positive numbers summing to a non-integer ``w``, fewer than ``u`` of them:
one always lands in ``[tau, w/ceil(w)]`` or ``[w/floor(w) - delta, w]``.
"""

import random
from fractions import Fraction

from madic.theory import adversarial_tuples, dirichlet_select, dirichlet_tau, random_tuple, target_set

w, u, delta = Fraction(5, 2), 4, Fraction(1, 10)
tau = dirichlet_tau(w, u, delta)
print("tau =", tau)

zs = [Fraction(9, 10), Fraction(9, 10), Fraction(7, 10)]
print("selected position:", dirichlet_select(zs, w, u, delta))

###############################################################################
# Random and adversarial inputs; membership is checked exactly.
ts = target_set(w, u, delta)
rng = random.Random(0)
counts = {"little": 0, "big": 0}
for zs in [random_tuple(rng, w, u) for _ in range(2000)] + adversarial_tuples(w, u, delta):
    z = zs[dirichlet_select(zs, w, u, delta) - 1]
    counts[ts.classify(z)] += 1
print(counts)
