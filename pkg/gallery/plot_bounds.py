"""
Lower and upper oscillation bounds
==================================

The lower bound maximises ``w**i / floor(w**i)`` and ``ceil(w**j) / w**j``;
the upper bound is ``ceil(w) / floor(w)``.  Both depend on ``w`` only.
"""

from madic import AlphaParam, cross_check_bounds, lower_bound

for m, p, q in [(2, 1, 2), (3, 5, 6), (5, 1, 3), (10, 1, 2), (4, 1, 2)]:
    rep = cross_check_bounds(AlphaParam(m, p, q))
    lb = rep.lower
    print(f"m={m:2d} alpha={p}/{q}  lower~{lb.approx()} ({lb.kind} {lb.index})  upper={rep.upper}")

###############################################################################
# Same w, different m: identical bounds.
a, b = AlphaParam(2, 1, 2), AlphaParam(4, 1, 4)
assert a.same_w(b)
assert lower_bound(a).value == lower_bound(b).value

###############################################################################
# More terms never lower the bound.
alpha = AlphaParam(7, 2, 3)
print([lower_bound(alpha, k).approx() for k in (1, 2, 4, 8, 16, 32)])
