"""
A greedy measure with bounded density oscillation
=================================================

Build the greedy uniform measure for ``m = 3``, ``alpha = 5/6`` and watch
``f_n = m**(alpha n) * mu(B_n)`` stay inside ``[x0, ceil(w)/floor(w) * x0]``.
"""

from fractions import Fraction

from madic import AlphaParam, build_greedy, oscillation_report, upper_bound

alpha = AlphaParam(3, 5, 6)
print("w =", alpha.w.approx(), " floor, ceil =", alpha.floor_w, alpha.ceil_w)

###############################################################################
# The branching sequence alternates between floor(w) and ceil(w) children.
res = build_greedy(alpha, x0=1, depth=11)
print("s =", list(res.spec.s_seq))

for e in res.profile.entries:
    print(f"n={e.n:2d}  mass={str(e.mass):>8}  f={e.f_approx}")

###############################################################################
# Every value is exact, so the containment check has no tolerance.
hi = upper_bound(alpha)
assert all(1 <= e.f <= hi for e in res.profile.entries)

###############################################################################
# Depth 10**4 is cheap because the measure is stored as (x0, s).
deep = build_greedy(alpha, Fraction(3, 7), 10_000)
print("support size at depth 10^4 has", len(str(deep.measure.support_size(10_000))), "digits")

rep = oscillation_report(res.measure, alpha)
print("c_hat ~", rep.c_hat.approx(7), "<= upper", hi)
