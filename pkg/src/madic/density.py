"""Density profiles ``f_n = m**(alpha n) * mu(B_n(x))`` and oscillation estimates.

The upper and lower densities are limits; at finite depth we only have the
maximum and minimum of ``f_n`` over a window of levels ``[n0, N]``.  Every
function here reports such windowed extremes and says so: nothing claims
convergence.  All values are :class:`~madic.exact.Surd` numbers ``w**n * mass``
and all orderings are exact; decimals are for display only.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import AlphaParam, Prefix, PrefixLike, as_digits, format_prefix
from .exact import DEFAULT_DIGITS, Surd
from .measure import TreeMeasure, UniformMeasure

__all__ = [
    "ProfileEntry",
    "DensityProfile",
    "OscillationReport",
    "f_value",
    "f_profile",
    "density_estimates",
    "oscillation_report",
    "brute_force_mass",
    "CSV_HEADER",
]

CSV_HEADER = ("n", "prefix", "mass_num", "mass_den", "f_approx")


def f_value(alpha: AlphaParam, n: int, mass: Fraction) -> Surd:
    """``w**n * mass`` as an exact value."""
    return alpha.w_power(n, mass)


@dataclass(frozen=True)
class ProfileEntry:
    n: int
    mass: Fraction
    f: Surd

    @property
    def f_approx(self) -> str:
        return self.f.approx()

    def exact_pair(self) -> str:
        return f"({self.n},{self.mass.numerator}/{self.mass.denominator})"


@dataclass
class DensityProfile:
    """``f_n`` along one path for ``n = 0 .. L``; ``L`` is the last level of positive mass."""

    alpha: AlphaParam
    path: Prefix
    entries: list

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, n: int) -> ProfileEntry:
        return self.entries[n]

    @property
    def values(self) -> list:
        return [e.f for e in self.entries]

    @property
    def last_level(self) -> int:
        return self.entries[-1].n

    def to_csv(self, digits: int = DEFAULT_DIGITS) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        m = self.alpha.m
        for e in self.entries:
            writer.writerow([e.n, format_prefix(self.path.digits[: e.n], m),
                             e.mass.numerator, e.mass.denominator, e.f.approx(digits)])
        return buf.getvalue()


def f_profile(mu: TreeMeasure, alpha: AlphaParam, path: PrefixLike) -> DensityProfile:
    """Density profile of ``mu`` along ``path``, truncated where the path leaves the support."""
    if alpha.m != mu.m:
        raise ValueError(f"base mismatch: measure has m={mu.m}, alpha has m={alpha.m}")
    digits = as_digits(path, mu.m)
    if len(digits) > mu.depth:
        raise ValueError(f"path length {len(digits)} exceeds the measure depth {mu.depth}")
    entries = [ProfileEntry(n, mass, f_value(alpha, n, mass))
               for n, mass in enumerate(mu.path_masses(digits))]
    return DensityProfile(alpha, Prefix(mu.m, digits), entries)


def _extremes(entries):
    hi = lo = entries[0]
    for e in entries[1:]:
        if e.f > hi.f:
            hi = e
        if e.f < lo.f:
            lo = e
    return hi, lo


def density_estimates(profile: DensityProfile, n0: int = 0, n1: Optional[int] = None):
    """``(max, min)`` of ``f_n`` over ``n0 <= n <= n1`` (default: to the end of the profile).

    These are finite-window proxies for the upper and lower densities.
    """
    window = [e for e in profile.entries if e.n >= n0 and (n1 is None or e.n <= n1)]
    if not window:
        raise ValueError(f"empty window [{n0}, {profile.last_level if n1 is None else n1}]")
    hi, lo = _extremes(window)
    return hi.f, lo.f


@dataclass
class OscillationReport:
    """Finite-depth proxies for the local and global density ratios.

    ``c_loc_hat`` is the largest per-path ratio ``max f / min f`` over the window;
    ``c_hat`` divides the largest windowed maximum by the smallest windowed
    minimum over all support paths.
    """

    alpha: AlphaParam
    n0: int
    N: int
    c_loc_hat: Surd
    c_loc_path: Prefix
    c_loc_max: ProfileEntry
    c_loc_min: ProfileEntry
    c_hat: Surd
    global_max: ProfileEntry
    global_min: ProfileEntry
    global_max_node: Prefix
    global_min_node: Prefix
    paths_examined: int = 0
    notes: list = field(default_factory=list)

    def to_text(self, digits: int = DEFAULT_DIGITS) -> str:
        def frac(x):
            return f"{x.numerator}/{x.denominator}"

        lines = [
            f"m={self.alpha.m}",
            f"alpha={self.alpha.p}/{self.alpha.q}",
            f"n0={self.n0}",
            f"N={self.N}",
            f"paths_examined={self.paths_examined}",
            f"c_loc_hat={self.c_loc_max.exact_pair()}/{self.c_loc_min.exact_pair()}",
            f"c_loc_hat_approx={self.c_loc_hat.approx(digits)}",
            f"c_loc_path={self.c_loc_path}",
            f"c_hat={self.global_max.exact_pair()}/{self.global_min.exact_pair()}",
            f"c_hat_approx={self.c_hat.approx(digits)}",
            f"upper_hat_mass={frac(self.global_max.mass)}",
            f"upper_hat_level={self.global_max.n}",
            f"upper_hat_node={self.global_max_node}",
            f"lower_hat_mass={frac(self.global_min.mass)}",
            f"lower_hat_level={self.global_min.n}",
            f"lower_hat_node={self.global_min_node}",
        ]
        return "\n".join(lines) + "\n"


def oscillation_report(mu: TreeMeasure, alpha: AlphaParam, n0: int = 0) -> OscillationReport:
    """Windowed oscillation over all depth-``N`` support paths of ``mu``.

    Essential extremes become plain extremes over support nodes, since every
    support node has positive mass.  Ties are resolved towards the
    lexicographically smallest path.  For a :class:`UniformMeasure` every path
    has the same profile, so only the all-zeros path is examined.
    """
    if alpha.m != mu.m:
        raise ValueError(f"base mismatch: measure has m={mu.m}, alpha has m={alpha.m}")
    N = mu.depth
    if not 0 <= n0 <= N:
        raise ValueError(f"empty window [{n0}, {N}]")
    if not isinstance(mu, UniformMeasure) and not mu.masses:
        raise ValueError("measure is empty")
    m = mu.m

    if isinstance(mu, UniformMeasure):
        profile = f_profile(mu, alpha, (0,) * N)
        hi, lo = _extremes(profile.entries[n0:])
        ratio = hi.f / lo.f
        path = Prefix(m, (0,) * N)
        return OscillationReport(alpha, n0, N, ratio, path, hi, lo, ratio, hi, lo,
                                 path.truncate(hi.n), path.truncate(lo.n),
                                 paths_examined=1, notes=["uniform: one shared profile"])

    # Level-by-level sweep carrying each node's running window extremes.
    root = ProfileEntry(0, mu.root_mass, f_value(alpha, 0, mu.root_mass))
    state = {(): (root, root) if n0 == 0 else (None, None)}
    g_hi = g_lo = None
    g_hi_node = g_lo_node = None
    if n0 == 0:
        g_hi = g_lo = root
        g_hi_node = g_lo_node = ()
    for n in range(1, N + 1):
        nxt = {}
        for node in sorted(state):
            hi, lo = state[node]
            for d in mu.support_children(node):
                child = node + (d,)
                mass = mu.mass(child)
                e = ProfileEntry(n, mass, f_value(alpha, n, mass))
                if n >= n0:
                    c_hi = e if hi is None or e.f > hi.f else hi
                    c_lo = e if lo is None or e.f < lo.f else lo
                    if g_hi is None or e.f > g_hi.f:
                        g_hi, g_hi_node = e, child
                    if g_lo is None or e.f < g_lo.f:
                        g_lo, g_lo_node = e, child
                else:
                    c_hi = c_lo = None
                nxt[child] = (c_hi, c_lo)
        state = nxt

    best = None
    for leaf in sorted(state):
        hi, lo = state[leaf]
        ratio = hi.f / lo.f
        if best is None or ratio > best[0]:
            best = (ratio, leaf, hi, lo)
    ratio, leaf, hi, lo = best
    return OscillationReport(alpha, n0, N, ratio, Prefix(m, leaf), hi, lo, g_hi.f / g_lo.f,
                             g_hi, g_lo, Prefix(m, g_hi_node), Prefix(m, g_lo_node),
                             paths_examined=len(state))


def brute_force_mass(mu: TreeMeasure, iv: PrefixLike) -> Fraction:
    """Mass of ``iv`` summed from depth-``N`` leaves only (oracle for :func:`mass_of`)."""
    digits = as_digits(iv, mu.m)
    if len(digits) > mu.depth:
        raise ValueError(f"interval level {len(digits)} is beyond the measure depth {mu.depth}")
    k = len(digits)
    total = Fraction(0)
    for leaf in mu.leaves():
        if tuple(leaf[:k]) == digits:
            total += mu.mass(tuple(leaf))
    return total
