"""Finite-depth measures on the m-adic space, stored as mass-labelled trees.

A :class:`TreeMeasure` keeps the exact mass of every interval of positive
measure down to a fixed depth ``N``.  Absent nodes have mass zero.  The
uniform measures determined by a total mass and a branching sequence are
represented implicitly by :class:`UniformMeasure`, which never materialises
its (exponentially large) support unless asked to.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Optional

from .core import AlphaParam, Prefix, PrefixLike, as_digits, format_prefix
from .exact import as_fraction

__all__ = [
    "TreeMeasure",
    "UniformMeasure",
    "BranchingSpec",
    "GreedyResult",
    "NotUniform",
    "Violation",
    "MeasureValidationError",
    "build_uniform",
    "build_greedy",
    "greedy_branching",
    "build_random",
    "validate",
    "mass_of",
    "is_uniform",
    "block_lift",
    "sample_path",
    "SPLIT_LAWS",
]


@dataclass(frozen=True)
class Violation:
    kind: str
    prefix: tuple
    message: str
    m: int = 10

    def __str__(self) -> str:
        return f"{self.kind} at node {format_prefix(self.prefix, self.m)}: {self.message}"


class MeasureValidationError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        shown = "; ".join(str(v) for v in self.violations[:5])
        more = f" (+{len(self.violations) - 5} more)" if len(self.violations) > 5 else ""
        super().__init__(f"invalid measure: {shown}{more}")


class TreeMeasure:
    """Exact node masses of a measure down to level ``depth``.

    ``masses`` maps digit tuples to positive Fractions.  Construction does not
    validate; call :func:`validate` (or use a builder, which always produces
    valid measures).
    """

    def __init__(self, m: int, depth: int, masses: dict, alpha: Optional[Fraction] = None):
        if m < 2:
            raise ValueError(f"base m must be >= 2, got {m}")
        if depth < 0:
            raise ValueError(f"depth must be >= 0, got {depth}")
        self.m = m
        self.depth = depth
        self._masses = {tuple(k): as_fraction(v) for k, v in masses.items()}
        self.alpha = None if alpha is None else Fraction(alpha)

    # -- structure -------------------------------------------------------
    @property
    def masses(self) -> dict:
        return self._masses

    @property
    def root_mass(self) -> Fraction:
        return self.mass(())

    x0 = root_mass

    def mass(self, digits: tuple) -> Fraction:
        return self.masses.get(digits, Fraction(0))

    @cached_property
    def _child_index(self) -> dict:
        index = {}
        for key in sorted(self.masses):
            if key:
                index.setdefault(key[:-1], []).append(key[-1])
        return index

    def support_children(self, digits: tuple) -> list:
        """Digits ``d`` (ascending) such that ``digits + (d,)`` has positive mass."""
        return list(self._child_index.get(tuple(digits), ()))

    def nodes(self) -> Iterator[tuple]:
        """Stored nodes in preorder (lexicographic digit order)."""
        return iter(sorted(self.masses))

    def level(self, n: int) -> list:
        return sorted(k for k in self.masses if len(k) == n)

    def path_masses(self, digits: tuple) -> list:
        """Masses of ``digits[:n]`` for ``n = 0, 1, ...`` up to the first zero (excluded)."""
        out = []
        for n in range(len(digits) + 1):
            v = self.mass(tuple(digits[:n]))
            if v == 0:
                break
            out.append(v)
        return out

    def leaves(self) -> Iterator[tuple]:
        return iter(self.level(self.depth))

    def __len__(self) -> int:
        return len(self.masses)

    def __eq__(self, other):
        if not isinstance(other, TreeMeasure):
            return NotImplemented
        return (self.m, self.depth, self.masses) == (other.m, other.depth, other.masses)

    __hash__ = None

    def __repr__(self) -> str:
        return f"{type(self).__name__}(m={self.m}, depth={self.depth}, x0={self.root_mass})"

    def to_explicit(self) -> "TreeMeasure":
        return TreeMeasure(self.m, self.depth, dict(self.masses), self.alpha)

    def replace_masses(self, updates: dict) -> "TreeMeasure":
        """Copy with some node masses overwritten (``None`` deletes the node)."""
        masses = dict(self.masses)
        for k, v in updates.items():
            if v is None:
                masses.pop(tuple(k), None)
            else:
                masses[tuple(k)] = as_fraction(v)
        return TreeMeasure(self.m, self.depth, masses, self.alpha)


@dataclass(frozen=True)
class BranchingSpec:
    """Total mass ``x0`` and support branching counts ``s_0, s_1, ...``."""

    x0: Fraction
    s_seq: tuple

    def __post_init__(self):
        object.__setattr__(self, "x0", as_fraction(self.x0))
        object.__setattr__(self, "s_seq", tuple(int(s) for s in self.s_seq))
        if self.x0 <= 0:
            raise ValueError("x0 must be positive")
        for i, s in enumerate(self.s_seq):
            if s < 1:
                raise ValueError(f"s_{i} = {s} must be >= 1")

    def check_base(self, m: int) -> None:
        for i, s in enumerate(self.s_seq):
            if s > m:
                raise ValueError(f"s_{i} = {s} exceeds the base m = {m}")

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class NotUniform:
    """Failure of :func:`is_uniform` with a pair of same-level witnesses."""

    witness: tuple
    reason: str
    level: int

    def __bool__(self) -> bool:
        return False


class UniformMeasure(TreeMeasure):
    """The uniform measure of a :class:`BranchingSpec` in canonical layout.

    Support digits at position ``i`` are ``0 .. s_{i-1} - 1``; every support
    interval of level ``n`` has mass ``x0 / (s_0 ... s_{n-1})``.
    """

    def __init__(self, m: int, spec: BranchingSpec, depth: int, alpha: Optional[Fraction] = None):
        spec.check_base(m)
        if depth > len(spec.s_seq):
            raise ValueError(f"depth {depth} exceeds the branching sequence length {len(spec.s_seq)}")
        if depth < 0:
            raise ValueError(f"depth must be >= 0, got {depth}")
        self.m = m
        self.depth = depth
        self.spec = BranchingSpec(spec.x0, spec.s_seq[:depth])
        self.alpha = None if alpha is None else Fraction(alpha)

    @cached_property
    def level_masses(self) -> tuple:
        x0 = self.spec.x0
        out = [x0]
        prod = 1
        for s in self.spec.s_seq:
            prod *= s
            out.append(Fraction(x0.numerator, x0.denominator * prod))
        return tuple(out)

    def in_support(self, digits: tuple) -> bool:
        if len(digits) > self.depth:
            return False
        return all(d < s for d, s in zip(digits, self.spec.s_seq))

    def mass(self, digits: tuple) -> Fraction:
        digits = tuple(digits)
        if not self.in_support(digits):
            return Fraction(0)
        return self.level_masses[len(digits)]

    def path_masses(self, digits: tuple) -> list:
        out = [self.level_masses[0]]
        for n, (d, s) in enumerate(zip(digits, self.spec.s_seq), 1):
            if d >= s:
                break
            out.append(self.level_masses[n])
        return out

    def support_children(self, digits: tuple) -> list:
        digits = tuple(digits)
        if len(digits) >= self.depth or not self.in_support(digits):
            return []
        return list(range(self.spec.s_seq[len(digits)]))

    def level(self, n: int) -> list:
        if n > self.depth:
            return []
        return [tuple(t) for t in itertools.product(*(range(s) for s in self.spec.s_seq[:n]))]

    def leaves(self) -> Iterator[tuple]:
        return iter(itertools.product(*(range(s) for s in self.spec.s_seq)))

    def support_size(self, n: int) -> int:
        return math.prod(self.spec.s_seq[:n])

    @cached_property
    def masses(self) -> dict:
        out = {}
        for n in range(self.depth + 1):
            mass = self.level_masses[n]
            for key in self.level(n):
                out[key] = mass
        return out

    def nodes(self) -> Iterator[tuple]:
        # itertools.product already yields each level in lexicographic order.
        return iter(sorted(self.masses))

    def __len__(self) -> int:
        return sum(self.support_size(n) for n in range(self.depth + 1))


@dataclass
class GreedyResult:
    measure: UniformMeasure
    spec: BranchingSpec
    profile: object  # density.DensityProfile along the all-zeros path
    degenerate: bool = False


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------


def build_uniform(m: int, spec: BranchingSpec, depth: int, alpha=None) -> UniformMeasure:
    """Uniform measure with total mass ``spec.x0`` and branching ``spec.s_seq``."""
    return UniformMeasure(m, spec, depth, alpha)


def greedy_branching(alpha: AlphaParam, depth: int) -> list:
    """Branching counts keeping ``f_n`` inside ``[x0, (ceil_w / floor_w) x0]``.

    ``s_n = ceil_w`` exactly when ``f_n * w / floor_w > (ceil_w / floor_w) x0``,
    otherwise ``floor_w`` (ties take ``floor_w``).  With ``f_n = w**n x0 / P_n``
    the test is ``m**(p(n+1)) > ceil_w**q * P_n**q``; both sides are carried
    incrementally so each step costs one big-by-small multiplication.
    """
    lo, hi = alpha.floor_w, alpha.ceil_w
    step_m = alpha.m ** alpha.p
    hi_q, lo_q = hi ** alpha.q, lo ** alpha.q
    lhs = step_m      # m**(p(n+1))
    prod_q = 1        # P_n**q
    s_seq = []
    for _ in range(depth):
        if lhs > hi_q * prod_q:
            s_seq.append(hi)
            prod_q *= hi_q
        else:
            s_seq.append(lo)
            prod_q *= lo_q
        lhs *= step_m
    return s_seq


def build_greedy(alpha: AlphaParam, x0=1, depth: int = 0) -> GreedyResult:
    """Uniform measure whose density ratios stay within ``ceil_w / floor_w``."""
    from .density import f_profile

    x0 = as_fraction(x0)
    if x0 <= 0:
        raise ValueError("x0 must be positive")
    spec = BranchingSpec(x0, greedy_branching(alpha, depth))
    mu = build_uniform(alpha.m, spec, depth, alpha=alpha.alpha)
    profile = f_profile(mu, alpha, Prefix(alpha.m, (0,) * depth))
    return GreedyResult(mu, spec, profile, degenerate=alpha.w_is_integer)


SPLIT_LAWS = ("integer", "equal", "skewed")


def _split_weights(rng: random.Random, k: int, law: str) -> list:
    if law == "integer":
        return [rng.randint(1, 9) for _ in range(k)]
    if law == "equal":
        return [1] * k
    if law == "skewed":
        return [2 ** rng.randint(0, 8) for _ in range(k)]
    raise ValueError(f"unknown mass split law {law!r}; expected one of {SPLIT_LAWS}")


def build_random(m: int, depth: int, seed: int, min_children: int = 1, max_children: Optional[int] = None,
                 mass_split_law: str = "integer", x0=1) -> TreeMeasure:
    """Random valid measure; identical arguments give identical measures."""
    if max_children is None:
        max_children = m
    if not 1 <= min_children <= max_children <= m:
        raise ValueError(f"need 1 <= min_children <= max_children <= m, got {min_children}, {max_children}, m={m}")
    if mass_split_law not in SPLIT_LAWS:
        raise ValueError(f"unknown mass split law {mass_split_law!r}; expected one of {SPLIT_LAWS}")
    x0 = as_fraction(x0)
    if x0 <= 0:
        raise ValueError("x0 must be positive")
    rng = random.Random(seed)
    masses = {(): x0}
    frontier = [()]
    for _ in range(depth):
        nxt = []
        for node in frontier:
            k = rng.randint(min_children, max_children)
            digits = sorted(rng.sample(range(m), k))
            weights = _split_weights(rng, k, mass_split_law)
            total = sum(weights)
            parent = masses[node]
            for d, wt in zip(digits, weights):
                child = node + (d,)
                masses[child] = parent * wt / total
                nxt.append(child)
        frontier = nxt
    return TreeMeasure(m, depth, masses)


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------


def validate(mu: TreeMeasure) -> list:
    """All violations of positivity, digit range, parent presence and consistency."""
    out = []
    masses = mu.masses
    if not masses:
        return [Violation("empty", (), "a measure must be nonzero", mu.m)]
    if () not in masses:
        out.append(Violation("root", (), "root node is missing", mu.m))
    child_sums = {}
    for key in sorted(masses):
        v = masses[key]
        if v <= 0:
            out.append(Violation("positivity", key, f"mass {v} is not positive", mu.m))
        if any(not 0 <= d < mu.m for d in key):
            out.append(Violation("digit", key, f"digit outside 0..{mu.m - 1}", mu.m))
        if len(key) > mu.depth:
            out.append(Violation("depth", key, f"level {len(key)} exceeds depth {mu.depth}", mu.m))
        if key:
            parent = key[:-1]
            if parent not in masses:
                out.append(Violation("orphan", key, "parent node is not stored", mu.m))
            child_sums[parent] = child_sums.get(parent, Fraction(0)) + v
    for key in sorted(masses):
        if len(key) < mu.depth:
            total = child_sums.get(key, Fraction(0))
            if total != masses[key]:
                out.append(Violation("consistency", key,
                                     f"children sum to {total}, node mass is {masses[key]}", mu.m))
    return out


def mass_of(mu: TreeMeasure, iv: PrefixLike) -> Fraction:
    digits = as_digits(iv, mu.m)
    if len(digits) > mu.depth:
        raise ValueError(f"interval level {len(digits)} is beyond the measure depth {mu.depth}")
    return mu.mass(digits)


def is_uniform(mu: TreeMeasure):
    """Recover ``(x0, s_seq)`` of a uniform measure, or a :class:`NotUniform` witness.

    A measure is uniform when, level by level, all support intervals share one
    mass and one number of support children.
    """
    m = mu.m
    s_seq = []
    for n in range(mu.depth + 1):
        nodes = mu.level(n)
        first = nodes[0]
        mass0 = mu.mass(first)
        for other in nodes[1:]:
            if mu.mass(other) != mass0:
                return NotUniform((Prefix(m, first), Prefix(m, other)), "unequal masses", n)
        if n == mu.depth:
            break
        count0 = len(mu.support_children(first))
        for other in nodes[1:]:
            if len(mu.support_children(other)) != count0:
                return NotUniform((Prefix(m, first), Prefix(m, other)), "unequal branching", n)
        s_seq.append(count0)
    return BranchingSpec(mu.root_mass, tuple(s_seq))


def _encode_block(block: tuple, m: int) -> int:
    v = 0
    for a in block:
        v = v * m + a
    return v


def block_lift(mu: TreeMeasure, d: int) -> TreeMeasure:
    """Re-read ``mu`` over base ``m**d`` by grouping ``d`` consecutive digits.

    Level ``k`` of the result carries the masses of level ``k*d`` of ``mu``;
    trailing levels that do not fill a block are dropped.
    """
    if d < 1:
        raise ValueError(f"block size must be >= 1, got {d}")
    depth = mu.depth // d
    masses = {}
    for key, v in mu.masses.items():
        if len(key) % d or len(key) > depth * d:
            continue
        masses[tuple(_encode_block(key[i:i + d], mu.m) for i in range(0, len(key), d))] = v
    return TreeMeasure(mu.m ** d, depth, masses, mu.alpha)


def sample_path(mu: TreeMeasure, seed) -> Prefix:
    """Descend from the root choosing children with probability proportional to mass."""
    rng = random.Random(seed)
    node = ()
    for _ in range(mu.depth):
        kids = mu.support_children(node)
        if len(kids) == 1:
            node = node + (kids[0],)
            continue
        ms = [mu.mass(node + (c,)) for c in kids]
        scale = math.lcm(*(x.denominator for x in ms))
        weights = [x.numerator * (scale // x.denominator) for x in ms]
        r = rng.randrange(sum(weights))
        for c, wt in zip(kids, weights):
            if r < wt:
                node = node + (c,)
                break
            r -= wt
    return Prefix(mu.m, node)
