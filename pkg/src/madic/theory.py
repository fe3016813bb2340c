"""Bounds on density oscillation, the pigeonhole selection and marked intervals.

Everything is exact.  Irrational quantities such as ``w = m**(p/q)`` appear
only as :class:`~madic.exact.Surd` values; the constant ``K = tau * m**-alpha``
is replaced by a rational under-approximation ``K_lo``, which keeps every
inequality checked with it sound.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .core import AlphaParam, Prefix, PrefixLike, as_digits, format_prefix
from .exact import Surd, as_fraction, compare, floor_of, iroot
from .measure import TreeMeasure, block_lift, validate

__all__ = [
    "MarkClass",
    "LowerBound",
    "BoundReport",
    "TargetSet",
    "ChildMark",
    "MarkTable",
    "AvoidanceReport",
    "LemmaViolation",
    "floor_ceil_power",
    "lower_bound",
    "upper_bound",
    "cross_check_bounds",
    "default_delta",
    "dirichlet_tau",
    "dirichlet_select",
    "target_set",
    "classify_children",
    "build_marked_sets",
    "avoidance_decay_check",
    "inverse_w_lower",
    "random_tuple",
    "adversarial_tuples",
    "DEFAULT_I_MAX",
]

DEFAULT_I_MAX = 32
K_BITS = 64

Real = Union[Fraction, Surd]


class LemmaViolation(AssertionError):
    """A guarantee that holds by proof failed; indicates a bug or bad input."""


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------


def floor_ceil_power(alpha: AlphaParam, i: int) -> tuple:
    """``(floor(w**i), ceil(w**i))`` via an integer ``q``-th root of ``m**(p*i)``."""
    if i < 1:
        raise ValueError(f"power index must be >= 1, got {i}")
    n = alpha.m ** (alpha.p * i)
    k = iroot(n, alpha.q)
    return (k, k) if k ** alpha.q == n else (k, k + 1)


@dataclass(frozen=True)
class LowerBound:
    value: Surd
    kind: str   # "i-term", "j-term" or "trivial"
    index: int

    def approx(self, digits: int = 7) -> str:
        return self.value.approx(digits)


def lower_bound(alpha: AlphaParam, I_max: int = DEFAULT_I_MAX) -> LowerBound:
    """Largest of ``w**i / floor(w**i)`` and ``ceil(w**j) / w**j`` for ``1 <= i, j <= I_max``.

    When ``w`` is an integer every term is 1 and the trivial bound is returned.
    Exact ties go to the smallest ``i``-term, then the smallest ``j``-term.
    """
    if I_max < 1:
        raise ValueError(f"I_max must be >= 1, got {I_max}")
    if alpha.w_is_integer:
        return LowerBound(Surd(1, alpha.m), "trivial", 0)
    best = None
    powers = [floor_ceil_power(alpha, i) for i in range(1, I_max + 1)]
    for i, (k, _) in enumerate(powers, 1):
        term = alpha.w_power(i, Fraction(1, k))
        if best is None or term > best.value:
            best = LowerBound(term, "i-term", i)
    for j, (_, c) in enumerate(powers, 1):
        term = alpha.w_power(-j, c)
        if term > best.value:
            best = LowerBound(term, "j-term", j)
    return best


def upper_bound(alpha: AlphaParam) -> Fraction:
    """``ceil(w) / floor(w)``, attained by the greedy uniform measure."""
    return Fraction(alpha.ceil_w, alpha.floor_w)


@dataclass
class BoundReport:
    alpha: AlphaParam
    I_max: int
    lower: LowerBound
    upper: Fraction

    @property
    def consistent(self) -> bool:
        return self.lower.value <= self.upper

    def to_text(self) -> str:
        return "\n".join([
            f"m={self.alpha.m}",
            f"alpha={self.alpha.p}/{self.alpha.q}",
            f"I_max={self.I_max}",
            f"lower_exact={self.lower.value.exact_str()}",
            f"lower_approx={self.lower.approx()}",
            f"lower_kind={self.lower.kind}",
            f"lower_index={self.lower.index}",
            f"upper={self.upper.numerator}/{self.upper.denominator}",
            f"consistent={'yes' if self.consistent else 'no'}",
        ]) + "\n"


def cross_check_bounds(alpha: AlphaParam, I_max: int = DEFAULT_I_MAX) -> BoundReport:
    return BoundReport(alpha, I_max, lower_bound(alpha, I_max), upper_bound(alpha))


# ---------------------------------------------------------------------------
# Pigeonhole selection
# ---------------------------------------------------------------------------


def _floor_w(w: Real) -> int:
    return floor_of(w)


def _check_w_delta(w: Real, delta: Fraction) -> int:
    if compare(w, 1) <= 0:
        raise ValueError("w must exceed 1")
    fl = _floor_w(w)
    if compare(w, fl) == 0:
        raise ValueError(f"w = {w} is an integer")
    if delta <= 0:
        raise ValueError("delta must be positive")
    # w / floor(w) - delta > 1  <=>  w > floor(w) * (1 + delta)
    if compare(w, fl * (1 + delta)) <= 0:
        raise ValueError(f"delta = {delta} too large: need w/floor(w) - delta > 1")
    return fl


def default_delta(w: Real) -> Fraction:
    """``min(1/10, (w/floor(w) - 1)/2)``, using a rational lower bound of ``w``."""
    fl = _floor_w(w)
    if isinstance(w, Surd):
        scale = 1 << K_BITS
        lo = Fraction(floor_of(w * scale), scale)
    else:
        lo = as_fraction(w)
    delta = min(Fraction(1, 10), (lo / fl - 1) / 2)
    if delta <= 0:
        raise ValueError(f"w = {w} is an integer or too close to one; no valid delta")
    return delta


def dirichlet_tau(w: Real, u, delta) -> Fraction:
    """``tau = floor(w) * delta / u``, the threshold exhibited by the pigeonhole argument."""
    u = as_fraction(u)
    delta = as_fraction(delta)
    if u <= 1:
        raise ValueError("u must exceed 1")
    fl = _check_w_delta(w, delta)
    return fl * delta / u


@dataclass(frozen=True)
class TargetSet:
    """``[tau, w/ceil(w)] U [w/floor(w) - delta, w]``; both pieces closed."""

    w: Real
    tau: Fraction
    delta: Fraction
    floor_w: int
    ceil_w: int

    @property
    def little_hi(self) -> Real:
        return self.w / self.ceil_w

    def is_little(self, z: Real) -> bool:
        return compare(z, self.tau) >= 0 and compare(z, self.little_hi) <= 0

    def is_big(self, z: Real) -> bool:
        # z >= w/floor - delta  <=>  z - w/floor >= -delta
        return _diff_ge(z, self.w / self.floor_w, -self.delta) and compare(z, self.w) <= 0

    def classify(self, z: Real) -> Optional[str]:
        if self.is_little(z):
            return "little"
        if self.is_big(z):
            return "big"
        return None

    def __contains__(self, z) -> bool:
        return self.classify(z) is not None


def _diff_ge(a: Real, b: Real, c: Fraction) -> bool:
    """Exact ``a - b >= c``; surds must share base and exponent (or be rational)."""
    if isinstance(a, Surd) or isinstance(b, Surd):
        sa = a if isinstance(a, Surd) else Surd(a, b.base)
        sb = b if isinstance(b, Surd) else Surd(b, sa.base)
        if sa.exponent == sb.exponent and sa.base == sb.base:
            return compare(Surd(sa.coeff - sb.coeff, sa.base, sa.exponent), c) >= 0
        if sa.is_rational and sb.is_rational:
            return sa.to_fraction() - sb.to_fraction() >= c
        raise ValueError("cannot subtract surds with different exponents")
    return as_fraction(a) - as_fraction(b) >= c


def target_set(w: Real, u, delta, tau=None) -> TargetSet:
    delta = as_fraction(delta)
    if tau is None:
        tau = dirichlet_tau(w, u, delta)
    fl = _check_w_delta(w, delta)
    return TargetSet(w, as_fraction(tau), delta, fl, fl + 1)


def dirichlet_select(zs: Sequence[Real], w: Real, u, delta) -> int:
    """1-based position of the first ``z`` in the target set.

    Requires positive ``zs`` with exact sum ``w`` and ``len(zs) < u``; such a
    position always exists.
    """
    u = as_fraction(u)
    if not zs:
        raise ValueError("need at least one number")
    if len(zs) >= u:
        raise ValueError(f"{len(zs)} numbers but the cap u = {u} requires fewer")
    if any(compare(z, 0) <= 0 for z in zs):
        raise ValueError("all numbers must be positive")
    _check_sum(zs, w)
    ts = target_set(w, u, delta)
    for pos, z in enumerate(zs, 1):
        if z in ts:
            return pos
    raise LemmaViolation(f"no number of {list(zs)} lies in the target set for w={w}, u={u}, delta={delta}")


def _check_sum(zs, w) -> None:
    if all(not isinstance(z, Surd) for z in zs) and not isinstance(w, Surd):
        total = sum((as_fraction(z) for z in zs), Fraction(0))
        if total != w:
            raise ValueError(f"numbers sum to {total}, expected {w}")
        return
    # Surd case: all terms must be rational multiples of the same power as w.
    ref = w if isinstance(w, Surd) else zs[0]
    coeffs = []
    for z in list(zs) + [w]:
        if isinstance(z, Surd) and z.base == ref.base and z.exponent == ref.exponent:
            coeffs.append(z.coeff)
        else:
            raise ValueError("sum check needs numbers that are rational multiples of w")
    if sum(coeffs[:-1], Fraction(0)) != coeffs[-1]:
        raise ValueError("numbers do not sum to w")


def random_tuple(rng: random.Random, w: Fraction, u) -> list:
    """Random positive rationals with exact sum ``w`` and length below ``u``."""
    u = as_fraction(u)
    max_len = math.ceil(u) - 1
    n = rng.randint(1, max_len)
    mode = rng.random()
    if mode < 0.5:
        weights = [rng.randint(1, 1000) for _ in range(n)]
    elif mode < 0.8:
        # Heavy-tailed weights push most entries towards zero.
        weights = [rng.randint(1, 10) ** rng.randint(1, 6) for _ in range(n)]
    else:
        base = rng.randint(50, 100)
        weights = [base + rng.randint(-3, 3) for _ in range(n)]
    total = sum(weights)
    return [w * c / total for c in weights]


def adversarial_tuples(w: Fraction, u, delta, count: int = 100) -> list:
    """Tuples crowding the gap and the endpoints of the target set.

    Each tuple is valid input for :func:`dirichlet_select` (positive, exact sum
    ``w``, fewer than ``u`` entries).
    """
    w, u, delta = as_fraction(w), as_fraction(u), as_fraction(delta)
    fl = _check_w_delta(w, delta)
    cl = fl + 1
    tau = dirichlet_tau(w, u, delta)
    max_len = math.ceil(u) - 1
    out = []

    def add(t):
        if 1 <= len(t) <= max_len and all(z > 0 for z in t) and sum(t) == w and t not in out:
            out.append(t)

    add([w])
    add([w / cl] * cl)
    add([w / fl] * fl)
    big_lo = w / fl - delta
    little_hi = w / cl
    gap = big_lo - little_hi
    k = 1
    while len(out) < count and k <= 50 * count:
        eps = gap / (k + 1)
        for val in (big_lo - eps, little_hi + eps, big_lo, little_hi, tau - tau / (k + 1)):
            for j in range(0, fl + 1):
                head = [val] * j
                rest = w - sum(head)
                slots = max_len - j
                if rest <= 0 or slots < 1:
                    continue
                for pieces in sorted({1, slots, max(1, slots // 2)}):
                    tail = [rest / pieces] * pieces
                    add(head + tail)
                    add(tail + head)
                    if pieces >= 2 and rest > tau:
                        add(head + [tau] + [(rest - tau) / (pieces - 1)] * (pieces - 1))
        k += 1
    return out[:count]


# ---------------------------------------------------------------------------
# Marked intervals
# ---------------------------------------------------------------------------


class MarkClass(enum.Enum):
    LITTLE = "little"
    BIG = "big"
    UNMARKED = "unmarked"

    @property
    def marked(self) -> bool:
        return self is not MarkClass.UNMARKED


@dataclass(frozen=True)
class ChildMark:
    prefix: Prefix
    mark: MarkClass
    ratio: Surd   # w * mass(child) / mass(parent)

    def ratio_text(self) -> str:
        r = self.ratio
        return f"w^1*{r.coeff.numerator}/{r.coeff.denominator}"


def inverse_w_lower(alpha: AlphaParam, bits: int = K_BITS) -> Fraction:
    """Largest ``t / 2**bits`` not exceeding ``m**-alpha``."""
    scale = 1 << bits
    t = iroot(scale ** alpha.q // alpha.m ** alpha.p, alpha.q)
    return Fraction(t, scale)


def lemma_cap(mu: TreeMeasure) -> int:
    """Cap ``u`` for the selection lemma: ``m``, or ``m + 1`` when some interval has ``m`` support children."""
    full = any(len(mu.support_children(node)) >= mu.m for node in mu.nodes() if len(node) < mu.depth)
    return mu.m + 1 if full else mu.m


def classify_children(mu: TreeMeasure, alpha: AlphaParam, iv: PrefixLike, tau, delta) -> list:
    """Mark each support child of ``iv`` as little, big or unmarked by its ratio ``z``."""
    if alpha.m != mu.m:
        raise ValueError(f"base mismatch: measure has m={mu.m}, alpha has m={alpha.m}")
    digits = as_digits(iv, mu.m)
    parent = mu.mass(digits)
    if parent == 0:
        raise ValueError(f"interval {format_prefix(digits, mu.m)} is not in the support")
    if len(digits) >= mu.depth:
        raise ValueError(f"interval {format_prefix(digits, mu.m)} is at the truncation depth")
    ts = TargetSet(alpha.w, as_fraction(tau), as_fraction(delta), alpha.floor_w, alpha.ceil_w)
    out = []
    for d in mu.support_children(digits):
        child = digits + (d,)
        z = alpha.w_power(1, mu.mass(child) / parent)
        cls = ts.classify(z)
        mark = MarkClass(cls) if cls else MarkClass.UNMARKED
        out.append(ChildMark(Prefix(mu.m, child), mark, z))
    return out


@dataclass
class MarkTable:
    """Marked sets ``Gamma_n`` with the parameters used to build them."""

    alpha: AlphaParam
    delta: Fraction
    tau: Fraction
    u: int
    K_lo: Fraction
    levels: dict = field(default_factory=dict)      # n -> list[ChildMark], all support children
    violations: list = field(default_factory=list)

    def marked(self, n: int) -> list:
        return [c for c in self.levels.get(n, []) if c.mark.marked]

    @property
    def marked_prefixes(self) -> set:
        return {c.prefix.digits for cs in self.levels.values() for c in cs if c.mark.marked}

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_text(self, digits: int = 15) -> str:
        lines = [
            f"m={self.alpha.m}",
            f"alpha={self.alpha.p}/{self.alpha.q}",
            f"delta={self.delta.numerator}/{self.delta.denominator}",
            f"tau={self.tau.numerator}/{self.tau.denominator}",
            f"u={self.u}",
            f"K_lo={self.K_lo.numerator}/{self.K_lo.denominator}",
        ]
        for n in sorted(self.levels):
            for c in self.levels[n]:
                if c.mark.marked:
                    lines.append(f"mark {n} {c.prefix} {c.mark.value} {c.ratio_text()} {c.ratio.approx(digits)}")
        for v in self.violations:
            lines.append(f"violation {v}")
        return "\n".join(lines) + "\n"


def build_marked_sets(mu: TreeMeasure, alpha: AlphaParam, tau=None, delta=None, u=None) -> MarkTable:
    """Classify every support child and check the mass hypothesis of the marked sets.

    Defaults: ``delta = default_delta(w)``, ``u = lemma_cap(mu)`` and
    ``tau = floor(w) * delta / u``.  Every support interval must get a marked
    child carrying at least ``K_lo`` of its mass; failures are recorded in
    ``violations`` (they cannot occur for valid input).
    """
    if alpha.m != mu.m:
        raise ValueError(f"base mismatch: measure has m={mu.m}, alpha has m={alpha.m}")
    if alpha.w_is_integer:
        raise ValueError(f"w = m^alpha is the integer {alpha.floor_w}; marks are undefined")
    issues = validate(mu)
    if issues:
        raise ValueError(f"invalid measure: {issues[0]}")
    delta = default_delta(alpha.w) if delta is None else as_fraction(delta)
    u = lemma_cap(mu) if u is None else u
    tau = dirichlet_tau(alpha.w, u, delta) if tau is None else as_fraction(tau)
    K_lo = tau * inverse_w_lower(alpha)
    table = MarkTable(alpha, delta, tau, u, K_lo)
    for n in range(mu.depth):
        row = []
        for node in mu.level(n):
            kids = classify_children(mu, alpha, node, tau, delta)
            row.extend(kids)
            parent = mu.mass(node)
            name = format_prefix(node, mu.m)
            if not any(c.mark.marked for c in kids):
                table.violations.append(f"no-marked-child {name}")
            marked_mass = sum((mu.mass(c.prefix.digits) for c in kids if c.mark.marked), Fraction(0))
            if marked_mass < K_lo * parent:
                table.violations.append(f"hypothesis {name}: marked mass {marked_mass} < K_lo * {parent}")
            if sum((c.ratio.coeff for c in kids), Fraction(0)) != 1:
                table.violations.append(f"ratio-sum {name}: child ratios do not sum to w")
        table.levels[n + 1] = row
    return table


@dataclass
class AvoidanceReport:
    """Mass of depth-``n`` nodes whose whole ancestor chain is unmarked, for each ``n``."""

    d_consec: int
    K_lo: Fraction
    x0: Fraction
    avoid_mass: list   # index n' -> mass, n' = 0 .. n_prime
    bounds: list       # (1 - K_lo)**n' * x0
    table: MarkTable

    @property
    def ok(self) -> bool:
        return all(a <= b for a, b in zip(self.avoid_mass, self.bounds))

    @property
    def non_increasing(self) -> bool:
        return all(b <= a for a, b in zip(self.avoid_mass, self.avoid_mass[1:]))

    def failures(self) -> list:
        return [n for n, (a, b) in enumerate(zip(self.avoid_mass, self.bounds)) if a > b]


def avoidance_decay_check(mu: TreeMeasure, table: MarkTable, d_consec: int = 1,
                          n_prime: Optional[int] = None) -> AvoidanceReport:
    """Compare the avoidance mass with the geometric bound ``(1 - K_lo)**n' * x0``.

    With ``d_consec > 1`` the check runs on ``block_lift(mu, d_consec)`` with
    marks rebuilt over base ``m**d_consec``.
    """
    if d_consec < 1:
        raise ValueError("d_consec must be >= 1")
    if n_prime is None:
        n_prime = mu.depth // d_consec
    if n_prime * d_consec > mu.depth:
        raise ValueError(f"depth {mu.depth} is too small for n_prime={n_prime}, d_consec={d_consec}")
    if d_consec > 1:
        mu = block_lift(mu, d_consec)
        table = build_marked_sets(mu, table.alpha.lift(d_consec))
    marked = table.marked_prefixes
    x0 = mu.root_mass
    frontier = [()]
    avoid = [x0]
    bounds = [x0]
    factor = 1 - table.K_lo
    for n in range(1, n_prime + 1):
        frontier = [node + (d,) for node in frontier for d in mu.support_children(node)
                    if node + (d,) not in marked]
        avoid.append(sum((mu.mass(c) for c in frontier), Fraction(0)))
        bounds.append(factor ** n * x0)
    return AvoidanceReport(d_consec, table.K_lo, x0, avoid, bounds, table)
