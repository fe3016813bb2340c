"""Points, intervals and the ultrametric of the m-adic sequence space.

A point of the space is an infinite sequence over ``{0, ..., m-1}``; here it
is always handled through a finite prefix.  The prefix of length ``n`` of a
point ``x`` doubles as the address of the ball of radius ``m**-n`` around
``x`` (an *interval of level n*).  Position 1 is the first coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from .exact import Surd, iroot

__all__ = [
    "AlphaParam",
    "Prefix",
    "Interval",
    "PrefixLike",
    "first_difference",
    "distance",
    "children",
    "parse_prefix",
    "format_prefix",
    "as_digits",
]


@dataclass(frozen=True)
class AlphaParam:
    """Base ``m`` together with a rational exponent ``alpha = p/q`` in (0, 1).

    ``w = m**alpha`` is irrational unless ``m**p`` is a perfect ``q``-th power;
    its floor and ceiling are computed with integer roots.
    """

    m: int
    p: int
    q: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"base m must be >= 2, got {self.m}")
        if not (0 < self.p < self.q):
            raise ValueError(f"alpha = {self.p}/{self.q} must lie in (0, 1)")
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"alpha = {self.p}/{self.q} is not in lowest terms")

    @classmethod
    def parse(cls, m: int, alpha: Union[str, Fraction]) -> "AlphaParam":
        """Build from ``m`` and ``"p/q"`` (or a Fraction); decimals are refused."""
        if isinstance(alpha, str):
            text = alpha.strip()
            if "/" not in text:
                raise ValueError(f"alpha must be given as p/q, got {alpha!r} (e.g. 1/2 instead of 0.5)")
            num, den = text.split("/", 1)
            frac = Fraction(int(num), int(den))
        else:
            frac = Fraction(alpha)
        return cls(int(m), frac.numerator, frac.denominator)

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.p, self.q)

    @cached_property
    def floor_w(self) -> int:
        return iroot(self.m ** self.p, self.q)

    @cached_property
    def ceil_w(self) -> int:
        return self.floor_w if self.w_is_integer else self.floor_w + 1

    @cached_property
    def w_is_integer(self) -> bool:
        return self.floor_w ** self.q == self.m ** self.p

    @property
    def w(self) -> Surd:
        return self.w_power(1)

    def w_power(self, k: int, coeff=1) -> Surd:
        """The exact value ``coeff * w**k``."""
        return Surd(coeff, self.m, Fraction(self.p * k, self.q))

    def lift(self, d: int) -> "AlphaParam":
        """Same alpha over base ``m**d``; its ``w`` is ``self.w ** d``."""
        return AlphaParam(self.m ** d, self.p, self.q)

    def same_w(self, other: "AlphaParam") -> bool:
        return self.m ** (self.p * other.q) == other.m ** (other.p * self.q)

    def __str__(self) -> str:
        return f"m={self.m} alpha={self.p}/{self.q}"


@dataclass(frozen=True, order=True)
class Prefix:
    """A finite digit string over ``{0, ..., m-1}``.

    A prefix of length ``n`` addresses the interval ``B_n(x)`` of every point
    ``x`` that starts with these digits.  The empty prefix is the whole space.
    """

    m: int
    digits: tuple = ()

    def __post_init__(self):
        digits = tuple(int(d) for d in self.digits)
        object.__setattr__(self, "digits", digits)
        if self.m < 2:
            raise ValueError(f"base m must be >= 2, got {self.m}")
        for i, d in enumerate(digits, 1):
            if not 0 <= d < self.m:
                raise ValueError(f"digit {d} at position {i} is outside 0..{self.m - 1}")

    @property
    def level(self) -> int:
        return len(self.digits)

    def __len__(self) -> int:
        return len(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __iter__(self):
        return iter(self.digits)

    def __str__(self) -> str:
        return format_prefix(self.digits, self.m)

    def truncate(self, n: int) -> "Prefix":
        return Prefix(self.m, self.digits[:n])

    def extend(self, digit: int) -> "Prefix":
        return Prefix(self.m, self.digits + (digit,))

    def parent(self) -> "Prefix":
        if not self.digits:
            raise ValueError("the empty prefix has no parent")
        return Prefix(self.m, self.digits[:-1])

    def startswith(self, other: "Prefix") -> bool:
        return self.digits[: len(other.digits)] == other.digits

    @classmethod
    def parse(cls, text: str, m: int) -> "Prefix":
        return cls(m, parse_prefix(text, m))


@dataclass(frozen=True)
class Interval:
    """The m-adic interval addressed by ``prefix``."""

    prefix: Prefix

    @property
    def level(self) -> int:
        return self.prefix.level

    @property
    def m(self) -> int:
        return self.prefix.m

    @property
    def digits(self) -> tuple:
        return self.prefix.digits

    @property
    def radius(self) -> Fraction:
        return Fraction(1, self.m ** self.level)

    def __contains__(self, point) -> bool:
        pt = point.prefix if isinstance(point, Interval) else point
        return len(pt) >= self.level and pt.digits[: self.level] == self.digits

    def __str__(self) -> str:
        return str(self.prefix)

    @classmethod
    def parse(cls, text: str, m: int) -> "Interval":
        return cls(Prefix.parse(text, m))


PrefixLike = Union[Prefix, Interval, Sequence[int], str]


def as_digits(x: PrefixLike, m: int) -> tuple:
    """Normalise any prefix spelling to a digit tuple, checking the alphabet."""
    if isinstance(x, Interval):
        x = x.prefix
    if isinstance(x, Prefix):
        if x.m != m:
            raise ValueError(f"prefix over base {x.m} used with base {m}")
        return x.digits
    if isinstance(x, str):
        return parse_prefix(x, m)
    return Prefix(m, tuple(x)).digits


def first_difference(a: Prefix, b: Prefix):
    """1-based position of the first differing digit, or ``None`` if identical.

    Prefixes of unequal length are compared over the shorter one; if they agree
    there the comparison is undecided and ``ValueError`` is raised.
    """
    if a.m != b.m:
        raise ValueError(f"alphabet mismatch: m={a.m} vs m={b.m}")
    for i, (x, y) in enumerate(zip(a.digits, b.digits), 1):
        if x != y:
            return i
    if len(a) != len(b):
        raise ValueError("one prefix extends the other; no difference position within the compared range")
    return None


def distance(a: Prefix, b: Prefix) -> Fraction:
    """``m ** (1 - n(a, b))`` where ``n`` is the first difference position; 0 if identical."""
    n = first_difference(a, b)
    if n is None:
        return Fraction(0)
    return Fraction(1, a.m ** (n - 1))


def children(iv: Union[Interval, Prefix], m: int = None) -> list:
    """The ``m`` intervals of the next level inside ``iv``, by appended digit."""
    prefix = iv.prefix if isinstance(iv, Interval) else iv
    if m is not None and m != prefix.m:
        raise ValueError(f"alphabet mismatch: interval over m={prefix.m}, asked for m={m}")
    return [Interval(prefix.extend(d)) for d in range(prefix.m)]


def format_prefix(digits: Iterable[int], m: int) -> str:
    digits = tuple(digits)
    if not digits:
        return "eps"
    if m > 10:
        return ".".join(str(d) for d in digits)
    return "".join(str(d) for d in digits)


def parse_prefix(text: str, m: int) -> tuple:
    text = text.strip()
    if text in ("eps", ""):
        return ()
    if m > 10:
        parts = text.split(".")
    else:
        if "." in text:
            raise ValueError(f"prefix {text!r}: '.' separators are only used for m > 10")
        parts = list(text)
    try:
        digits = tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f"malformed prefix {text!r}") from None
    return Prefix(m, digits).digits
