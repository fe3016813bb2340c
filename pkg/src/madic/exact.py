"""Exact arithmetic helpers: integer roots and values of the form ``r * m**e``.

Every ordering decision in the package goes through :class:`Surd`, which
compares numbers ``r * m**e`` (``r`` rational, ``e`` a rational exponent) by
raising both sides to a common integer power.  A floating-point log filter
decides comparisons that are far from a tie; anything close falls back to
big-integer arithmetic, so results are always exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import mpmath

__all__ = ["iroot", "iroot_ceil", "is_perfect_power", "Surd", "as_fraction", "render", "floor_of", "compare"]

DEFAULT_DIGITS = 15
_LOG_MARGIN = 1e-9


def iroot(n: int, k: int) -> int:
    """Return ``floor(n ** (1/k))`` for integers ``n >= 0``, ``k >= 1``."""
    if n < 0:
        raise ValueError("iroot of a negative number")
    if k < 1:
        raise ValueError("root index must be >= 1")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return math.isqrt(n)
    # Newton from above; the initial guess is a power of two >= the root.
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def iroot_ceil(n: int, k: int) -> int:
    r = iroot(n, k)
    return r if r ** k == n else r + 1


def is_perfect_power(n: int, k: int) -> bool:
    return iroot(n, k) ** k == n


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to :class:`Fraction`.

    Floats are rejected: every quantity in this package must be exact.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational number")
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if any(c in s for c in ".eE") and "/" not in s:
            raise ValueError(f"decimal literal {x!r} is not accepted; write it as num/den")
        return Fraction(s)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _log_fraction(r: Fraction) -> float:
    return math.log(r.numerator) - math.log(r.denominator)


def _power_compare(m: int, d: Fraction, ratio: Fraction) -> int:
    """Sign of ``m**d - ratio`` for ``ratio > 0``."""
    num, den = ratio.numerator, ratio.denominator
    k, r = divmod(d.numerator, d.denominator)
    q = d.denominator
    # m**d = m**k * m**(r/q); the second factor is often rational.
    if r == 0:
        root_num, root_den = 1, 1
    else:
        t = iroot(m ** r, q)
        if t ** q == m ** r:
            root_num, root_den = t, 1
        else:
            root_num = root_den = None
    if root_num is not None:
        if k >= 0:
            lhs, rhs = root_num * m ** k * den, num * root_den
        else:
            lhs, rhs = root_num * den, num * root_den * m ** (-k)
        return (lhs > rhs) - (lhs < rhs)
    # m**(k + r/q) vs num/den  <=>  m**r * (m**k * den)**q vs num**q
    if k >= 0:
        lhs = m ** r * (m ** k * den) ** q
        rhs = num ** q
    else:
        lhs = m ** r * den ** q
        rhs = (num * m ** (-k)) ** q
    return (lhs > rhs) - (lhs < rhs)


class Surd:
    """The exact real number ``coeff * base ** exponent``.

    ``base`` is an integer >= 2, ``exponent`` a rational, ``coeff`` a rational
    (zero and negative values are allowed; ordering handles signs).
    Surds over different bases compare exactly as well.
    """

    __slots__ = ("base", "exponent", "coeff", "_log")

    def __init__(self, coeff, base: int = 2, exponent=0):
        if base < 2:
            raise ValueError("base must be >= 2")
        self.coeff = as_fraction(coeff)
        self.base = int(base)
        self.exponent = as_fraction(exponent)
        self._log = None

    @classmethod
    def w_power(cls, m: int, p: int, q: int, k: int, coeff=1) -> "Surd":
        """``coeff * (m**(p/q))**k``."""
        return cls(coeff, m, Fraction(p * k, q))

    def __repr__(self) -> str:
        return f"Surd({self.coeff}, {self.base}, {self.exponent})"

    def __str__(self) -> str:
        return self.exact_str()

    def exact_str(self) -> str:
        if self.exponent == 0 or self.coeff == 0:
            return str(self.coeff)
        return f"{self.coeff}*{self.base}^({self.exponent})"

    # -- arithmetic ------------------------------------------------------
    def _same_base(self, other: "Surd") -> None:
        if self.base != other.base:
            raise ValueError("surd arithmetic needs a common base")

    def __mul__(self, other):
        if isinstance(other, Surd):
            self._same_base(other)
            return Surd(self.coeff * other.coeff, self.base, self.exponent + other.exponent)
        return Surd(self.coeff * as_fraction(other), self.base, self.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Surd):
            self._same_base(other)
            return Surd(self.coeff / other.coeff, self.base, self.exponent - other.exponent)
        return Surd(self.coeff / as_fraction(other), self.base, self.exponent)

    def __rtruediv__(self, other):
        return Surd(as_fraction(other) / self.coeff, self.base, -self.exponent)

    def __neg__(self):
        return Surd(-self.coeff, self.base, self.exponent)

    @property
    def is_rational(self) -> bool:
        """True when the value is rational (the exponent part is an integer power)."""
        if self.coeff == 0 or self.exponent.denominator == 1:
            return True
        return is_perfect_power(self.base ** abs(self.exponent.numerator), self.exponent.denominator)

    def to_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self.exact_str()} is irrational")
        if self.coeff == 0:
            return Fraction(0)
        e = self.exponent
        root = iroot(self.base ** abs(e.numerator), e.denominator)
        return self.coeff * (Fraction(root) if e >= 0 else Fraction(1, root))

    # -- ordering --------------------------------------------------------
    def sign(self) -> int:
        n = self.coeff.numerator
        return (n > 0) - (n < 0)

    def _log_abs(self) -> float:
        if self._log is None:
            c = self.coeff
            self._log = (float(self.exponent) * math.log(self.base)
                         + math.log(abs(c.numerator)) - math.log(c.denominator))
        return self._log

    def compare(self, other) -> int:
        """Exact three-way comparison; returns -1, 0 or 1."""
        if not isinstance(other, Surd):
            other = Surd(as_fraction(other), self.base, 0)
        s1, s2 = self.sign(), other.sign()
        if s1 != s2 or s1 == 0:
            return (s1 > s2) - (s1 < s2)
        mag = _compare_abs(self, other)
        return mag if s1 > 0 else -mag

    def __eq__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        return self.compare(other) == 0

    def __lt__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        return self.compare(other) < 0

    def __le__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        return self.compare(other) <= 0

    def __gt__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        return self.compare(other) > 0

    def __ge__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        return self.compare(other) >= 0

    # Equal values admit many (base, exponent, coeff) spellings.
    __hash__ = None

    # -- display ---------------------------------------------------------
    def to_mpf(self, digits: int = DEFAULT_DIGITS):
        with mpmath.workdps(digits + 10):
            e = self.exponent
            return (mpmath.mpf(self.coeff.numerator) / self.coeff.denominator
                    * mpmath.power(self.base, mpmath.mpf(e.numerator) / e.denominator))

    def approx(self, digits: int = DEFAULT_DIGITS) -> str:
        return render(self, digits)

    def __float__(self) -> float:
        return float(self.to_mpf(17))


def _compare_abs(a: Surd, b: Surd) -> int:
    """Compare ``|a|`` with ``|b|`` for nonzero surds."""
    la, lb = a._log_abs(), b._log_abs()
    scale = 1.0 + abs(la) + abs(lb)
    if la - lb > _LOG_MARGIN * scale:
        return 1
    if lb - la > _LOG_MARGIN * scale:
        return -1
    return _exact_compare_abs(a, b)


def _exact_compare_abs(a: Surd, b: Surd) -> int:
    ca, cb = abs(a.coeff), abs(b.coeff)
    if a.base == b.base or b.exponent == 0:
        # base**(ea - eb) vs cb / ca
        return _power_compare(a.base, a.exponent - b.exponent, cb / ca)
    if a.exponent == 0:
        return -_power_compare(b.base, b.exponent, ca / cb)
    # Different bases: raise to the lcm of the exponent denominators.
    ea, eb = a.exponent, b.exponent
    big_q = math.lcm(ea.denominator, eb.denominator)
    na, nb = ea.numerator * (big_q // ea.denominator), eb.numerator * (big_q // eb.denominator)
    lhs_num, lhs_den = ca.numerator ** big_q, ca.denominator ** big_q
    rhs_num, rhs_den = cb.numerator ** big_q, cb.denominator ** big_q
    if na >= 0:
        lhs_num *= a.base ** na
    else:
        lhs_den *= a.base ** (-na)
    if nb >= 0:
        rhs_num *= b.base ** nb
    else:
        rhs_den *= b.base ** (-nb)
    lhs, rhs = lhs_num * rhs_den, rhs_num * lhs_den
    return (lhs > rhs) - (lhs < rhs)


def render(x, digits: int = DEFAULT_DIGITS) -> str:
    """Decimal rendering with ``digits`` significant digits (display only)."""
    if isinstance(x, Surd):
        v = x.to_mpf(digits)
    else:
        f = as_fraction(x)
        with mpmath.workdps(digits + 10):
            v = mpmath.mpf(f.numerator) / f.denominator
    with mpmath.workdps(digits + 10):
        return mpmath.nstr(v, digits, min_fixed=-30, max_fixed=30, strip_zeros=False)


def floor_of(x) -> int:
    """Exact floor of a Fraction or Surd."""
    if not isinstance(x, Surd):
        return math.floor(as_fraction(x))
    k = math.floor(float(x.to_mpf(30)))
    while Surd(k, x.base) > x:
        k -= 1
    while Surd(k + 1, x.base) <= x:
        k += 1
    return k


def compare(a, b) -> int:
    """Three-way exact comparison of Fractions/ints/Surds in any mix."""
    if isinstance(a, Surd):
        return a.compare(b)
    if isinstance(b, Surd):
        return -b.compare(a)
    a, b = as_fraction(a), as_fraction(b)
    return (a > b) - (a < b)
