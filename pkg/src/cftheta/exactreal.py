"""Number carriers and the precision contract.

Two carriers cover every seed this package accepts:

* `QuadraticSurd` -- exact values (P + sqrt(D))/Q for real quadratic
  irrationals.  All field arithmetic, signs, and floors are computed with
  integers only, so expansions of quadratic seeds are exact to any depth.
* `RigorousReal` -- an interval with dyadic endpoints, rounded outward on
  every operation.  This is the honest carrier for seeds given as decimal
  literals.

`floor_checked` is the single gate through which continued-fraction digits
are extracted: it either returns the floor exactly or raises
`InsufficientPrecision`, never silently misrounds.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from .errors import DomainError, InsufficientPrecision

# The exact rational carrier: unbounded integers, gcd(num, den) = 1, den > 0.
# fractions.Fraction satisfies the contract verbatim, so it is used as-is.
BigRational = Fraction

ExactNumber = Union[int, Fraction, "QuadraticSurd"]
Number = Union[ExactNumber, "RigorousReal"]


# ---------------------------------------------------------------------------
# integer factorization (used only to canonicalize constructor input)
# ---------------------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    # deterministic for n < 3.3e24; random extra bases beyond that
    bases = list(_SMALL_PRIMES)
    if n >= 3_317_044_064_679_887_385_961_981:
        rng = random.Random(0xC0FFEE ^ n)
        bases += [rng.randrange(2, n - 1) for _ in range(20)]
    for a in bases:
        a %= n
        if a in (0, 1, n - 1):
            continue
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        c = rng.randrange(1, n)
        x = y = rng.randrange(2, n)
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d


def _factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 (trial division + Pollard rho)."""
    factors: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return factors


def squarefree_split(n: int) -> tuple[int, int]:
    """Write n >= 1 as s*s*d0 with d0 squarefree; returns (s, d0)."""
    if n < 1:
        raise ValueError("squarefree_split requires n >= 1")
    s, d0 = 1, 1
    for p, e in _factorize(n).items():
        s *= p ** (e // 2)
        if e % 2:
            d0 *= p
    return s, d0


def frac_sqrt(fr: Fraction) -> Optional[Fraction]:
    """Exact rational square root of fr, or None if fr is not a square."""
    if fr < 0:
        return None
    rn = math.isqrt(fr.numerator)
    rd = math.isqrt(fr.denominator)
    if rn * rn == fr.numerator and rd * rd == fr.denominator:
        return Fraction(rn, rd)
    return None


# ---------------------------------------------------------------------------
# dyadic rationals with directed rounding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Dyadic:
    """Exact dyadic rational man * 2**exp, mantissa kept odd (or zero)."""

    man: int
    exp: int

    @staticmethod
    def make(man: int, exp: int) -> "Dyadic":
        if man == 0:
            return Dyadic(0, 0)
        shift = (man & -man).bit_length() - 1
        return Dyadic(man >> shift, exp + shift)

    @staticmethod
    def from_int(n: int) -> "Dyadic":
        return Dyadic.make(n, 0)

    def as_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.man << self.exp)
        return Fraction(self.man, 1 << -self.exp)

    def __add__(self, other: "Dyadic") -> "Dyadic":
        e = min(self.exp, other.exp)
        return Dyadic.make(
            (self.man << (self.exp - e)) + (other.man << (other.exp - e)), e
        )

    def __sub__(self, other: "Dyadic") -> "Dyadic":
        return self + (-other)

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.man, self.exp if self.man else 0)

    def __abs__(self) -> "Dyadic":
        return Dyadic(abs(self.man), self.exp)

    def __mul__(self, other: "Dyadic") -> "Dyadic":
        return Dyadic.make(self.man * other.man, self.exp + other.exp)

    def _cmp(self, other: "Dyadic") -> int:
        e = min(self.exp, other.exp)
        d = (self.man << (self.exp - e)) - (other.man << (other.exp - e))
        return (d > 0) - (d < 0)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def floor(self) -> int:
        if self.exp >= 0:
            return self.man << self.exp
        return self.man >> -self.exp

    def sign(self) -> int:
        return (self.man > 0) - (self.man < 0)

    def __float__(self) -> float:
        try:
            return math.ldexp(self.man, self.exp)
        except OverflowError:
            f = self.as_fraction()
            return f.numerator / f.denominator

    def __str__(self) -> str:
        return f"{float(self):.17g}"


def _round_dyadic(d: Dyadic, prec: int, up: bool) -> Dyadic:
    """Trim mantissa to prec bits, rounding toward +inf (up) or -inf."""
    bits = abs(d.man).bit_length()
    if bits <= prec:
        return d
    shift = bits - prec
    if up:
        man = -((-d.man) >> shift)
    else:
        man = d.man >> shift
    return Dyadic.make(man, d.exp + shift)


def _div_dyadic(a: Dyadic, b: Dyadic, prec: int, up: bool) -> Dyadic:
    if b.man == 0:
        raise ZeroDivisionError("dyadic division by zero")
    num, den = a.man, b.man
    if den < 0:
        num, den = -num, -den
    shift = prec + den.bit_length() + 2
    scaled = num << shift
    if up:
        q = -((-scaled) // den)
    else:
        q = scaled // den
    return _round_dyadic(Dyadic.make(q, a.exp - b.exp - shift), prec, up)


def _sqrt_dyadic(a: Dyadic, prec: int, up: bool) -> Dyadic:
    if a.man < 0:
        raise DomainError("dyadic sqrt of a negative value")
    if a.man == 0:
        return Dyadic(0, 0)
    t = max(0, 2 * prec + 2 - a.man.bit_length())
    if (a.exp - t) & 1:
        t += 1
    scaled = a.man << t
    r = math.isqrt(scaled)
    if up and r * r != scaled:
        r += 1
    return _round_dyadic(Dyadic.make(r, (a.exp - t) // 2), prec, up)


def _fraction_to_dyadic(fr: Fraction, prec: int, up: bool) -> Dyadic:
    if fr == 0:
        return Dyadic(0, 0)
    num, den = fr.numerator, fr.denominator
    mag = num.bit_length() - den.bit_length()
    shift = max(prec - mag + 2, 0) + den.bit_length() + 2
    scaled = num << shift
    if up:
        q = -((-scaled) // den)
    else:
        q = scaled // den
    return _round_dyadic(Dyadic.make(q, -shift), prec, up)


# ---------------------------------------------------------------------------
# precision escalation policy
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrecisionContext:
    """Geometric precision escalation schedule, in bits."""

    initial_bits: int = 128
    max_bits: int = 1 << 20
    growth_factor: int = 2

    def __post_init__(self):
        if self.initial_bits < 1 or self.max_bits < self.initial_bits:
            raise ValueError("require 1 <= initial_bits <= max_bits")
        if self.growth_factor < 2:
            raise ValueError("growth_factor must be >= 2")

    def precisions(self) -> Iterator[int]:
        p = self.initial_bits
        yield p
        while p < self.max_bits:
            p = min(p * self.growth_factor, self.max_bits)
            yield p


DEFAULT_CONTEXT = PrecisionContext()


# ---------------------------------------------------------------------------
# rigorous interval reals
# ---------------------------------------------------------------------------


class RigorousReal:
    """Enclosure [lower, upper] of a real number, dyadic endpoints.

    Invariant: the represented value always lies inside the enclosure; every
    operation rounds the lower endpoint toward -inf and the upper endpoint
    toward +inf at `precision` bits.
    """

    __slots__ = ("lower", "upper", "precision")

    def __init__(self, lower: Dyadic, upper: Dyadic, precision: int):
        if lower._cmp(upper) > 0:
            raise ValueError("lower endpoint exceeds upper endpoint")
        self.lower = lower
        self.upper = upper
        self.precision = precision

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_int(cls, n: int, precision: int = 64) -> "RigorousReal":
        d = Dyadic.from_int(n)
        return cls(d, d, precision)

    @classmethod
    def from_fraction(cls, fr: Fraction, precision: int) -> "RigorousReal":
        return cls(
            _fraction_to_dyadic(fr, precision, up=False),
            _fraction_to_dyadic(fr, precision, up=True),
            precision,
        )

    @classmethod
    def from_fraction_bounds(
        cls, lo: Fraction, hi: Fraction, precision: int
    ) -> "RigorousReal":
        return cls(
            _fraction_to_dyadic(lo, precision, up=False),
            _fraction_to_dyadic(hi, precision, up=True),
            precision,
        )

    @classmethod
    def from_decimal(cls, text: str, precision: int | None = None) -> "RigorousReal":
        """Enclosure for a decimal literal with honest uncertainty.

        The literal is read as an exact rational v with d digits after the
        point; the result encloses [v - 10**-d, v + 10**-d], covering both
        truncated and rounded sources.  The dyadic rounding is done at
        enough bits to preserve the literal, independent of the working
        precision later used on it.
        """
        text = text.strip()
        sign = 1
        if text.startswith(("+", "-")):
            sign = -1 if text[0] == "-" else 1
            text = text[1:]
        if "." in text:
            whole, _, frac = text.partition(".")
        else:
            whole, frac = text, ""
        if not (whole + frac).isdigit() or not (whole or frac):
            raise ValueError(f"not a decimal literal: {text!r}")
        digits = len(frac)
        v = sign * Fraction(int((whole or "0") + frac), 10**digits)
        u = Fraction(1, 10**digits) if digits else Fraction(0)
        bits = max(precision or 0, int(digits * 3.33) + 32)
        return cls.from_fraction_bounds(v - u, v + u, bits)

    # -- inspection --------------------------------------------------------

    def width(self) -> Fraction:
        return (self.upper - self.lower).as_fraction()

    def midpoint(self) -> Fraction:
        return (self.lower.as_fraction() + self.upper.as_fraction()) / 2

    def contains(self, x: Union[int, Fraction]) -> bool:
        x = Fraction(x)
        return self.lower.as_fraction() <= x <= self.upper.as_fraction()

    def encloses(self, other: "RigorousReal") -> bool:
        return (
            self.lower.as_fraction() <= other.lower.as_fraction()
            and other.upper.as_fraction() <= self.upper.as_fraction()
        )

    def intersect(self, other: "RigorousReal") -> Optional["RigorousReal"]:
        lo = self.lower if self.lower._cmp(other.lower) >= 0 else other.lower
        hi = self.upper if self.upper._cmp(other.upper) <= 0 else other.upper
        if lo._cmp(hi) > 0:
            return None
        return RigorousReal(lo, hi, max(self.precision, other.precision))

    def is_positive(self) -> bool:
        """True only when the whole enclosure is > 0."""
        return self.lower.sign() > 0

    def is_negative(self) -> bool:
        return self.upper.sign() < 0

    def floor_bounds(self) -> tuple[int, int]:
        return self.lower.floor(), self.upper.floor()

    # -- arithmetic --------------------------------------------------------

    def _lift(self, other) -> "RigorousReal":
        if isinstance(other, RigorousReal):
            return other
        if isinstance(other, int):
            return RigorousReal.from_int(other, self.precision)
        if isinstance(other, Fraction):
            return RigorousReal.from_fraction(other, self.precision)
        if isinstance(other, QuadraticSurd):
            return other.to_interval(self.precision)
        return NotImplemented

    def _out(self, lo: Dyadic, hi: Dyadic, prec: int) -> "RigorousReal":
        return RigorousReal(
            _round_dyadic(lo, prec, up=False), _round_dyadic(hi, prec, up=True), prec
        )

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        p = max(self.precision, o.precision)
        return self._out(self.lower + o.lower, self.upper + o.upper, p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        p = max(self.precision, o.precision)
        return self._out(self.lower - o.upper, self.upper - o.lower, p)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__sub__(self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        p = max(self.precision, o.precision)
        prods = [
            self.lower * o.lower,
            self.lower * o.upper,
            self.upper * o.lower,
            self.upper * o.upper,
        ]
        return self._out(min(prods), max(prods), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        if o.lower.sign() <= 0 <= o.upper.sign():
            raise DomainError("division by an enclosure containing zero")
        p = max(self.precision, o.precision)
        los = [
            _div_dyadic(a, b, p, up=False)
            for a in (self.lower, self.upper)
            for b in (o.lower, o.upper)
        ]
        his = [
            _div_dyadic(a, b, p, up=True)
            for a in (self.lower, self.upper)
            for b in (o.lower, o.upper)
        ]
        return RigorousReal(min(los), max(his), p)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__truediv__(self)

    def __neg__(self):
        return RigorousReal(-self.upper, -self.lower, self.precision)

    def __abs__(self):
        if self.lower.sign() >= 0:
            return self
        if self.upper.sign() <= 0:
            return -self
        hi = max(-self.lower, self.upper)
        return RigorousReal(Dyadic(0, 0), hi, self.precision)

    def sqrt(self) -> "RigorousReal":
        if self.lower.sign() < 0:
            raise DomainError("sqrt of a possibly-negative enclosure")
        p = self.precision
        return RigorousReal(
            _sqrt_dyadic(self.lower, p, up=False),
            _sqrt_dyadic(self.upper, p, up=True),
            p,
        )

    def __repr__(self):
        return (
            f"RigorousReal([{float(self.lower):.17g}, {float(self.upper):.17g}], "
            f"precision={self.precision})"
        )


# ---------------------------------------------------------------------------
# exact quadratic surds
# ---------------------------------------------------------------------------


class QuadraticSurd:
    """Exact real quadratic irrational (P + sqrt(D))/Q.

    Internally the value is kept as (a + b*sqrt(d0))/c with d0 squarefree,
    gcd(a, b, c) = 1, c > 0 and b != 0, which is a unique representation.
    The public fields (P, D, Q) are derived from it: the smallest scaling
    k with Q | D - P*P gives P = a*k, Q = c*k, D = b*b*k*k*d0 (k carries
    the sign of b so that sqrt(D) enters positively).  Construction from
    any (P, D, Q) triple therefore canonicalizes: equal values yield equal
    fields.

    Arithmetic mixes freely with int and Fraction and with surds over the
    same squarefree core; results that happen to be rational are returned
    as Fraction.  Mixing different quadratic fields raises ValueError
    (callers fall back to RigorousReal for those).
    """

    __slots__ = ("_a", "_b", "_c", "_d0", "_pdq")

    def __init__(self, p: int, d: int, q: int):
        if q == 0:
            raise ValueError("Q must be nonzero")
        if d <= 0:
            raise ValueError("D must be positive")
        r = math.isqrt(d)
        if r * r == d:
            raise ValueError(f"D={d} is a perfect square: value is rational")
        s, d0 = squarefree_split(d)
        a, b, c = self._normalize(p, s, q)
        self._a, self._b, self._c, self._d0 = a, b, c, d0
        self._pdq = None

    @staticmethod
    def _normalize(a: int, b: int, c: int) -> tuple[int, int, int]:
        if c < 0:
            a, b, c = -a, -b, -c
        g = math.gcd(math.gcd(abs(a), abs(b)), c)
        return a // g, b // g, c // g

    @classmethod
    def _raw(cls, a: int, b: int, c: int, d0: int) -> "QuadraticSurd":
        self = object.__new__(cls)
        a, b, c = cls._normalize(a, b, c)
        self._a, self._b, self._c, self._d0 = a, b, c, d0
        self._pdq = None
        return self

    @classmethod
    def _make(cls, a: int, b: int, c: int, d0: int) -> ExactNumber:
        if b == 0:
            return Fraction(a, c)
        return cls._raw(a, b, c, d0)

    @classmethod
    def from_parts(cls, ra, rb, d0: int) -> ExactNumber:
        """Value ra + rb*sqrt(d0); d0 must already be squarefree >= 2."""
        ra, rb = Fraction(ra), Fraction(rb)
        c = math.lcm(ra.denominator, rb.denominator)
        return cls._make(int(ra * c), int(rb * c), c, d0)

    # -- spec-field view ---------------------------------------------------

    def _fields(self) -> tuple[int, int, int]:
        if self._pdq is None:
            a, b, c, d0 = self._a, self._b, self._c, self._d0
            k = c // math.gcd(c, abs(b * b * d0 - a * a))
            if b < 0:
                k = -k
            self._pdq = (a * k, b * b * k * k * d0, c * k)
        return self._pdq

    @property
    def P(self) -> int:
        return self._fields()[0]

    @property
    def D(self) -> int:
        return self._fields()[1]

    @property
    def Q(self) -> int:
        return self._fields()[2]

    @property
    def core(self) -> int:
        """The squarefree part of D (the quadratic field identifier)."""
        return self._d0

    def coefficients(self) -> tuple[Fraction, Fraction]:
        """(ra, rb) with value = ra + rb*sqrt(core)."""
        return Fraction(self._a, self._c), Fraction(self._b, self._c)

    # -- sign, comparisons, floor -----------------------------------------

    def sign(self) -> int:
        a, b, d0 = self._a, self._b, self._d0
        if a == 0:
            return 1 if b > 0 else -1
        if b == 0:
            return 1 if a > 0 else -1
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare a*a against b*b*d0 (never equal: d0 is
        # squarefree >= 2, so b*b*d0 is not a perfect square)
        if a > 0:
            return 1 if a * a > b * b * d0 else -1
        return -1 if a * a > b * b * d0 else 1

    def __floor__(self) -> int:
        a, b, c, d0 = self._a, self._b, self._c, self._d0
        e = math.isqrt(b * b * d0)
        # b*b*d0 is irrational's square scale, never a perfect square here,
        # so sqrt(b*b*d0) lies strictly between e and e+1
        if b > 0:
            return (a + e) // c
        return (a - e - 1) // c

    def _diff_sign(self, other) -> int:
        d = self - other
        if isinstance(d, Fraction):
            return (d > 0) - (d < 0)
        return d.sign()

    def __lt__(self, other):
        return self._diff_sign(other) < 0

    def __le__(self, other):
        return self._diff_sign(other) <= 0

    def __gt__(self, other):
        return self._diff_sign(other) > 0

    def __ge__(self, other):
        return self._diff_sign(other) >= 0

    def __eq__(self, other):
        if isinstance(other, QuadraticSurd):
            return (self._a, self._b, self._c, self._d0) == (
                other._a,
                other._b,
                other._c,
                other._d0,
            )
        if isinstance(other, (int, Fraction)):
            return False  # a surd is never rational
        return NotImplemented

    def __hash__(self):
        return hash((self._a, self._b, self._c, self._d0))

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> Optional[tuple[int, int, int]]:
        """Other as an (a, b, c) triple over this surd's field, or None."""
        if isinstance(other, QuadraticSurd):
            if other._d0 != self._d0:
                raise ValueError(
                    f"cannot mix quadratic fields sqrt({self._d0}) and sqrt({other._d0}) exactly"
                )
            return other._a, other._b, other._c
        if isinstance(other, int):
            return other, 0, 1
        if isinstance(other, Fraction):
            return other.numerator, 0, other.denominator
        return None

    def __add__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        a2, b2, c2 = t
        a1, b1, c1 = self._a, self._b, self._c
        return self._make(a1 * c2 + a2 * c1, b1 * c2 + b2 * c1, c1 * c2, self._d0)

    __radd__ = __add__

    def __sub__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        a2, b2, c2 = t
        a1, b1, c1 = self._a, self._b, self._c
        return self._make(a1 * c2 - a2 * c1, b1 * c2 - b2 * c1, c1 * c2, self._d0)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        t = self._coerce(other)
        if t is None:
            return NotImplemented
        a2, b2, c2 = t
        a1, b1, c1, d0 = self._a, self._b, self._c, self._d0
        return self._make(
            a1 * a2 + b1 * b2 * d0, a1 * b2 + a2 * b1, c1 * c2, d0
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "QuadraticSurd":
        a, b, c, d0 = self._a, self._b, self._c, self._d0
        norm = a * a - b * b * d0  # nonzero: the value is irrational
        out = self._make(a * c, -b * c, norm, d0)
        assert isinstance(out, QuadraticSurd)
        return out

    def __truediv__(self, other):
        if isinstance(other, QuadraticSurd):
            return self * other.reciprocal()
        if isinstance(other, (int, Fraction)):
            fr = Fraction(other)
            if fr == 0:
                raise ZeroDivisionError
            return self._make(
                self._a * fr.denominator,
                self._b * fr.denominator,
                self._c * fr.numerator,
                self._d0,
            )
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.reciprocal() * other
        return NotImplemented

    def __neg__(self):
        return self._raw(-self._a, -self._b, self._c, self._d0)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def conjugate(self) -> "QuadraticSurd":
        out = self._make(self._a, -self._b, self._c, self._d0)
        assert isinstance(out, QuadraticSurd)
        return out

    # -- conversions -------------------------------------------------------

    def to_interval(self, precision: int) -> RigorousReal:
        """Outward-rounded enclosure at the given bit precision."""
        t = precision + 8
        root_lo = Fraction(math.isqrt(self._d0 << (2 * t)), 1 << t)
        root_hi = root_lo + Fraction(1, 1 << t)
        ra, rb = self.coefficients()
        if rb >= 0:
            lo, hi = ra + rb * root_lo, ra + rb * root_hi
        else:
            lo, hi = ra + rb * root_hi, ra + rb * root_lo
        return RigorousReal.from_fraction_bounds(lo, hi, precision)

    def __float__(self) -> float:
        # via an enclosure midpoint: the naive ra + rb*sqrt(d0) cancels
        # catastrophically when ra and rb are huge and nearly opposite
        return float(self.to_interval(80).midpoint())

    def __repr__(self):
        p, d, q = self._fields()
        return f"QuadraticSurd(P={p}, D={d}, Q={q})"

    def __str__(self):
        p, d, q = self._fields()
        return f"({p}+√{d})/{q} ≈ {float(self):.6f}"


# ---------------------------------------------------------------------------
# operations shared by both carriers
# ---------------------------------------------------------------------------


def exact_floor(x: ExactNumber) -> int:
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator // x.denominator
    return math.floor(x)


def floor_checked(x: Number) -> int:
    """Floor of x, exactly or not at all.

    Exact carriers always succeed.  A RigorousReal succeeds only when both
    endpoints share the same floor; otherwise the enclosure straddles an
    integer and InsufficientPrecision asks the caller to escalate.
    """
    if isinstance(x, (int, Fraction, QuadraticSurd)):
        return exact_floor(x)
    lo, hi = x.floor_bounds()
    if lo == hi:
        return lo
    raise InsufficientPrecision(
        f"enclosure straddles an integer: floor bounds are {lo} and {hi}",
    )


def surd_recip_shift(x: QuadraticSurd, a: int) -> QuadraticSurd:
    """Exact 1/x - a; the one-step engine behind digit extraction."""
    out = x.reciprocal() - a
    assert isinstance(out, QuadraticSurd)
    return out


def exact_sqrt(
    x: ExactNumber, max_new_field_bits: int = 64
) -> Optional[ExactNumber]:
    """Exact square root of x >= 0 when one exists in a quadratic field.

    Fractions yield either a rational root or a surd sqrt(m)*w/den; the
    latter requires factoring num*den, attempted only below
    `max_new_field_bits` bits.  Surd input yields a root only when x is a
    perfect square inside its own field.  Returns None when no cheap exact
    form exists (callers fall back to interval arithmetic).
    """
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        if x < 0:
            return None
        if x == 0:
            return Fraction(0)
        r = frac_sqrt(x)
        if r is not None:
            return r
        m = x.numerator * x.denominator
        if m.bit_length() > max_new_field_bits:
            return None
        w, d0 = squarefree_split(m)
        return QuadraticSurd.from_parts(
            Fraction(0), Fraction(w, x.denominator), d0
        )
    if isinstance(x, QuadraticSurd):
        if x.sign() < 0:
            return None
        ra, rb = x.coefficients()
        d0 = x.core
        delta = frac_sqrt(ra * ra - rb * rb * d0)
        if delta is None:
            return None
        for alpha_sq in ((ra + delta) / 2, (ra - delta) / 2):
            alpha = frac_sqrt(alpha_sq)
            if alpha is None or alpha == 0:
                continue
            beta = rb / (2 * alpha)
            root = QuadraticSurd.from_parts(alpha, beta, d0)
            assert isinstance(root, QuadraticSurd)
            cand = abs(root)
            if cand * cand == x:
                return cand
        return None
    raise TypeError(f"exact_sqrt expects an exact number, got {type(x)!r}")


def as_interval(x: Number, precision: int) -> RigorousReal:
    """Convert any carrier to a RigorousReal at the given precision."""
    if isinstance(x, RigorousReal):
        return x
    if isinstance(x, int):
        return RigorousReal.from_int(x, precision)
    if isinstance(x, Fraction):
        return RigorousReal.from_fraction(x, precision)
    if isinstance(x, QuadraticSurd):
        return x.to_interval(precision)
    raise TypeError(f"not a number carrier: {type(x)!r}")


def is_exact(x: Number) -> bool:
    return isinstance(x, (int, Fraction, QuadraticSurd))


def certainly_lt(a: Number, b: Number, precision: int = 128) -> bool:
    """True only when a < b is provable.

    Exact same-field comparisons decide outright; anything else is settled
    through enclosures, where False means "not provable at this precision",
    not "false".
    """
    if is_exact(a) and is_exact(b):
        try:
            return a < b
        except ValueError:
            pass  # different quadratic fields: compare via enclosures
    ia, ib = as_interval(a, precision), as_interval(b, precision)
    return ia.upper._cmp(ib.lower) < 0


def certainly_gt(a: Number, b: Number, precision: int = 128) -> bool:
    return certainly_lt(b, a, precision)
