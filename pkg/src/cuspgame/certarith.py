"""Exact rational scalars and directed-rounding certified intervals.

Every inequality the strategy has to decide is either between exact
rationals (decided with ``fractions.Fraction``) or involves a real number
of the form ``base**exponent`` / ``exp(sqrt(rho))`` / ``log(h)`` with
rational arguments.  Those are evaluated as intervals with outward
rounding (MPFR via gmpy2), so a decided comparison is a theorem and an
undecided one escalates precision.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Union

import gmpy2
from gmpy2 import mpfr, mpq

Rational = Fraction

DEFAULT_BITS = 128
PRECISION_CAP = 8192


class PrecisionExhausted(Exception):
    """A comparison stayed undecided at the configured precision cap."""


class Cmp(enum.Enum):
    LESS = -1
    UNDECIDED = 0
    GREATER = 1


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q' or integer/decimal strings into an exact rational."""
    return Fraction(text.strip())


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _to_mpq(x: Union[Fraction, int]) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def _down(bits: int) -> gmpy2.context:
    return gmpy2.context(precision=bits, round=gmpy2.RoundDown)


def _up(bits: int) -> gmpy2.context:
    return gmpy2.context(precision=bits, round=gmpy2.RoundUp)


_ZERO = mpfr(0)


@dataclass(frozen=True)
class CertInterval:
    """A closed interval [lo, hi] of dyadic numbers containing an exact real."""

    lo: mpfr
    hi: mpfr
    bits: int

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise ValueError(f"inverted interval [{self.lo}, {self.hi}]")

    # -- constructors ------------------------------------------------

    @staticmethod
    def from_rational(x: Union[Fraction, int], bits: int = DEFAULT_BITS) -> "CertInterval":
        q = _to_mpq(x)
        return CertInterval(_down(bits).add(q, _ZERO), _up(bits).add(q, _ZERO), bits)

    @staticmethod
    def point(x: Union[Fraction, int], bits: int = DEFAULT_BITS) -> "CertInterval":
        return CertInterval.from_rational(x, bits)

    # -- queries -----------------------------------------------------

    def lo_fraction(self) -> Fraction:
        q = mpq(self.lo)
        return Fraction(int(q.numerator), int(q.denominator))

    def hi_fraction(self) -> Fraction:
        q = mpq(self.hi)
        return Fraction(int(q.numerator), int(q.denominator))

    def width(self) -> Fraction:
        return self.hi_fraction() - self.lo_fraction()

    def contains_rational(self, x: Union[Fraction, int]) -> bool:
        q = _to_mpq(x)
        return self.lo <= q <= self.hi

    def contains_interval(self, other: "CertInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    # -- arithmetic (outward rounded) --------------------------------

    def __add__(self, other: "IntervalLike") -> "CertInterval":
        o = as_interval(other, self.bits)
        bits = max(self.bits, o.bits)
        return CertInterval(_down(bits).add(self.lo, o.lo), _up(bits).add(self.hi, o.hi), bits)

    __radd__ = __add__

    def __neg__(self) -> "CertInterval":
        return CertInterval(-self.hi, -self.lo, self.bits)

    def __sub__(self, other: "IntervalLike") -> "CertInterval":
        return self + (-as_interval(other, self.bits))

    def __rsub__(self, other: "IntervalLike") -> "CertInterval":
        return as_interval(other, self.bits) + (-self)

    def __mul__(self, other: "IntervalLike") -> "CertInterval":
        o = as_interval(other, self.bits)
        bits = max(self.bits, o.bits)
        d, u = _down(bits), _up(bits)
        los = [d.mul(a, b) for a in (self.lo, self.hi) for b in (o.lo, o.hi)]
        his = [u.mul(a, b) for a in (self.lo, self.hi) for b in (o.lo, o.hi)]
        return CertInterval(min(los), max(his), bits)

    __rmul__ = __mul__

    def __truediv__(self, other: "IntervalLike") -> "CertInterval":
        o = as_interval(other, self.bits)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor straddles zero")
        bits = max(self.bits, o.bits)
        d, u = _down(bits), _up(bits)
        los = [d.div(a, b) for a in (self.lo, self.hi) for b in (o.lo, o.hi)]
        his = [u.div(a, b) for a in (self.lo, self.hi) for b in (o.lo, o.hi)]
        return CertInterval(min(los), max(his), bits)

    def abs(self) -> "CertInterval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return CertInterval(_ZERO, max(-self.lo, self.hi), self.bits)

    def scale(self, r: Union[Fraction, int]) -> "CertInterval":
        """Multiply by an exact rational.

        The product is formed exactly in mpq and rounded outward in a
        separate step: context.mul with a mixed mpfr/mpq operand pair
        mis-rounds negative results (gmpy2 2.3.x), so it is avoided.
        """
        q = _to_mpq(r)
        d, u = _down(self.bits), _up(self.bits)
        prods = (mpq(self.lo) * q, mpq(self.hi) * q)
        lo, hi = min(prods), max(prods)
        return CertInterval(d.add(lo, _ZERO), u.add(hi, _ZERO), self.bits)

    # -- monotone transcendental maps --------------------------------

    def exp(self) -> "CertInterval":
        return CertInterval(_down(self.bits).exp(self.lo), _up(self.bits).exp(self.hi), self.bits)

    def log(self) -> "CertInterval":
        if self.lo <= 0:
            raise ValueError("log of interval touching zero")
        return CertInterval(_down(self.bits).log(self.lo), _up(self.bits).log(self.hi), self.bits)

    def sqrt(self) -> "CertInterval":
        if self.lo < 0:
            raise ValueError("sqrt of partially negative interval")
        return CertInterval(_down(self.bits).sqrt(self.lo), _up(self.bits).sqrt(self.hi), self.bits)

    # -- serialization -----------------------------------------------

    def to_json(self) -> dict:
        return {
            "lo": format_rational(self.lo_fraction()),
            "hi": format_rational(self.hi_fraction()),
            "bits": self.bits,
        }


IntervalLike = Union[CertInterval, Fraction, int]


def as_interval(x: IntervalLike, bits: int = DEFAULT_BITS) -> CertInterval:
    if isinstance(x, CertInterval):
        return x
    return CertInterval.from_rational(x, bits)


# ---------------------------------------------------------------------------
# Certified elementary functions
# ---------------------------------------------------------------------------


def log_interval(x: Union[Fraction, int], bits: int = DEFAULT_BITS) -> CertInterval:
    """Interval containing log(x) for a positive rational x."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log requires a positive argument")
    return CertInterval.from_rational(x, bits).log()


def pow_real(base: Union[Fraction, int], exponent: Union[Fraction, int],
             bits: int = DEFAULT_BITS) -> CertInterval:
    """Interval containing base**exponent for rational base > 0 and exponent."""
    base = Fraction(base)
    exponent = Fraction(exponent)
    if base <= 0:
        raise ValueError("pow_real requires a positive base")
    if exponent == 0 or base == 1:
        one = mpfr(1)
        return CertInterval(one, one, bits)
    if exponent.denominator == 1:
        # exact rational power
        return CertInterval.from_rational(base ** exponent.numerator, bits)
    t = log_interval(base, bits).scale(exponent)
    return t.exp()


def exp_sqrt(rho: Union[Fraction, int], bits: int = DEFAULT_BITS) -> CertInterval:
    """Interval containing exp(sqrt(rho)) for rational rho >= 0."""
    rho = Fraction(rho)
    if rho < 0:
        raise ValueError("exp_sqrt requires rho >= 0")
    if rho == 0:
        one = mpfr(1)
        return CertInterval(one, one, bits)
    return CertInterval.from_rational(rho, bits).sqrt().exp()


def cert_compare(lhs: IntervalLike, rhs: IntervalLike) -> Cmp:
    a, b = as_interval(lhs), as_interval(rhs)
    if a.hi < b.lo:
        return Cmp.LESS
    if a.lo > b.hi:
        return Cmp.GREATER
    return Cmp.UNDECIDED


def decide(make_lhs: Callable[[int], CertInterval],
           make_rhs: Callable[[int], CertInterval],
           start: int = DEFAULT_BITS, cap: int = PRECISION_CAP) -> Cmp:
    """Compare two interval-valued expressions, doubling precision on ties.

    Raises PrecisionExhausted once the cap is reached; callers that know an
    exact tie-breaking route should catch it.
    """
    bits = start
    while True:
        c = cert_compare(make_lhs(bits), make_rhs(bits))
        if c is not Cmp.UNDECIDED:
            return c
        if bits >= cap:
            raise PrecisionExhausted(
                f"comparison undecided at {bits} bits (cap {cap})")
        bits *= 2


# ---------------------------------------------------------------------------
# Exact comparisons against rational powers
# ---------------------------------------------------------------------------


def compare_to_power(r: Union[Fraction, int], base: Union[Fraction, int],
                     exponent: Union[Fraction, int]) -> int:
    """Exact sign of r - base**exponent (rational r, base > 0, exponent).

    Decided without rounding: for exponent n/d the comparison r vs base^(n/d)
    is equivalent to r^d vs base^n (d > 0, and r > 0 handled separately).
    """
    r = Fraction(r)
    base = Fraction(base)
    exponent = Fraction(exponent)
    if base <= 0:
        raise ValueError("compare_to_power requires a positive base")
    if r <= 0:
        return -1  # base**exponent is always positive
    n, d = exponent.numerator, exponent.denominator
    lhs = r ** d
    rhs = base ** n
    return (lhs > rhs) - (lhs < rhs)


def floor_log(value: Fraction, base: Fraction) -> int:
    """Largest integer k with base**k <= value (base > 1, value > 0)."""
    if base <= 1 or value <= 0:
        raise ValueError("floor_log requires base > 1 and value > 0")
    k = 0
    if value >= 1:
        p = Fraction(1)
        while p * base <= value:
            p *= base
            k += 1
        return k
    p = Fraction(1)
    while p > value:
        p /= base
        k -= 1
    return k


def cert_floor(make: Callable[[int], CertInterval],
               start: int = DEFAULT_BITS, cap: int = PRECISION_CAP) -> int:
    """Certified floor of an interval-valued real, escalating precision.

    Only valid for reals that are provably non-integral (e.g. products of a
    transcendental with an algebraic); a genuinely integral value exhausts
    the precision cap.
    """
    bits = start
    while True:
        iv = make(bits)
        flo = iv.lo_fraction().__floor__()
        fhi = iv.hi_fraction().__floor__()
        if flo == fhi:
            return flo
        # an exact-integer hi with flo == hi - 1 can never separate; only
        # escalation helps, and transcendence guarantees termination
        if bits >= cap:
            raise PrecisionExhausted(f"floor undecided at {bits} bits")
        bits *= 2
