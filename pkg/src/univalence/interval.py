"""Outward-rounded intervals at an explicit binary precision.

Endpoints are raw mpmath floats and every operation rounds its lower end
toward -inf and its upper end toward +inf (via ``mpmath.libmp.libmpi``).
Precision travels with each value; there is no global context.  The result
of a binary operation uses the larger precision of its operands.

``a < b`` and ``a > b`` are *certain* comparisons: ``a < b`` holds only when
``a.hi < b.lo``.  An unresolved comparison is False both ways.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath.libmp import (
    from_int,
    from_rational,
    libmpi,
    mpf_lt,
    mpf_le,
    round_ceiling,
    round_floor,
    to_rational,
)

DEFAULT_PRECISION = 128

Number = Union[int, Fraction]


class DomainError(ValueError):
    """An interval argument is not (certainly) inside a function's domain."""


def _raw_to_fraction(x) -> Fraction:
    p, q = to_rational(x)
    return Fraction(int(p), int(q))


@dataclass(frozen=True, eq=False)
class Interval:
    _lo: tuple
    _hi: tuple
    prec: int = DEFAULT_PRECISION

    @classmethod
    def point(cls, x: Number, prec: int = DEFAULT_PRECISION) -> Interval:
        x = Fraction(x)
        p, q = x.numerator, x.denominator
        return cls(
            from_rational(p, q, prec, round_floor),
            from_rational(p, q, prec, round_ceiling),
            prec,
        )

    @classmethod
    def hull(cls, lo: Number, hi: Number, prec: int = DEFAULT_PRECISION) -> Interval:
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            raise ValueError("lower end exceeds upper end")
        return cls(
            from_rational(lo.numerator, lo.denominator, prec, round_floor),
            from_rational(hi.numerator, hi.denominator, prec, round_ceiling),
            prec,
        )

    # endpoints as mpmath numbers / exact rationals
    @property
    def lo(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(self._lo)

    @property
    def hi(self) -> mpmath.mpf:
        return mpmath.mp.make_mpf(self._hi)

    @property
    def lo_exact(self) -> Fraction:
        return _raw_to_fraction(self._lo)

    @property
    def hi_exact(self) -> Fraction:
        return _raw_to_fraction(self._hi)

    @property
    def width(self) -> Fraction:
        return self.hi_exact - self.lo_exact

    @property
    def mid(self) -> float:
        return float((self.lo_exact + self.hi_exact) / 2)

    def contains(self, x: Union[Number, float, Interval]) -> bool:
        if isinstance(x, Interval):
            return mpf_le(self._lo, x._lo) and mpf_le(x._hi, self._hi)
        x = Fraction(x)
        return self.lo_exact <= x <= self.hi_exact

    def _coerce(self, other) -> Interval:
        if isinstance(other, Interval):
            return other
        if isinstance(other, (int, Fraction)):
            return Interval.point(other, self.prec)
        return NotImplemented

    def _binary(self, other, op, swap=False):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = max(self.prec, other.prec)
        x, y = (other, self) if swap else (self, other)
        lo, hi = op((x._lo, x._hi), (y._lo, y._hi), prec)
        return Interval(lo, hi, prec)

    def __add__(self, other):
        return self._binary(other, libmpi.mpi_add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, libmpi.mpi_sub)

    def __rsub__(self, other):
        return self._binary(other, libmpi.mpi_sub, swap=True)

    def __mul__(self, other):
        return self._binary(other, libmpi.mpi_mul)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.straddles_zero():
            raise ZeroDivisionError("divisor interval contains zero")
        return self._binary(other, libmpi.mpi_div)

    def __rtruediv__(self, other):
        if self.straddles_zero():
            raise ZeroDivisionError("divisor interval contains zero")
        return self._binary(other, libmpi.mpi_div, swap=True)

    def __neg__(self) -> Interval:
        lo, hi = libmpi.mpi_neg((self._lo, self._hi), self.prec)
        return Interval(lo, hi, self.prec)

    def straddles_zero(self) -> bool:
        zero = from_int(0)
        return mpf_le(self._lo, zero) and mpf_le(zero, self._hi)

    def __lt__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return mpf_lt(self._hi, other._lo)

    def __gt__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return mpf_lt(other._hi, self._lo)

    def with_precision(self, prec: int) -> Interval:
        return Interval(self._lo, self._hi, prec)

    def decimal_pair(self, digits: int | None = None) -> tuple[str, str]:
        """Outward-rounded decimal strings with ``digits`` significant figures."""
        if digits is None:
            digits = max(6, int(self.prec * math.log10(2)))
        return (
            directed_decimal(self.lo_exact, digits, up=False),
            directed_decimal(self.hi_exact, digits, up=True),
        )

    def __repr__(self) -> str:
        lo, hi = self.decimal_pair(17)
        return f"Interval([{lo}, {hi}], prec={self.prec})"


def directed_decimal(x: Fraction, digits: int, up: bool) -> str:
    """Decimal string for ``x`` rounded toward +inf (``up``) or -inf.

    Magnitudes below 1e-5 use exponent notation.
    """
    if x == 0:
        return "0"
    neg = x < 0
    ax = -x if neg else x
    e = len(str(ax.numerator)) - len(str(ax.denominator))
    if Fraction(10) ** e > ax:
        e -= 1
    # ax in [10^e, 10^(e+1)); keep `digits` significant figures
    shift = digits - 1 - e
    scaled = ax * Fraction(10) ** shift
    away = up != neg  # magnitude rounds away from zero when heading outward
    m = -((-scaled.numerator) // scaled.denominator) if away else scaled.numerator // scaled.denominator
    s = str(m)
    if len(s) > digits:  # rounding carried into a new leading digit
        e += 1
        shift -= 1
        s = s[:-1]
    if e < -5:
        mant = (s[0] + "." + s[1:]).rstrip("0").rstrip(".")
        return ("-" if neg else "") + f"{mant}e{e}"
    if shift > 0:
        s = s.rjust(shift + 1, "0")
        s = s[:-shift] + "." + s[-shift:]
        s = s.rstrip("0").rstrip(".")
    else:
        s = s + "0" * (-shift)
    return ("-" if neg else "") + s


def pi(prec: int = DEFAULT_PRECISION) -> Interval:
    lo, hi = libmpi.mpi_pi(prec)
    return Interval(lo, hi, prec)


def exp(x: Interval) -> Interval:
    lo, hi = libmpi.mpi_exp((x._lo, x._hi), x.prec)
    return Interval(lo, hi, x.prec)


def log(x: Interval) -> Interval:
    if not mpf_lt(from_int(0), x._lo):
        raise DomainError("log needs a strictly positive interval")
    lo, hi = libmpi.mpi_log((x._lo, x._hi), x.prec)
    return Interval(lo, hi, x.prec)


def _arctanh_raw(t, prec: int) -> Interval:
    # arctanh t = (1/2) log((1 + t)/(1 - t)) on a point interval
    p = Interval(t, t, prec)
    return log((1 + p) / (1 - p)) * Fraction(1, 2)


def arctanh(x: Interval) -> Interval:
    """Enclosure of arctanh over ``x``; requires ``-1 < x.lo`` and ``x.hi < 1``."""
    if not (mpf_lt(from_int(-1), x._lo) and mpf_lt(x._hi, from_int(1))):
        raise DomainError("arctanh needs an interval inside (-1, 1)")
    if x._lo == x._hi:
        return _arctanh_raw(x._lo, x.prec)
    # increasing function: enclose each end separately
    left = _arctanh_raw(x._lo, x.prec)
    right = _arctanh_raw(x._hi, x.prec)
    return Interval(left._lo, right._hi, x.prec)

