"""Truncated power series with exact rational coefficients.

A :class:`PowerSeries` of order ``N`` stores the coefficients of
``z**0 .. z**N`` and stands for a function modulo ``z**(N+1)``.  Binary
operations truncate to the smaller of the two orders.  Coefficients are
:class:`fractions.Fraction`, which keeps them reduced after every operation.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

Rational = Union[int, Fraction]

__all__ = [
    "PowerSeries",
    "parse_rational",
    "format_rational",
    "arctan_series",
    "exp_series",
    "q_a_series",
    "log_f_a_series",
    "f_a_series",
    "series_multiply",
    "series_log1p_composed",
]


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"`` into a Fraction.

    Decimal notation is rejected so that parameters are never silently
    rounded.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not an exact rational (expected 'p/q'): {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(p, q)


def format_rational(x: Rational) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class PowerSeries:
    coefficients: tuple[Fraction, ...]

    def __init__(self, coefficients: Iterable[Rational]):
        coeffs = tuple(Fraction(c) for c in coefficients)
        if not coeffs:
            raise ValueError("a power series needs at least the constant coefficient")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def zero(cls, order: int) -> PowerSeries:
        return cls([0] * (order + 1))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, k):
        return self.coefficients[k]

    def __iter__(self):
        return iter(self.coefficients)

    def truncate(self, order: int) -> PowerSeries:
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to {order}")
        return PowerSeries(self.coefficients[: order + 1])

    def __add__(self, other: PowerSeries) -> PowerSeries:
        n = min(self.order, other.order)
        return PowerSeries(self[k] + other[k] for k in range(n + 1))

    def __sub__(self, other: PowerSeries) -> PowerSeries:
        n = min(self.order, other.order)
        return PowerSeries(self[k] - other[k] for k in range(n + 1))

    def __neg__(self) -> PowerSeries:
        return PowerSeries(-c for c in self.coefficients)

    def scale(self, s: Rational) -> PowerSeries:
        s = Fraction(s)
        return PowerSeries(s * c for c in self.coefficients)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            return series_multiply(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def to_strings(self) -> list[str]:
        return [format_rational(c) for c in self.coefficients]

    def to_json(self) -> str:
        return json.dumps(self.to_strings())

    @classmethod
    def from_strings(cls, items: Sequence[str]) -> PowerSeries:
        return cls(parse_rational(s) for s in items)

    @classmethod
    def from_json(cls, text: str) -> PowerSeries:
        return cls.from_strings(json.loads(text))


def series_multiply(p: PowerSeries, q: PowerSeries) -> PowerSeries:
    """Cauchy product, truncated to the smaller order."""
    n = min(p.order, q.order)
    return PowerSeries(
        sum((p[i] * q[k - i] for i in range(k + 1)), Fraction(0)) for k in range(n + 1)
    )


def arctan_series(order: int) -> PowerSeries:
    if order < 1:
        raise ValueError("order must be >= 1")
    coeffs = [Fraction(0)] * (order + 1)
    for k in range(1, order + 1, 2):
        coeffs[k] = Fraction(-1 if (k // 2) % 2 else 1, k)
    return PowerSeries(coeffs)


def exp_series(g: PowerSeries) -> PowerSeries:
    """Coefficients of ``exp(g)`` for a series with ``g(0) = 0``.

    Uses the recursion obtained from ``h' = g' h``::

        c_0 = 1,   c_n = (1/n) * sum_{k<n} (n-k) * b_{n-k} * c_k
    """
    if g[0] != 0:
        raise ValueError("exp_series requires a zero constant term")
    n_max = g.order
    weighted = [k * g[k] for k in range(n_max + 1)]
    c = [Fraction(1)]
    for n in range(1, n_max + 1):
        acc = sum((weighted[n - k] * c[k] for k in range(n)), Fraction(0))
        c.append(acc / n)
    return PowerSeries(c)


def series_log1p_composed(p: PowerSeries) -> PowerSeries:
    """Logarithm of a series with ``p(0) = 1``.

    Inverts the exp recursion: ``n g_n = n p_n - sum_{k=1}^{n-1} k g_k p_{n-k}``.
    """
    if p[0] != 1:
        raise ValueError("series_log1p_composed requires p(0) = 1")
    n_max = p.order
    g = [Fraction(0)]
    for n in range(1, n_max + 1):
        acc = n * p[n] - sum((k * g[k] * p[n - k] for k in range(1, n)), Fraction(0))
        g.append(acc / n)
    return PowerSeries(g)


def q_a_series(a: Rational, order: int) -> PowerSeries:
    """Taylor coefficients of ``Q_a(z) = exp(2a arctan z)``."""
    return exp_series(arctan_series(order).scale(2 * Fraction(a)))


def log_f_a_series(a: Rational, order: int) -> PowerSeries:
    """Coefficients of ``log(F_a(z)/z) = sum_{n>=1} (b_n/n) z^n``."""
    b = q_a_series(a, order)
    return PowerSeries([0] + [b[n] / n for n in range(1, order + 1)])


def f_a_series(a: Rational, order: int) -> PowerSeries:
    """Coefficients of ``F_a``, normalized so that ``F_a(0) = 0, F_a'(0) = 1``.

    ``F_a(z) = z exp(log(F_a/z))``; the result has ``order + 1`` entries,
    index ``k`` being the coefficient of ``z**k``.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    inner = exp_series(log_f_a_series(a, order - 1)) if order > 1 else PowerSeries([1])
    return PowerSeries([0, *inner.coefficients])


def convergents(x: Rational | float) -> Iterator[Fraction]:
    """Continued-fraction convergents of ``x`` (exact for the given value)."""
    x = Fraction(x)
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    while True:
        a = math.floor(x)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        yield Fraction(h1, k1)
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac
