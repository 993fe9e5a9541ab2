"""Certified lower bounds for the univalence thresholds delta_0 and delta_1.

Everything here is evaluated in outward-rounded interval arithmetic.  The
central quantities are

    Phi(c)  = sup_{0<r<1} r + c (1 - r^2) arctanh r,
    H(x, c) = (1 - c)/2 * x + (1 + c)/2 / x,

and a choice ``x1`` with ``x1 arctanh x1 < (1 + c)/(2c)`` gives
``Phi(c) < H(x1, c)``.  A value ``delta = q*pi`` is a certified lower bound
for delta_0 when ``2q * Phi(exp(delta/2)) <= 1`` and for delta_1 when
``2q * Phi(exp(delta)) <= 1``.

Deltas are always passed as the exact rational ``q`` with ``delta = q*pi``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from . import interval as iv
from .interval import DEFAULT_PRECISION, DomainError, Interval
from .ratseries import Rational, convergents, format_rational

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MAX_PRECISION = 1024
BISECTION_CAP = 200


class Mode(str, Enum):
    DELTA0 = "delta0"
    DELTA1 = "delta1"


class IndeterminateError(ArithmeticError):
    """A comparison could not be decided at the highest allowed precision."""


def enclose_elementary(kind: str, x: Optional[Interval] = None, precision: int | None = None) -> Interval:
    """Enclose ``pi``, ``exp(x)``, ``log(x)`` or ``arctanh(x)``."""
    if kind == "pi":
        return iv.pi(precision or (x.prec if x is not None else DEFAULT_PRECISION))
    if x is None:
        raise ValueError(f"{kind} needs an argument")
    if precision is not None:
        x = x.with_precision(precision)
    funcs = {"exp": iv.exp, "log": iv.log, "arctanh": iv.arctanh}
    try:
        return funcs[kind](x)
    except KeyError:
        raise ValueError(f"unknown elementary function {kind!r}") from None


def _check_unit(x: Fraction, name: str = "x") -> Fraction:
    x = Fraction(x)
    if not 0 < x < 1:
        raise DomainError(f"{name} must lie in (0, 1), got {format_rational(x)}")
    return x


def h_function(x: Rational, c: Interval) -> Interval:
    # rewritten so that c occurs once: H = (x + 1/x)/2 + c (1/x - x)/2
    x = _check_unit(x)
    return (x + 1 / x) / 2 + c * ((1 / x - x) / 2)


def lemma_tech_check(c: Interval, x1: Rational) -> Interval:
    """Enclosure of ``(1 + c)/(2c) - x1 arctanh x1``.

    Strict positivity certifies ``Phi(c) < H(x1, c)``.
    """
    x1 = _check_unit(x1, "x1")
    if not c > 1:
        raise DomainError("lemma_tech_check needs c > 1")
    prec = c.prec
    return Fraction(1, 2) + 1 / (2 * c) - x1 * iv.arctanh(Interval.point(x1, prec))


def _g(x: Fraction, c: Interval) -> Interval:
    return x + c * ((1 - x * x) * iv.arctanh(Interval.point(x, c.prec)))


@dataclass(frozen=True)
class PhiEnclosure:
    enclosure: Interval
    x1: Fraction  # certified by lemma_tech_check; upper end comes from H(x1, c)
    x_right: Fraction  # maximizer lies in (x1, x_right)


def bracket_maximizer(c: Interval, max_iter: int = BISECTION_CAP) -> tuple[Fraction, Fraction]:
    """Bisect on the sign of ``g'(x) = 1 + c - 2cx arctanh x`` over (0, 1).

    Returns ``(left, right)`` with the sign certified positive at ``left``
    and negative at ``right``; stops on the iteration cap or when the sign
    at the midpoint can no longer be decided.
    """
    left = Fraction(1, 2)
    if not lemma_tech_check(c, left) > 0:
        raise DomainError("g' is not certainly positive at 1/2; is c > 1?")
    k = 2
    while True:
        right = 1 - Fraction(1, 2**k)
        m = lemma_tech_check(c, right)
        if m < 0:
            break
        if k > c.prec:
            raise IndeterminateError("could not locate a point with g' < 0")
        k += 1
    for _ in range(max_iter):
        mid = (left + right) / 2
        m = lemma_tech_check(c, mid)
        if m > 0:
            left = mid
        elif m < 0:
            right = mid
        else:
            break
    return left, right


def phi_sandwich(c: Interval, tol: float | Fraction = Fraction(0)) -> PhiEnclosure:
    left, right = bracket_maximizer(c)
    lower = max(_g(left, c).lo_exact, _g(right, c).lo_exact)
    upper = h_function(left, c)
    enc = Interval(Interval.point(lower, c.prec)._lo, upper._hi, c.prec)
    if tol and enc.width > Fraction(tol):
        raise IndeterminateError(
            f"Phi enclosure width {float(enc.width):.3g} exceeds tol {float(tol):.3g} "
            f"at {c.prec} bits; increase precision"
        )
    return PhiEnclosure(enc, left, right)


def phi_enclose(c: Interval, tol: float | Fraction) -> Interval:
    """Enclosure of ``Phi(c)`` of width at most ``tol``.

    The lower end is ``g`` at points near the maximizer, the upper end is
    ``H(x1, c)`` at the last point where ``g'`` is certainly positive.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    return phi_sandwich(c, tol).enclosure


def c_for(delta: Rational, mode: Mode | str, prec: int) -> Interval:
    """``exp(delta/2)`` (delta0) or ``exp(delta)`` (delta1) for ``delta = q*pi``."""
    mode = Mode(mode)
    q = Fraction(delta) / (2 if mode is Mode.DELTA0 else 1)
    return iv.exp(q * iv.pi(prec))


@dataclass(frozen=True)
class BoundReport:
    mode: Mode
    delta: Fraction  # q with delta = q*pi
    x1: Fraction
    lemma_margin: Interval
    threshold_value: Interval
    certified: bool
    status: str  # "certified", "failed" or "indeterminate"
    precision_bits: int

    @property
    def delta_value(self) -> Interval:
        return Interval.point(self.delta, self.precision_bits) * iv.pi(self.precision_bits)

    def to_dict(self, digits: int = 12) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "mode": self.mode.value,
            "delta": f"{format_rational(self.delta)} pi",
            "delta_value": list(self.delta_value.decimal_pair(digits)),
            "x1": format_rational(self.x1),
            "lemma_margin": list(self.lemma_margin.decimal_pair(digits)),
            "threshold": list(self.threshold_value.decimal_pair(digits)),
            "certified": self.certified,
            "status": self.status,
            "precision_bits": self.precision_bits,
        }


def _evaluate_bound(q: Fraction, mode: Mode, x1: Fraction, prec: int) -> BoundReport:
    c = c_for(q, mode, prec)
    margin = lemma_tech_check(c, x1)
    threshold = 2 * q * h_function(x1, c)
    certified = margin > 0 and threshold < 1
    if certified:
        status = "certified"
    elif margin.hi_exact <= 0 or threshold.lo_exact >= 1:
        status = "failed"
    else:
        status = "indeterminate"
    return BoundReport(mode, q, x1, margin, threshold, certified, status, prec)


def _auto_bound(q: Fraction, mode: Mode, prec: int) -> BoundReport:
    # the bisection point certifies whenever anything near the maximizer
    # does; prefer the simplest convergent below it that also certifies
    left = bracket_maximizer(c_for(q, mode, prec))[0]
    for x1 in convergents(left):
        if 0 < x1 < left:
            report = _evaluate_bound(q, mode, x1, prec)
            if report.certified:
                return report
    return _evaluate_bound(q, mode, left, prec)


def check_lower_bound(
    delta: Rational,
    mode: Mode | str,
    x1: Optional[Rational] = None,
    precision: int = DEFAULT_PRECISION,
    max_precision: Optional[int] = None,
) -> BoundReport:
    """Check the univalence-threshold condition at ``delta = q*pi``.

    ``certified`` means both ``x1 arctanh x1 < (1+c)/(2c)`` and
    ``2q H(x1, c) < 1`` hold as strict interval predicates, which proves
    ``delta <= delta_0`` (resp. ``delta_1``).  Indeterminate comparisons are
    retried at twice the precision up to ``max_precision`` (default: no
    escalation).  When ``x1`` is omitted it is the simplest continued-fraction
    convergent below the bisection point for the maximizer of ``g`` that
    certifies, or that point itself.
    """
    mode = Mode(mode)
    q = Fraction(delta)
    if q <= 0:
        raise DomainError("delta must be positive")
    x1 = None if x1 is None else _check_unit(x1, "x1")
    max_precision = max_precision or precision
    prec = precision
    while True:
        report = _auto_bound(q, mode, prec) if x1 is None else _evaluate_bound(q, mode, x1, prec)
        if report.status != "indeterminate" or prec * 2 > max_precision:
            return report
        log.info("indeterminate at %d bits, retrying at %d", prec, prec * 2)
        prec *= 2


def threshold_map(q: Fraction, mode: Mode, prec: int) -> Interval:
    """Enclosure of ``(2 delta/pi) Phi(c)`` at ``delta = q*pi``."""
    c = c_for(q, mode, prec)
    return 2 * q * phi_sandwich(c).enclosure


# delta/pi ranges known from the certified lower bounds and the order-18
# certificate upper bound
DEFAULT_BRACKETS = {
    Mode.DELTA0: (Fraction(1, 3), Fraction(5, 7)),
    Mode.DELTA1: (Fraction(7, 25), Fraction(5, 7)),
}


def _side(q: Fraction, mode: Mode, prec: int, max_precision: int) -> int:
    p = prec
    while p <= max_precision:
        v = threshold_map(q, mode, p)
        if v < 1:
            return -1
        if v > 1:
            return 1
        p *= 2
    raise IndeterminateError(f"cannot compare the threshold map with 1 at q={q} up to {max_precision} bits")


def solve_threshold(
    mode: Mode | str,
    tol: float | Fraction,
    precision: int = DEFAULT_PRECISION,
    max_precision: int = MAX_PRECISION,
    bracket: Optional[tuple[Rational, Rational]] = None,
) -> Interval:
    """Bracket the root of ``(2 delta/pi) Phi(exp(delta/2 or delta)) = 1``.

    The map is increasing in delta, so bisection on ``q = delta/pi`` with
    strictly decided comparisons keeps the root inside.  The returned
    interval is in units of delta (not q) and has width ``<= tol`` unless
    the iteration cap is hit, in which case the best bracket is returned.

    ``bracket`` is the starting interval in q; by default it is the range
    proved by the certified bounds, so every bracket lies inside it.
    """
    mode = Mode(mode)
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if bracket is None:
        bracket = DEFAULT_BRACKETS[mode]
    lo, hi = Fraction(bracket[0]), Fraction(bracket[1])
    if _side(lo, mode, precision, max_precision) != -1 or _side(hi, mode, precision, max_precision) != 1:
        raise ValueError("initial bracket does not straddle the threshold")
    pi_hi = iv.pi(precision).hi_exact
    for _ in range(BISECTION_CAP):
        if (hi - lo) * pi_hi <= tol:
            break
        mid = (lo + hi) / 2
        if _side(mid, mode, precision, max_precision) < 0:
            lo = mid
        else:
            hi = mid
    else:
        log.warning("bisection cap reached; returning best bracket")
    p = iv.pi(precision)
    return Interval((lo * p)._lo, (hi * p)._hi, precision)


def preschwarzian_bound(L: Interval, l: Interval) -> Interval:
    """Enclosure of ``(2/pi) (1 + L) log(L/l)``."""
    if not l > 0:
        raise DomainError("l must be positive")
    if l > 1 or L < 1:
        raise DomainError("need l <= 1 <= L")
    prec = max(L.prec, l.prec)
    return 2 / iv.pi(prec) * (1 + L) * iv.log(L / l)


def annulus_bounds(a: Rational, precision: int = DEFAULT_PRECISION) -> tuple[Interval, Interval]:
    """``(l, L) = (exp(-pi a/2), exp(pi a/2))`` for ``F_a``."""
    if isinstance(a, float):
        raise TypeError("a must be an exact rational, not a float")
    a = Fraction(a)
    if a <= 0:
        raise DomainError("a must be positive")
    half = a / 2 * iv.pi(precision)
    return iv.exp(-half), iv.exp(half)
