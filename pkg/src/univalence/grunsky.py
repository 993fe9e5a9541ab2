"""Grunsky coefficients, Grunsky matrices and an exact PSD test.

For ``f(z) = z + a_2 z^2 + ...`` the Grunsky coefficients are defined by

    log((f(z) - f(w)) / (z - w)) = - sum_{j,k>=0} c_{j,k} z^j w^k.

They are generated column by column from the coefficient recursion

    c_{j,k} = sum_{l=1}^{k-1} (l/k) a_{k-l} c_{j+1,l}
              - sum_{m=1}^{j} a_{m+1} c_{j-m,k} - a_{j+k+1}/k     (k >= 1),

and the order-n Grunsky matrix has entries

    gamma_{j,k} = delta_{j,k}/j - sum_{m=1}^{n} m c_{m,j} c_{m,k}.

Only real coefficients are supported, so the Hermitian form reduces to a
real symmetric one.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .ratseries import (
    PowerSeries,
    Rational,
    f_a_series,
    format_rational,
    parse_rational,
    series_log1p_composed,
)

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class GrunskyTable:
    """Triangular table of ``c_{j,k}`` for ``j + k <= depth``.

    ``rows[j][k]`` holds ``c_{j,k}``.  Column ``k = 0`` comes from the
    logarithmic coefficients ``-log(f(z)/z)``; the other columns come from
    the recursion.
    """

    rows: tuple[tuple[Fraction, ...], ...]
    depth: int
    source_coefficients: PowerSeries

    def __getitem__(self, jk: tuple[int, int]) -> Fraction:
        j, k = jk
        if j < 0 or k < 0 or j + k > self.depth:
            raise IndexError(f"c[{j},{k}] is outside a table of depth {self.depth}")
        return self.rows[j][k]

    def pairs(self):
        for j, row in enumerate(self.rows):
            for k, value in enumerate(row):
                yield j, k, value


@dataclass(frozen=True)
class GrunskyMatrix:
    entries: tuple[tuple[Fraction, ...], ...]
    a: Optional[Fraction] = None

    @property
    def order(self) -> int:
        return len(self.entries)

    def __getitem__(self, jk: tuple[int, int]) -> Fraction:
        j, k = jk
        return self.entries[j][k]

    def is_symmetric(self) -> bool:
        n = self.order
        return all(self.entries[i][j] == self.entries[j][i] for i in range(n) for j in range(i))

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "a": None if self.a is None else format_rational(self.a),
            "order": self.order,
            "entries": [[format_rational(x) for x in row] for row in self.entries],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> GrunskyMatrix:
        a = data.get("a")
        entries = tuple(tuple(parse_rational(x) for x in row) for row in data["entries"])
        if len(entries) != data.get("order", len(entries)):
            raise ValueError("order does not match the number of rows")
        return cls(entries, None if a is None else parse_rational(a))


class Verdict(str, Enum):
    PSD = "PSD"
    NOT_PSD = "NOT_PSD"


@dataclass(frozen=True)
class PSDReport:
    verdict: Verdict
    witness: Optional[tuple[Fraction, ...]] = None
    witness_value: Optional[Fraction] = None

    @property
    def is_psd(self) -> bool:
        return self.verdict is Verdict.PSD

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "verdict": self.verdict.value,
            "witness": None if self.witness is None else [format_rational(t) for t in self.witness],
            "witness_value": None if self.witness_value is None else format_rational(self.witness_value),
        }


def _check_normalized(coefficients: PowerSeries) -> None:
    if coefficients.order < 1 or coefficients[0] != 0 or coefficients[1] != 1:
        raise ValueError("coefficients must describe f(z) = z + a_2 z^2 + ... (a_0 = 0, a_1 = 1)")


def grunsky_table(coefficients: PowerSeries, depth: int) -> GrunskyTable:
    """Fill ``c_{j,k}`` for ``j + k <= depth``.

    Column 1 is seeded from ``c_{j,1} = -sum a_{m+1} c_{j-m,1} - a_{j+2}``;
    each further column ``k`` uses columns ``1..k-1`` one row deeper, so
    column ``k`` is available for rows ``0..depth-k``.  The recursion reads
    ``a_{j+k+1}``, hence ``coefficients`` must reach index ``depth + 1``.
    """
    _check_normalized(coefficients)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if coefficients.order < depth + 1:
        raise ValueError(
            f"depth {depth} needs coefficients through z^{depth + 1}, got order {coefficients.order}"
        )
    a = coefficients.coefficients
    rows: list[list[Fraction]] = [[Fraction(0)] * (depth - j + 1) for j in range(depth + 1)]

    log_coeffs = series_log1p_composed(PowerSeries(a[1 : depth + 2]))
    for j in range(1, depth + 1):
        rows[j][0] = -log_coeffs[j]

    for j in range(depth):
        acc = -a[j + 2]
        for m in range(1, j + 1):
            acc -= a[m + 1] * rows[j - m][1]
        rows[j][1] = acc

    for k in range(2, depth + 1):
        for j in range(depth - k + 1):
            acc = Fraction(-a[j + k + 1], k)
            for l in range(1, k):
                if a[k - l]:
                    acc += Fraction(l * a[k - l], k) * rows[j + 1][l]
            for m in range(1, j + 1):
                if a[m + 1]:
                    acc -= a[m + 1] * rows[j - m][k]
            rows[j][k] = acc

    return GrunskyTable(tuple(tuple(r) for r in rows), depth, coefficients)


def fa_grunsky_table(a: Rational, depth: int) -> GrunskyTable:
    return grunsky_table(f_a_series(a, depth + 1), depth)


def grunsky_matrix(table: GrunskyTable, n: int, a: Optional[Rational] = None) -> GrunskyMatrix:
    if n < 1:
        raise ValueError("order must be >= 1")
    if table.depth < 2 * n:
        raise ValueError(f"G({n}) needs a table of depth >= {2 * n}, got {table.depth}")
    c = table.rows
    entries = []
    for j in range(1, n + 1):
        row = []
        for k in range(1, n + 1):
            s = sum((m * c[m][j] * c[m][k] for m in range(1, n + 1)), Fraction(0))
            row.append((Fraction(1, j) if j == k else Fraction(0)) - s)
        entries.append(tuple(row))
    return GrunskyMatrix(tuple(entries), None if a is None else Fraction(a))


def fa_grunsky_matrix(a: Rational, n: int) -> GrunskyMatrix:
    """Exact ``G(n)`` for ``F_a``."""
    return grunsky_matrix(fa_grunsky_table(a, 2 * n), n, a)


def quadratic_form(matrix: GrunskyMatrix, t: Sequence[Rational]) -> Fraction:
    n = matrix.order
    if len(t) != n:
        raise ValueError(f"vector of length {len(t)} does not match matrix order {n}")
    t = [Fraction(x) for x in t]
    total = Fraction(0)
    for j in range(n):
        if not t[j]:
            continue
        row = matrix.entries[j]
        total += t[j] * sum((row[k] * t[k] for k in range(n) if t[k]), Fraction(0))
    return total


def _primitive(v: list[Fraction]) -> tuple[Fraction, ...]:
    # scale to a primitive integer vector; the sign of the form is unchanged
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    return tuple(Fraction(x // g) for x in ints)


def psd_check(matrix: GrunskyMatrix) -> PSDReport:
    """Exact PSD test by symmetric elimination on leading pivots.

    Alongside the Schur complement ``S`` we keep, for each surviving index
    ``r``, a vector ``E_r`` in the original coordinates with
    ``S[r][s] = E_r^T G E_s``.  A negative pivot gives the witness ``E_i``
    directly; a zero pivot with a nonzero off-diagonal entry ``b`` gives
    ``t E_i + E_j`` with ``t = -(1 + d)/(2b)``, whose form value is ``-1``.
    """
    if not matrix.is_symmetric():
        raise ValueError("psd_check requires a symmetric matrix")
    n = matrix.order
    S = [list(row) for row in matrix.entries]
    E = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    alive = list(range(n))

    def report(vec: list[Fraction]) -> PSDReport:
        w = _primitive(vec)
        value = quadratic_form(matrix, w)
        if value >= 0:  # pragma: no cover - guards the construction above
            raise AssertionError("elimination produced a non-negative witness")
        return PSDReport(Verdict.NOT_PSD, w, value)

    while alive:
        i = alive[0]
        rest = alive[1:]
        p = S[i][i]
        if p < 0:
            return report(E[i])
        if p == 0:
            nz = next((j for j in rest if S[i][j] != 0), None)
            if nz is None:
                alive = rest
                continue
            b, d = S[i][nz], S[nz][nz]
            t = -(1 + d) / (2 * b)
            return report([t * x + y for x, y in zip(E[i], E[nz])])
        for r in rest:
            f = S[r][i] / p
            if not f:
                continue
            for s in rest:
                S[r][s] -= f * S[i][s]
            E[r] = [x - f * y for x, y in zip(E[r], E[i])]
        alive = rest
    return PSDReport(Verdict.PSD)


def coefficient_bound_check(table: GrunskyTable, n: int) -> bool:
    """Whether ``m j c_{m,j}^2 <= 1`` for all ``1 <= m, j <= n``."""
    if table.depth < 2 * n:
        raise ValueError(f"coefficient bound up to {n} needs depth >= {2 * n}, got {table.depth}")
    return all(
        m * j * table[m, j] ** 2 <= 1 for m in range(1, n + 1) for j in range(1, n + 1)
    )
