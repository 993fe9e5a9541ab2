"""Independent reference computations used by the test-suite.

None of these share code paths with the package beyond the input
coefficients they are handed.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import prod


# -- bivariate log expansion of (f(z) - f(w)) / (z - w) ---------------------

def _bmul(p: dict, q: dict, deg: int) -> dict:
    out: dict = {}
    for (i1, j1), x in p.items():
        for (i2, j2), y in q.items():
            if i1 + i2 + j1 + j2 <= deg:
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, Fraction(0)) + x * y
    return out


def grunsky_by_bivariate_log(a: list, depth: int) -> dict:
    """``c_{j,k}`` for ``j + k <= depth`` from the Mercator series of the log.

    ``(f(z) - f(w))/(z - w) = sum_n a_n (z^n - w^n)/(z - w)`` has coefficient
    ``a_{i+j+1}`` at ``z^i w^j``.  With ``X`` that quotient minus 1,
    ``log(1 + X) = sum_k (-1)^(k+1) X^k / k`` truncated at total degree
    ``depth`` (``X`` has no constant term, so ``k <= depth`` suffices).
    """
    X = {
        (i, j): Fraction(a[i + j + 1])
        for i in range(depth + 1)
        for j in range(depth + 1 - i)
        if i + j >= 1
    }
    total: dict = {}
    power = dict(X)
    for k in range(1, depth + 1):
        sign = Fraction((-1) ** (k + 1), k)
        for key, v in power.items():
            total[key] = total.get(key, Fraction(0)) + sign * v
        power = _bmul(power, X, depth)
    return {
        (j, k): -total.get((j, k), Fraction(0))
        for j in range(depth + 1)
        for k in range(depth + 1 - j)
    }


# -- closed forms -------------------------------------------------------------

def koebe_coefficients(order: int) -> list:
    return [Fraction(n) for n in range(order + 1)]


def koebe_grunsky(j: int, k: int) -> Fraction:
    """log(1 - zw) - 2 log(1 - z) - 2 log(1 - w) = -sum c_{j,k} z^j w^k."""
    if j >= 1 and k >= 1:
        return Fraction(1, j) if j == k else Fraction(0)
    if j == 0 and k == 0:
        return Fraction(0)
    return Fraction(-2, max(j, k))


def g1_formula(a: Fraction) -> Fraction:
    return 1 - a**4


def g2_formula(a: Fraction) -> list:
    off = -14 * a**3 * (1 + a**2) ** 2
    return [
        [(81 - 8 * a**2 - 97 * a**4 - 8 * a**6) / 81, off / 81],
        [off / 81, (Fraction(81, 2) - 4 * a**2 - 10 * a**4 + 10 * a**6 - Fraction(49, 2) * a**8) / 81],
    ]


def fa_displayed(a: Fraction) -> list:
    """Coefficients of F_a through z^5 as displayed in closed form."""
    return [
        Fraction(0),
        Fraction(1),
        2 * a,
        3 * a**2,
        Fraction(2, 9) * a * (17 * a**2 - 1),
        Fraction(1, 9) * a**2 * (38 * a**2 - 7),
    ]


def qa_displayed(a: Fraction) -> list:
    return [
        Fraction(1),
        2 * a,
        2 * a**2,
        Fraction(2, 3) * a * (2 * a**2 - 1),
        Fraction(2, 3) * a**2 * (a**2 - 2),
    ]


# -- exact linear algebra -----------------------------------------------------

def det(M: list) -> Fraction:
    """Leibniz determinant; fine for the small sizes used in tests."""
    n = len(M)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total += (-1) ** inv * prod((M[i][perm[i]] for i in range(n)), start=Fraction(1))
    return total


def psd_by_principal_minors(M: list) -> bool:
    """A symmetric matrix is PSD iff all principal minors are >= 0."""
    n = len(M)
    for r in range(1, n + 1):
        for idx in combinations(range(n), r):
            sub = [[M[i][j] for j in idx] for i in idx]
            if det(sub) < 0:
                return False
    return True
