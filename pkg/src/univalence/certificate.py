"""Non-univalence certificates for ``F_a``.

A certificate is a rational vector ``v`` with ``v G(n) v^T < 0`` for the
exact Grunsky matrix of ``F_a``.  Discovery goes through floating point
(cyclic Jacobi for the smallest eigenpair, continued-fraction rounding of
the eigenvector); acceptance never does: every certificate is re-checked in
exact rational arithmetic before it is marked verified.
"""
from __future__ import annotations

import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .grunsky import GrunskyMatrix, fa_grunsky_matrix, fa_grunsky_table, grunsky_matrix, quadratic_form
from .ratseries import Rational, convergents, format_rational, parse_rational

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
GENERATOR = "jacobi+cfrac"
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
START_DENOMINATOR = 30
FINAL_DENOMINATOR = 4096


class CertificateError(Exception):
    pass


class NoNegativeDirection(CertificateError):
    """The floating-point stage found no negative eigenvalue."""


class VerificationFailed(CertificateError):
    """No rounding of the eigenvector within the denominator bound certifies."""


class FloatProjectionError(OverflowError):
    pass


class JacobiNotConverged(ArithmeticError):
    def __init__(self, message: str, eigenvalues: np.ndarray, eigenvectors: np.ndarray, off_norm: float):
        super().__init__(message)
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors
        self.off_norm = off_norm


@dataclass(frozen=True)
class Certificate:
    a: Fraction
    order: int
    vector: tuple[Fraction, ...]
    value: Optional[Fraction] = None
    verified: bool = False
    generator: str = GENERATOR
    timestamp: Optional[str] = field(default=None, compare=False)

    def to_dict(self) -> dict:
        value = None
        if self.value is not None:
            value = {"numerator": str(self.value.numerator), "denominator": str(self.value.denominator)}
        return {
            "schema_version": SCHEMA_VERSION,
            "a": format_rational(self.a),
            "order": self.order,
            "vector": [format_rational(x) for x in self.vector],
            "value": value,
            "verified": self.verified,
            "generator": self.generator,
            "timestamp": self.timestamp,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> Certificate:
        value = data.get("value")
        if value is not None:
            value = Fraction(int(value["numerator"]), int(value["denominator"]))
        return cls(
            a=parse_rational(data["a"]),
            order=int(data["order"]),
            vector=tuple(parse_rational(x) for x in data["vector"]),
            value=value,
            verified=bool(data.get("verified", False)),
            generator=data.get("generator", GENERATOR),
            timestamp=data.get("timestamp"),
        )

    @classmethod
    def load(cls, path: str | Path) -> Certificate:
        return cls.from_dict(json.loads(Path(path).read_text()))


def bundled_fixture() -> dict:
    """The bundled order-18 vector at ``a = 5/7`` with its expected factors."""
    text = resources.files("univalence").joinpath("data/paper_v.json").read_text()
    return json.loads(text)


def bundled_certificate() -> Certificate:
    return Certificate.from_dict(bundled_fixture())


# -- floating-point discovery -------------------------------------------------


def float_project(matrix: GrunskyMatrix) -> np.ndarray:
    """Round each exact entry to the nearest double."""
    n = matrix.order
    out = np.empty((n, n), dtype=float)
    for i in range(n):
        for j in range(n):
            try:
                out[i, j] = float(matrix.entries[i][j])
            except OverflowError:
                raise FloatProjectionError(f"entry ({i}, {j}) does not fit in a double") from None
    return out


def _off_norm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A - np.diag(np.diag(A))))


def jacobi_eigen(
    A: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS
) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigen-decomposition of a symmetric matrix.

    Sweeps the upper triangle row by row until the off-diagonal Frobenius
    norm is at most ``tol * max(1, ||A||_F)``.  Returns ``(w, V)`` with
    ``A V = V diag(w)``, unsorted.
    """
    A = np.array(A, dtype=float, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("need a square matrix")
    if not np.allclose(A, A.T, rtol=1e-12, atol=1e-300):
        raise ValueError("matrix is not symmetric")
    n = A.shape[0]
    V = np.eye(n)
    threshold = tol * max(1.0, float(np.linalg.norm(A)))
    for _sweep in range(max_sweeps):
        if _off_norm(A) <= threshold:
            return np.diag(A).copy(), V
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                gap = A[q, q] - A[p, p]
                if abs(gap) > 1e150 * abs(apq):
                    # rotation angle below double resolution
                    A[p, q] = A[q, p] = 0.0
                    continue
                theta = gap / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                colp, colq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp, rowq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                A[p, q] = A[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    off = _off_norm(A)
    if off <= threshold:
        return np.diag(A).copy(), V
    raise JacobiNotConverged(
        f"Jacobi did not converge in {max_sweeps} sweeps (off-norm {off:.3g})", np.diag(A).copy(), V, off
    )


def min_eigenpair(
    A: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS
) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and a unit eigenvector.

    The sign is fixed so that the largest-magnitude component is positive.
    """
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    w, V = jacobi_eigen(A, tol, max_sweeps)
    i = int(np.argmin(w))
    v = V[:, i] / np.linalg.norm(V[:, i])
    k = int(np.argmax(np.abs(v)))
    if v[k] < 0:
        v = -v
    return float(w[i]), v


def best_convergent(x: float, max_denominator: int) -> Fraction:
    best = Fraction(math.floor(x))
    for conv in convergents(x):
        if conv.denominator > max_denominator:
            break
        best = conv
    return best


def rationalize(v: Iterable[float], max_denominator: int) -> list[Fraction]:
    """Replace each component by its last convergent with denominator <= bound."""
    if max_denominator < 1:
        raise ValueError("max_denominator must be >= 1")
    return [best_convergent(float(x), max_denominator) for x in v]


def _denominator_schedule(start: int, limit: int) -> Iterator[int]:
    d = start
    while True:
        yield d
        if d >= limit:
            return
        d = min(2 * d, limit)


def certify_matrix(
    matrix: GrunskyMatrix,
    max_denominator: int = START_DENOMINATOR,
    final_denominator: int = FINAL_DENOMINATOR,
    tol: float = JACOBI_TOL,
) -> Certificate:
    if matrix.a is None:
        raise ValueError("matrix does not record its parameter a")
    lam, vec = min_eigenpair(float_project(matrix), tol)
    if lam >= 0:
        raise NoNegativeDirection(f"smallest eigenvalue {lam:.3g} is not negative")
    for d in _denominator_schedule(max_denominator, max(final_denominator, max_denominator)):
        cand = rationalize(vec, d)
        value = quadratic_form(matrix, cand)
        if value < 0:
            return Certificate(matrix.a, matrix.order, tuple(cand), value, True)
        log.debug("denominator bound %d gives form value %s >= 0", d, float(value))
    raise VerificationFailed(
        f"eigenvalue {lam:.3g} but no rounding with denominator <= {final_denominator} certifies"
    )


def find_certificate(
    a: Rational,
    order: int,
    max_denominator: int = START_DENOMINATOR,
    final_denominator: int = FINAL_DENOMINATOR,
) -> Certificate:
    """Search for a rational ``v`` with ``v G(order) v^T < 0`` for ``F_a``.

    Raises :class:`NoNegativeDirection` or :class:`VerificationFailed`.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    return certify_matrix(fa_grunsky_matrix(a, order), max_denominator, final_denominator)


@dataclass(frozen=True)
class Verification:
    ok: bool
    value: Optional[Fraction]
    reason: str


def check_certificate(cert: Certificate) -> Verification:
    """Recompute the form value from ``a``, ``order`` and ``vector`` only."""
    try:
        if len(cert.vector) != cert.order:
            return Verification(False, None, f"vector has {len(cert.vector)} entries, order is {cert.order}")
        value = quadratic_form(fa_grunsky_matrix(cert.a, cert.order), cert.vector)
    except Exception as exc:  # verification reports, it never raises
        return Verification(False, None, f"recomputation failed: {exc}")
    if value >= 0:
        return Verification(False, value, "form value is not negative")
    if cert.value is not None and value != cert.value:
        return Verification(False, value, "stored value differs from the recomputed one")
    return Verification(True, value, "ok")


def verify_certificate(cert: Certificate) -> bool:
    result = check_certificate(cert)
    if not result.ok:
        log.info("certificate rejected: %s", result.reason)
    return result.ok


# -- scanning over a ----------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    a: Fraction
    order: Optional[int]
    certificate: Optional[Certificate]
    note: str = ""

    def upper_bound(self) -> Optional[float]:
        """``pi * a``, an upper bound for delta_0 when a certificate exists."""
        return math.pi * self.a if self.order is not None else None


def _scan_one(a: Fraction, max_order: int) -> ScanRow:
    try:
        table = fa_grunsky_table(a, 2 * max_order)
    except Exception as exc:
        return ScanRow(a, None, None, f"error: {exc}")
    for n in range(1, max_order + 1):
        try:
            cert = certify_matrix(grunsky_matrix(table, n, a))
        except (NoNegativeDirection, VerificationFailed):
            continue
        except Exception as exc:
            return ScanRow(a, None, None, f"error at order {n}: {exc}")
        return ScanRow(a, n, cert)
    return ScanRow(a, None, None, f"no certificate up to order {max_order}")


def scan_upper_bound(a_values: Sequence[Rational], max_order: int, jobs: int = 1) -> list[ScanRow]:
    """For each ``a``, the smallest order ``<= max_order`` with a verified certificate."""
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    values = [Fraction(a) for a in a_values]
    if jobs > 1 and len(values) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_scan_one, values, [max_order] * len(values)))
    return [_scan_one(a, max_order) for a in values]


# -- factor checks ------------------------------------------------------------


def _primes_up_to(n: int) -> list[int]:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


def trial_factor(n: int, limit: int = 10**6) -> tuple[dict[int, int], int]:
    """Prime factors of ``|n|`` up to ``limit`` and the remaining cofactor."""
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    factors: dict[int, int] = {}
    exhausted = True
    for p in _primes_up_to(limit):
        if p * p > n:
            exhausted = False
            break
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
    # a leftover is prime when every prime up to its square root was tried
    if n > 1 and (not exhausted or n <= limit):
        factors[n] = factors.get(n, 0) + 1
        n = 1
    return factors, n


def format_factorization(factors: dict[int, int], cofactor: int = 1) -> str:
    parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(factors.items())]
    if cofactor != 1:
        parts.append(f"[{cofactor}]")
    return " * ".join(parts) if parts else "1"
