"""Command-line interface.

Exit codes: 0 success/certified, 1 internal or usage error, 2 no evidence
(no certificate, bound not certified), 3 indeterminate at maximal precision.
"""
from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import logging
import os
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import bounds
from .certificate import (
    Certificate,
    CertificateError,
    check_certificate,
    find_certificate,
    format_factorization,
    bundled_certificate,
    bundled_fixture,
    scan_upper_bound,
    trial_factor,
)
from .grunsky import fa_grunsky_matrix, psd_check
from .interval import Interval, pi as pi_interval
from .ratseries import f_a_series, format_rational, log_f_a_series, parse_rational, q_a_series

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_NO_EVIDENCE = 2
EXIT_INDETERMINATE = 3

SCHEMA_VERSION = 1
PRECISION_ENV = "UNIVALENCE_PRECISION"
PRECISION_RANGE = (64, 4096)
ORDER_RANGE = (1, 64)

log = logging.getLogger("univalence")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INTERNAL, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _delta(text: str) -> Fraction:
    s = text.strip()
    if s.endswith("pi"):
        s = s[:-2].strip().rstrip("*").strip() or "1"
    return _rational(s)


def _bounded_int(lo: int, hi: int, what: str):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{what} must be an integer") from None
        if not lo <= v <= hi:
            raise argparse.ArgumentTypeError(f"{what} must lie in [{lo}, {hi}]")
        return v

    return parse


_order = _bounded_int(*ORDER_RANGE, "order")
_precision = _bounded_int(*PRECISION_RANGE, "precision")


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a number") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _default_precision() -> int:
    env = os.environ.get(PRECISION_ENV)
    if env is None:
        return bounds.DEFAULT_PRECISION
    try:
        return _precision(env)
    except argparse.ArgumentTypeError as exc:
        raise UsageError(f"{PRECISION_ENV}: {exc}") from None


def _grid(text: str) -> list[Fraction]:
    """``"5/7,1,0"`` or ``"start:stop:step"`` (stop inclusive)."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("range must be start:stop:step")
        start, stop, step = (_rational(p) for p in parts)
        if step <= 0:
            raise argparse.ArgumentTypeError("step must be positive")
        out, x = [], start
        while x <= stop:
            out.append(x)
            x += step
        return out
    return [_rational(p) for p in text.split(",") if p.strip()]


# -- output -------------------------------------------------------------------


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _interval_pair(x: Interval, digits: int = 12) -> list[str]:
    return list(x.decimal_pair(digits))


# -- commands -----------------------------------------------------------------


def cmd_coeffs(args) -> int:
    builders = {"qa": q_a_series, "fa": f_a_series, "logfa": log_f_a_series}
    series = builders[args.function](args.a, args.order)
    if args.format == "csv":
        _emit(args, _csv_text(["index", "coefficient"], list(enumerate(series.to_strings()))))
    else:
        _emit(args, json.dumps(series.to_strings()))
    return EXIT_OK


def cmd_grunsky(args) -> int:
    m = fa_grunsky_matrix(args.a, args.order)
    if args.format == "csv":
        _emit(args, _csv_text([f"k{k}" for k in range(1, m.order + 1)],
                              [[format_rational(x) for x in row] for row in m.entries]))
    else:
        _emit(args, m.to_json())
    return EXIT_OK


def cmd_psd(args) -> int:
    report = psd_check(fa_grunsky_matrix(args.a, args.order))
    data = {"a": format_rational(args.a), "order": args.order, **report.to_dict()}
    _emit(args, json.dumps(data, indent=2))
    return EXIT_OK


def _stamp(cert: Certificate, args) -> Certificate:
    if args.timestamp:
        now = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
        return replace(cert, timestamp=now)
    return cert


def cmd_certify(args) -> int:
    try:
        cert = find_certificate(args.a, args.order, args.max_denominator)
    except CertificateError as exc:
        _emit(args, json.dumps({"schema_version": SCHEMA_VERSION, "a": format_rational(args.a),
                                "order": args.order, "verified": False,
                                "reason": f"{type(exc).__name__}: {exc}"}, indent=2))
        return EXIT_NO_EVIDENCE
    _emit(args, _stamp(cert, args).to_json(indent=2))
    return EXIT_OK


def _load_fixture(spec: str) -> dict:
    path = Path(spec)
    if path.exists():
        return json.loads(path.read_text())
    if spec in ("bundled", "paper_v.json"):
        return bundled_fixture()
    raise UsageError(f"fixture not found: {spec}")


def cmd_verify(args) -> int:
    data = _load_fixture(args.fixture)
    cert = Certificate.from_dict(data)
    result = check_certificate(cert)
    out = {
        "schema_version": SCHEMA_VERSION,
        "a": format_rational(cert.a),
        "order": cert.order,
        "verified": result.ok,
        "reason": result.reason,
    }
    ok = result.ok
    if result.value is not None:
        value = result.value
        out["value"] = {"numerator": str(value.numerator), "denominator": str(value.denominator)}
        out["value_float"] = float(value)
        den_f, den_rest = trial_factor(value.denominator)
        out["denominator_factorization"] = format_factorization(den_f, den_rest)
        num_f, num_rest = trial_factor(value.numerator)
        out["numerator_small_factors"] = format_factorization(num_f)
        out["numerator_cofactor_digits"] = len(str(num_rest))
        expected = data.get("expected")
        if expected:
            want = {int(p): e for p, e in expected.get("denominator_factorization", {}).items()}
            if want:
                match = den_rest == 1 and den_f == want
                out["denominator_matches_expected"] = match
                ok = ok and match
            divisors = [int(d) for d in expected.get("numerator_divisors", [])]
            if divisors:
                divides = all(value.numerator % d == 0 for d in divisors)
                out["numerator_divisible_by_expected"] = divides
                ok = ok and divides
    _emit(args, json.dumps(out, indent=2))
    return EXIT_OK if ok else EXIT_NO_EVIDENCE


def cmd_bounds(args) -> int:
    report = bounds.check_lower_bound(
        args.delta, args.mode, args.x1, precision=args.precision, max_precision=args.max_precision
    )
    _emit(args, json.dumps(report.to_dict(args.digits), indent=2))
    if report.certified:
        return EXIT_OK
    if report.status == "indeterminate":
        return EXIT_INDETERMINATE
    return EXIT_NO_EVIDENCE


def cmd_solve(args) -> int:
    try:
        bracket = bounds.solve_threshold(args.mode, args.tol, args.precision, args.max_precision)
    except bounds.IndeterminateError as exc:
        print(f"indeterminate: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    out = {
        "schema_version": SCHEMA_VERSION,
        "mode": args.mode,
        "tol": args.tol,
        "bracket": _interval_pair(bracket, args.digits),
        "precision_bits": args.precision,
    }
    _emit(args, json.dumps(out, indent=2))
    return EXIT_OK


def cmd_scan(args) -> int:
    rows = scan_upper_bound(args.grid, args.max_order, jobs=args.jobs)
    records = []
    for row in rows:
        ub = None
        if row.order is not None:
            ub = _interval_pair(Interval.point(row.a) * pi_interval(), 12)[1]
        records.append({
            "a": format_rational(row.a),
            "order": row.order,
            "delta0_upper_bound": ub,
            "note": row.note,
        })
    if args.format == "csv":
        _emit(args, _csv_text(
            ["schema_version", "a", "order", "delta0_upper_bound", "note"],
            [[SCHEMA_VERSION, r["a"], "" if r["order"] is None else r["order"],
              r["delta0_upper_bound"] or "", r["note"]] for r in records],
        ))
    else:
        _emit(args, json.dumps({"schema_version": SCHEMA_VERSION, "max_order": args.max_order,
                                "rows": records}, indent=2))
    return EXIT_OK


def cmd_theorems(args) -> int:
    """Print both sides of pi/3 < delta_0 < 5pi/7 and 7pi/25 < delta_1 < 5pi/7."""
    low0 = bounds.check_lower_bound(Fraction(1, 3), "delta0", Fraction(17, 22), args.precision)
    low1 = bounds.check_lower_bound(Fraction(7, 25), "delta1", Fraction(20, 27), args.precision)
    if args.discover:
        try:
            cert = find_certificate(Fraction(5, 7), 18)
        except CertificateError:
            cert = None
    else:
        cert = bundled_certificate()
    upper_ok = cert is not None and check_certificate(cert).ok
    upper = Fraction(5, 7) if upper_ok else None
    p = pi_interval(args.precision)

    def show(q: Fraction) -> str:
        lo, hi = (Interval.point(q, args.precision) * p).decimal_pair(10)
        return f"{format_rational(q)}*pi in [{lo}, {hi}]"

    lines = [
        f"lower delta_0: {show(low0.delta)} certified={low0.certified} "
        f"threshold={_interval_pair(low0.threshold_value, 8)}",
        f"lower delta_1: {show(low1.delta)} certified={low1.certified} "
        f"threshold={_interval_pair(low1.threshold_value, 8)}",
    ]
    if upper_ok:
        lines.append(f"upper: F_(5/7) has a verified Grunsky certificate of order {cert.order} "
                     f"(value {float(check_certificate(cert).value):.6e}); "
                     f"delta_1 <= delta_0 <= pi*a_* < {show(upper)}")
    else:
        lines.append("upper: no verified certificate for F_(5/7)")
    ok0 = low0.certified and upper_ok
    ok1 = low1.certified and upper_ok
    lines.append(f"confirmed: pi/3 < delta_0 < 5pi/7 : {ok0}")
    lines.append(f"confirmed: 7pi/25 < delta_1 < 5pi/7 : {ok1}")
    _emit(args, "\n".join(lines))
    return EXIT_OK if ok0 and ok1 else EXIT_NO_EVIDENCE


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="univalence", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, fmt=True):
        p.add_argument("--out", help="write to FILE instead of stdout")
        if fmt:
            p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("coeffs", help="exact Taylor coefficients of Q_a, F_a or log(F_a/z)")
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--function", choices=["qa", "fa", "logfa"], default="fa")
    p.add_argument("--order", type=_order, required=True)
    common(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("grunsky", help="export the exact Grunsky matrix G(n) of F_a")
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--order", type=_order, required=True)
    common(p)
    p.set_defaults(func=cmd_grunsky)

    p = sub.add_parser("psd", help="exact positive-semidefiniteness test of G(n)")
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--order", type=_order, required=True)
    common(p, fmt=False)
    p.set_defaults(func=cmd_psd)

    p = sub.add_parser("certify", help="discover and verify a non-univalence certificate")
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--order", type=_order, required=True)
    p.add_argument("--max-denominator", type=int, default=30)
    p.add_argument("--timestamp", action="store_true", help="record the creation time")
    common(p, fmt=False)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", help="re-verify a certificate file in exact arithmetic")
    p.add_argument("--fixture", required=True, help="certificate JSON file, or 'bundled' for the shipped order-18 vector")
    common(p, fmt=False)
    p.set_defaults(func=cmd_verify)

    def precision_args(p):
        p.add_argument("--precision", type=_precision, default=None, help="working precision in bits")
        p.add_argument("--max-precision", type=_precision, default=bounds.MAX_PRECISION)
        p.add_argument("--digits", type=int, default=12, help="significant digits in output")

    p = sub.add_parser("bounds", help="certify a lower bound delta = q*pi")
    p.add_argument("--mode", choices=["delta0", "delta1"], required=True)
    p.add_argument("--delta", type=_delta, required=True, help="q in delta = q*pi, e.g. 1/3")
    p.add_argument("--x1", type=_rational, default=None)
    precision_args(p)
    common(p, fmt=False)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("solve", help="bracket the threshold of the lower-bound method")
    p.add_argument("--mode", choices=["delta0", "delta1"], required=True)
    p.add_argument("--tol", type=_positive_float, default=1e-5)
    precision_args(p)
    common(p, fmt=False)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("scan", help="smallest certifying order for each a in a grid")
    p.add_argument("--grid", type=_grid, required=True, help="'5/7,1' or 'start:stop:step'")
    p.add_argument("--max-order", type=_order, required=True)
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("theorems", help="check both sides of the main estimates")
    p.add_argument("--discover", action="store_true", help="search a certificate instead of the bundled one")
    p.add_argument("--precision", type=_precision, default=None)
    common(p, fmt=False)
    p.set_defaults(func=cmd_theorems)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_INTERNAL
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if getattr(args, "precision", "unset") is None:
            args.precision = _default_precision()
        if getattr(args, "max_precision", None) is not None:
            args.max_precision = max(args.max_precision, args.precision)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except bounds.IndeterminateError as exc:
        print(f"indeterminate: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except Exception as exc:
        log.debug("internal failure", exc_info=True)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
