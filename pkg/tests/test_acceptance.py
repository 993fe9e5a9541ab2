"""One test per acceptance criterion; run with ``pytest tests/test_acceptance.py``.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""
import json
import random
import time
from fractions import Fraction


from oracles import g1_formula, g2_formula, grunsky_by_bivariate_log, koebe_coefficients
from univalence.bounds import check_lower_bound, solve_threshold
from univalence.certificate import find_certificate, bundled_certificate, verify_certificate, check_certificate
from univalence.cli import main
from univalence.grunsky import (
    coefficient_bound_check,
    fa_grunsky_matrix,
    fa_grunsky_table,
    grunsky_matrix,
    grunsky_table,
    psd_check,
)
from univalence.ratseries import PowerSeries, exp_series, f_a_series, series_log1p_composed

FIXTURE_DENOMINATOR = 3**49 * 5**16 * 7**92 * 11**12 * 13**4 * 17**3 * 19**4 * 23**4 * 29**2 * 31**4


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_series_golden(record_property, capsys):
    record_property("criterion", "1. series golden values for F_1 and Q_1")
    with Timer() as t:
        assert main(["coeffs", "--a", "1/1", "--function", "fa", "--order", "5"]) == 0
        fa = json.loads(capsys.readouterr().out)
        assert main(["coeffs", "--a", "1/1", "--function", "qa", "--order", "4"]) == 0
        qa = json.loads(capsys.readouterr().out)
    assert fa == ["0", "1", "2", "3", "32/9", "31/9"]
    assert qa == ["1", "2", "2", "2/3", "-2/3"]
    assert t.elapsed < 1


def test_g1_g2_golden(record_property):
    record_property("criterion", "2. G(1) and G(2) match the closed forms at a in {1/2, 5/7, 1}")
    with Timer() as t:
        for a in (Fraction(1, 2), Fraction(5, 7), Fraction(1)):
            assert [list(r) for r in fa_grunsky_matrix(a, 1).entries] == [[g1_formula(a)]]
            assert [list(r) for r in fa_grunsky_matrix(a, 2).entries] == g2_formula(a)
    assert t.elapsed < 5


def test_bundled_certificate(record_property):
    record_property("criterion", "3. bundled order-18 vector at a=5/7 verifies with the stated factorization")
    with Timer() as t:
        cert = bundled_certificate()
        assert (cert.a, cert.order) == (Fraction(5, 7), 18)
        assert verify_certificate(cert)
        value = check_certificate(cert).value
    assert value < 0
    assert value.denominator == FIXTURE_DENOMINATOR
    for p in (37, 61, 102353087, 29977321169):
        assert value.numerator % p == 0
    assert t.elapsed < 300


def test_certificate_discovery(record_property, capsys):
    record_property("criterion", "4. find_certificate(5/7, 18) yields a verified certificate")
    with Timer() as t:
        cert = find_certificate(Fraction(5, 7), 18)
        assert cert.verified and verify_certificate(cert)
        assert main(["certify", "--a", "5/7", "--order", "18"]) == 0
        assert json.loads(capsys.readouterr().out)["verified"] is True
    assert t.elapsed < 600


def _encloses_within(enc, target: float, tol: float) -> bool:
    # some point of the enclosure lies within tol of target, and the
    # enclosure itself is tighter than tol
    lo, hi = float(enc.lo_exact), float(enc.hi_exact)
    return hi - lo < tol and lo - tol <= target <= hi + tol


def test_theorem_delta0_chain(record_property):
    record_property("criterion", "5. pi/3, delta0, x1=17/22 certifies (margin 0.00255, threshold 0.982)")
    r = check_lower_bound(Fraction(1, 3), "delta0", Fraction(17, 22))
    assert r.certified
    assert _encloses_within(r.lemma_margin, 0.00255, 5e-5)
    assert _encloses_within(r.threshold_value, 0.982, 1e-3)


def test_theorem_delta1_chain(record_property):
    record_property("criterion", "6. 7pi/25, delta1, x1=20/27 certifies (margin 0.00219, threshold 0.9965)")
    r = check_lower_bound(Fraction(7, 25), "delta1", Fraction(20, 27))
    assert r.certified
    assert _encloses_within(r.lemma_margin, 0.00219, 5e-5)
    assert _encloses_within(r.threshold_value, 0.9965, 1e-3)


def test_improved_pairs(record_property):
    record_property("criterion", "7. the four improved (delta, x1) pairs certify")
    cases = [
        (Fraction(22, 65), "delta0", Fraction(17, 22), 1.06330),
        (Fraction(87, 257), "delta0", Fraction(2765, 3578), 1.06349),
        (Fraction(25, 89), "delta1", Fraction(622, 839), 0.882469),
        (Fraction(127, 452), "delta1", Fraction(321, 433), 0.882704),
    ]
    for q, mode, x1, decimal in cases:
        r = check_lower_bound(q, mode, x1)
        assert r.certified, (q, mode)
        assert _encloses_within(r.delta_value, decimal, 1e-5)


def test_threshold_brackets(record_property):
    record_property("criterion", "8. threshold brackets at tol 1e-5 contain 1.0635213 and 0.8827139")
    for mode, root in (("delta0", Fraction(10635213, 10**7)), ("delta1", Fraction(8827139, 10**7))):
        with Timer() as t:
            b = solve_threshold(mode, Fraction(1, 10**5))
        assert b.contains(root) and b.width <= Fraction(1, 10**5)
        assert t.elapsed < 30


def test_oracle_equivalence(record_property):
    record_property("criterion", "9. recursion tables equal the bivariate-log oracle for depth <= 6")
    sources = {
        "koebe": PowerSeries(koebe_coefficients(8)),
        "F_1/2": f_a_series(Fraction(1, 2), 8),
        "F_5/7": f_a_series(Fraction(5, 7), 8),
    }
    for name, coeffs in sources.items():
        for depth in range(1, 7):
            table = grunsky_table(coeffs, depth)
            oracle = grunsky_by_bivariate_log(list(coeffs), depth)
            for (j, k), v in oracle.items():
                assert table[j, k] == v, (name, depth, j, k)


def test_property_suite(record_property):
    record_property("criterion", "10. Koebe, identity, symmetry, coefficient bound and exp/log round trip")
    with Timer() as t:
        koebe = PowerSeries(koebe_coefficients(20))
        ktable = grunsky_table(koebe, 16)
        for n in range(1, 9):
            assert all(x == 0 for row in grunsky_matrix(ktable, n).entries for x in row)
            assert coefficient_bound_check(ktable, n)
        for n in range(1, 9):
            g = fa_grunsky_matrix(0, n)
            assert all(g[j, k] == (Fraction(1, j + 1) if j == k else 0) for j in range(n) for k in range(n))
            assert psd_check(g).is_psd
        for a in (Fraction(0), Fraction(1, 2), Fraction(5, 7), Fraction(1)):
            table = fa_grunsky_table(a, 12)
            assert all(table[j, k] == table[k, j] for j in range(13) for k in range(13 - j))
            assert fa_grunsky_matrix(a, 6).is_symmetric()
        rng = random.Random(20260101)
        for _ in range(100):
            order = rng.randint(1, 10)
            g = PowerSeries([0] + [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(order)])
            assert series_log1p_composed(exp_series(g)) == g
    assert t.elapsed < 60


def test_main_theorems_consistent(record_property, capsys):
    record_property("criterion", "11. lower bounds and certificate jointly confirm both two-sided estimates")
    code = main(["theorems"])
    out = capsys.readouterr().out
    print(out)
    assert code == 0
    assert "confirmed: pi/3 < delta_0 < 5pi/7 : True" in out
    assert "confirmed: 7pi/25 < delta_1 < 5pi/7 : True" in out
    # same conclusion with a freshly discovered certificate instead of the bundled one
    assert main(["theorems", "--discover"]) == 0
    out = capsys.readouterr().out
    assert "delta_0 < 5pi/7 : True" in out and "delta_1 < 5pi/7 : True" in out
