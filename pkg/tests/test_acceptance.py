"""Exit criteria, one test per criterion, at the stated tolerances.

Run with ``pytest tests/test_acceptance.py``; a per-criterion PASS/FAIL
summary is printed at the end of the session.
"""

import itertools
import random
import time
from fractions import Fraction

from s2ap.analysis import scan_cusick, scan_problem1
from s2ap.density1d import cusick_c, delta_1d, positivity_check
from s2ap.densitymd import delta_md, marginal
from s2ap.digits import s2, tm
from s2ap.dyadic import Dyadic
from s2ap.oracle import brute_histogram_1d, brute_histogram_md, detect_period, verify_witness
from s2ap.witness import (
    M2Params,
    gadget_minus,
    gadget_plus,
    realize_tm_word,
    witness,
    witness_m1,
    witness_m2,
)

N_ORACLE = 1 << 22
ORACLE_TOL = Fraction(5, 1000)
PRECISION = 30


def test_01_witness_completeness(criterion):
    with criterion(1, "witness completeness (m<=3 exhaustive, 500 random m in {4,5})") as notes:
        start = time.perf_counter()
        count = 0
        for m in (1, 2, 3):
            for k in itertools.product(range(-4, 5), repeat=m):
                w = witness(k)
                assert w.verified and verify_witness(w), k
                count += 1
        assert count == 9 ** 3 + 9 ** 2 + 9
        rng = random.Random(20261014)
        for _ in range(500):
            k = [rng.randint(-6, 6) for _ in range(rng.choice((4, 5)))]
            w = witness(k)
            assert w.verified and verify_witness(w), k
        elapsed = time.perf_counter() - start
        assert elapsed < 300
        notes.append(f"{count + 500} tuples in {elapsed:.2f}s")


def test_02_base_constructions(criterion):
    with criterion(2, "m=1 strategies |k|<=30, m=2 grids and (k1,k2) in [-8,8]^2") as notes:
        for strategy in ("direct", "shifted", "intermediate"):
            for k in range(-30, 31):
                b = witness_m1(k, strategy)
                assert b.t >= 1 and s2(b.n + b.t) - s2(b.n) == k, (strategy, k)
        grid = 0
        for a, b, c, d in itertools.product(range(2, 6), range(0, 4), range(2, 6), range(1, 4)):
            for e in range(d + b + 1, d + b + 4):
                p = M2Params("A", a, b, c, d, e)
                blk = p.block()
                assert (s2(blk.n), s2(blk.n + blk.t), s2(blk.n + 2 * blk.t)) == p.digit_sums()
                grid += 1
        for a, d, c in itertools.product(range(2, 6), range(2, 6), range(0, 4)):
            p = M2Params("B", a, 0, c, d, d - 1 + a)
            blk = p.block()
            assert (s2(blk.n), s2(blk.n + blk.t), s2(blk.n + 2 * blk.t)) == p.digit_sums()
            grid += 1
        for k1, k2 in itertools.product(range(-8, 9), repeat=2):
            blk = witness_m2(k1, k2)
            assert blk.t >= 1 and blk.cumulative(2) == (k1, k2)
        notes.append(f"{grid} layout grid points")


def test_03_gadgets(criterion):
    with criterion(3, "gadget sums (0,...,0,+-1) for 2<=m<=64") as notes:
        for m in range(2, 65):
            for gadget, last in ((gadget_plus, 1), (gadget_minus, -1)):
                tot = [0] * m
                for b in gadget(m):
                    for l in range(1, m + 1):
                        tot[l - 1] += s2(b.n + l * b.t) - s2(b.n + (l - 1) * b.t)
                assert tot == [0] * (m - 1) + [last], (gadget.__name__, m)
        notes.append("126 gadgets exact")


def test_04_exact_densities(criterion):
    with criterion(4, "c_1=c_2=3/4, c_3=11/16, delta(0,3)=5/16, doubling j<=20"):
        assert cusick_c(1) == cusick_c(2) == Dyadic(3, 2)
        assert cusick_c(3) == Dyadic(11, 4)
        assert delta_1d(3).value(0) == Dyadic(5, 4)
        base = delta_1d(1)
        for j in range(21):
            assert delta_1d(1 << j) == base


def test_05_cross_engine_period(criterion):
    with criterion(5, "detect_period(t).exactValue == cusick_c(t), 1<=t<=64, K_max=26") as notes:
        ks = []
        for t in range(1, 65):
            cert = detect_period(t, K_max=26)
            assert cert.exact_value == cusick_c(t), t
            ks.append(cert.K)
        notes.append(f"period exponents {min(ks)}..{max(ks)}")


def test_06_oracle_1d(criterion):
    with criterion(6, "|delta(k,t) - brute| <= 0.005 at N=2^22, t<=32, |k|<=8") as notes:
        worst = Fraction(0)
        for t in range(1, 33):
            hist = brute_histogram_1d(t, N_ORACLE)
            law = delta_1d(t)
            for k in range(-8, 9):
                err = abs(law.value(k).to_fraction() - Fraction(hist.get(k, 0), N_ORACLE))
                worst = max(worst, err)
                assert err <= ORACLE_TOL, (t, k, float(err))
        notes.append(f"max error {float(worst):.2e}")


def test_07_normalization_and_positivity(criterion):
    with criterion(7, "mass 1 and mean 0 exact for t<=1024; positivity k in [-30, s2(t)], t<=256"):
        for t in range(1, 1025):
            law = delta_1d(t)
            assert law.total_mass() == 1 and law.mean() == 0, t
        for t in range(1, 257):
            assert positivity_check(t, -30), t


def test_08_multidim_consistency(criterion):
    with criterion(8, "md vs 1d (t<=64, 2^-30), marginals m in {2,3} t<=32, mass in [1, 1+2^-29]") as notes:
        tol = Dyadic(1, 30)
        upper = 1 + Dyadic(1, 29)
        for t in range(1, 65):
            d = delta_md(1, t, (0,), PRECISION)
            law = delta_1d(t)
            support = set(k for (k,) in d.nums) | set(range(law.k_lo - PRECISION, law.k_hi + 1))
            for k in support:
                assert abs(law.value(k) - d[(k,)]) <= tol, (t, k)
            assert 1 <= d.total() + d.lost_mass_bound <= upper
        checked = 0
        for m in (2, 3):
            for t in range(1, 33):
                d = delta_md(m, t, None, PRECISION)
                assert d.total() <= 1
                assert 1 <= d.total() + d.lost_mass_bound <= upper
                for l in range(1, m + 1):
                    law = delta_1d(l * t)
                    for k, v in marginal(d, l).items():
                        assert abs(law.value(k) - v) <= d.lost_mass_bound, (m, t, l, k)
                        checked += 1
        notes.append(f"{checked} marginal points")


def test_09_oracle_md(criterion):
    with criterion(9, "m=2, t<=20 entries within 0.005 + lost of brute at N=2^22") as notes:
        worst = 0.0
        for t in range(1, 21):
            d = delta_md(2, t, None, PRECISION)
            hist = brute_histogram_md((0, 0), t, N_ORACLE)
            tol = ORACLE_TOL + d.lost_mass_bound.to_fraction()
            for k in set(d.nums) | set(hist):
                err = abs(d[k].to_fraction() - Fraction(hist.get(k, 0), N_ORACLE))
                worst = max(worst, float(err))
                assert err <= tol, (t, k, float(err))
        notes.append(f"max error {worst:.2e}")


def test_10_thue_morse_words(criterion):
    with criterion(10, "all 2^(m+1) Thue-Morse words for m<=7") as notes:
        count = 0
        for m in range(1, 8):
            for word in itertools.product((0, 1), repeat=m + 1):
                w = realize_tm_word(word)
                assert w.verified and w.t >= 1
                assert tuple(tm(w.n + l * w.t) for l in range(m + 1)) == word
                count += 1
        notes.append(f"{count} words")


def test_11_problem1_evidence(criterion):
    with criterion(11, "two-step Cusick scan t<=256 (report); t=1 interval contains 1/2") as notes:
        rows = scan_problem1(1, 256, PRECISION)
        assert rows[0].lower <= Dyadic(1, 1) <= rows[0].upper
        flagged = [r.t for r in rows if r.flagged]
        notes.append(f"flagged (lower <= 1/4): {flagged or 'none'}; inf lower = {float(rows[-1].running_min):.6f}")


def test_12_cusick_evidence(criterion):
    with criterion(12, "Cusick scan t<=2^16 (report) under 10 minutes") as notes:
        start = time.perf_counter()
        rows = scan_cusick(1, 1 << 16)
        elapsed = time.perf_counter() - start
        assert len(rows) == 1 << 16
        assert elapsed < 600
        flagged = [r.t for r in rows if r.flagged]
        notes.append(f"{elapsed:.1f}s; flagged (c_t <= 1/2): {flagged or 'none'}; "
                     f"min c_t = {rows[-1].running_min} ~ {float(rows[-1].running_min):.6f}")
