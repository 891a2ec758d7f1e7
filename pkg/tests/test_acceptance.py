"""The thirteen acceptance criteria at full scale.

Each test records a PASS/FAIL line that is printed in the terminal summary,
then asserts. Runtime limits are asserted alongside correctness.
"""

import time
from fractions import Fraction

import pytest

from conftest import record
from largersieve import latsweeps, polysweeps
from largersieve.certified import ctx, hi, lo
from largersieve.constants import c_s, c_s_interval, certify_remark_bound, lemma1_oracle, lemma2_check, remark_constant
from largersieve.lattice import T_EXACT, hadamard_t_coefficient
from largersieve.polycong import theorem3_bound
from largersieve.sieve1d import sieve_sweep

MINUTE = 60.0


def timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def by_check(rep, name):
    return [v for v in rep.violations if v.get("check") == name]


@pytest.fixture(scope="module")
def thm3_family():
    """One pass of the degree-2 exhaustive and degree-3/4 random sweeps with all four per-instance checks."""
    return timed(polysweeps.theorem3_sweep, targets=polysweeps.POLY_TARGETS)


def test_criterion_01_constants():
    t0 = time.perf_counter()
    c2 = c_s(2)
    cube = c_s_interval(3, ctx(200)) ** 3
    c2_exact = c2.lo == c2.hi == 1
    cube_ok = lo(cube) <= Fraction(1, 4) <= hi(cube) and hi(cube) - lo(cube) < Fraction(1, 10**20)
    gaps = {}
    for s in range(2, 7):
        o = lemma1_oracle(s)
        gaps[s] = abs(o.product_value ** (1 / (s * (s - 1) // 2)) - float(c_s(s).value))
    oracle_ok = max(gaps.values()) < 1e-6
    elapsed = time.perf_counter() - t0
    ok = c2_exact and cube_ok and oracle_ok and elapsed < MINUTE
    record(1, ok, f"c_2 exact={c2_exact}, c_3^3 width={float(hi(cube) - lo(cube)):.1e}, "
                  f"max oracle gap={max(gaps.values()):.1e}, {elapsed:.1f}s")
    assert ok


def test_criterion_02_lemma2():
    rows, elapsed = timed(lemma2_check, 500)
    failed = [r.s for r in rows if not r.ok]
    covered = sorted(r.s for r in rows) == list(range(2, 501))
    ok = covered and not failed and elapsed < MINUTE
    record(2, ok, f"s=2..500 certified, failures={failed}, {elapsed:.1f}s")
    assert ok


def test_criterion_03_remark_constant():
    t0 = time.perf_counter()
    rc = remark_constant(10**6)
    certified = certify_remark_bound(Fraction("3.817"), prime_cutoff=10**6)
    elapsed = time.perf_counter() - t0
    ok = certified and rc.enclosure.hi <= Fraction("3.817") and elapsed < 2 * MINUTE
    record(3, ok, f"enclosure [{float(rc.enclosure.lo):.6f}, {float(rc.enclosure.hi):.6f}] <= 3.817, {elapsed:.1f}s")
    assert ok


def test_criterion_04_theorem3(thm3_family):
    rep, elapsed = thm3_family
    bad = by_check(rep, "thm3") + by_check(rep, "solve_mod_q")
    ok = not bad and rep.info["crosscheck_mismatches"] == 0 and elapsed < 10 * MINUTE
    top = rep.extremal_witnesses[0]["ratio"] if rep.extremal_witnesses else 0
    record(4, ok, f"{rep.instances_checked} instances, violations={len(bad)}, max W/bound={top:.3f}, "
                  f"{elapsed:.1f}s (shared with 6, 8)")
    assert ok
    assert "box 5" in rep.info["exhaustive"] and "100000 random" in rep.info["random"]


def test_criterion_05_theorem4():
    rep, elapsed = timed(polysweeps.theorem4_sweep, ns=(2, 3, 4), q_max=3000, two_power_alpha=20)
    mismatch = polysweeps.theorem4_library_crosscheck(samples=300)
    ok = rep.ok and not mismatch and elapsed < 15 * MINUTE
    record(5, ok, f"{rep.instances_checked} (n, d, q, interval) instances, violations={len(rep.violations)}, "
                  f"library cross-check mismatches={len(mismatch)}, {elapsed:.1f}s")
    assert ok


def test_criterion_06_corollary2_and_remark(thm3_family):
    rep, elapsed = thm3_family
    bad = by_check(rep, "cor2") + by_check(rep, "remark")
    ok = not bad and elapsed < 10 * MINUTE
    record(6, ok, f"{rep.instances_checked} instances, cor2/remark violations={len(bad)}")
    assert ok


def test_criterion_07_lemma3():
    rep, elapsed = timed(polysweeps.lemma3_sweep, range(2, 9), 5000)
    w = rep.info["prime_equality_witness"]
    ok = rep.ok and w is not None and w["count"] == w["g"] and elapsed < 5 * MINUTE
    record(7, ok, f"{rep.instances_checked} (n, d, q) triples, violations={len(rep.violations)}, "
                  f"equality witness={w}, {elapsed:.1f}s")
    assert ok


def test_criterion_08_lemma4(thm3_family):
    rep, _ = thm3_family
    bad = by_check(rep, "lemma4")
    n_checked = rep.info.get("lemma4_instances", 0)
    ok = not bad and n_checked > 0
    record(8, ok, f"{n_checked} instances with >= n+1 roots, violations={len(bad)}")
    assert ok


def test_criterion_09_hensel():
    rep, elapsed = timed(polysweeps.hensel_sweep, 10**4, 0, 10**6)
    ok = rep.ok and rep.instances_checked == 10**4 and elapsed < 10 * MINUTE
    record(9, ok, f"{rep.instances_checked} (P, p^alpha) pairs, mismatches={len(rep.violations)}, {elapsed:.1f}s")
    assert ok


def test_criterion_10_sieve_soundness():
    rep, elapsed = timed(sieve_sweep, 10**4, 0)
    ok = rep.ok and rep.instances_checked == 10**4
    record(10, ok, f"{rep.instances_checked} instances, violations={len(rep.violations)}, "
                   f"valid bounds={rep.info['valid_bounds']}, {elapsed:.1f}s")
    assert ok


def test_criterion_11_lemma5():
    rep, elapsed = timed(latsweeps.lemma5_report, range(1, 6))
    t = rep.info["t"]
    exact = all(t[m] == T_EXACT[m] for m in range(1, 5))
    upper = t[5] <= hadamard_t_coefficient(5)
    ok = rep.ok and exact and upper and elapsed < 5 * MINUTE
    record(11, ok, f"t(1..4)={[t[m] for m in range(1, 5)]}, t(5)={t[5]} <= {float(hadamard_t_coefficient(5)):.3f}, "
                   f"{elapsed:.1f}s")
    assert ok


def test_criterion_12_theorem2():
    rep, elapsed = timed(latsweeps.theorem2_sweep, 1000, 0, (2, 3))
    ok = rep.ok and rep.instances_checked == 1000
    record(12, ok, f"{rep.info['by_dimension']} instances by dimension, violations={len(rep.violations)}, "
                   f"first term dominates in {rep.info['first_term_dominates']}, {elapsed:.1f}s")
    assert ok


def test_criterion_13_lemmas_6_7():
    r6, e6 = timed(latsweeps.lemma6_sweep, 10**4, 0)
    r7, e7 = timed(latsweeps.lemma7_sweep, 2000, 0, True)
    ok = r6.ok and r7.ok and r6.instances_checked == 10**4
    record(13, ok, f"lemma6 {r6.instances_checked} rational instances, lemma7 {r7.instances_checked} point sets, "
                   f"violations={len(r6.violations) + len(r7.violations)}, {e6 + e7:.1f}s")
    assert ok


def test_theorem3_constant_reference():
    # the bound values the sweep compares against
    assert theorem3_bound(2, 12) == 4
    assert theorem3_bound(4, 2 * 3 * 5) == 54
