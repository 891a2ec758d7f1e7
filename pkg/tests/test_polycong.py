import math
import random

import numpy as np
import pytest

from largersieve.arith import g_function, omega
from largersieve.errors import (
    CapExceeded,
    ContentNotCoprime,
    DegenerateModP,
    DomainError,
    NotRoots,
)
from largersieve.harness import RunReport
from largersieve.polycong import (
    IntervalI,
    IntPoly,
    SolutionSet,
    corollary2_bound,
    corollary2_holds,
    count_in_interval,
    hensel_lift,
    max_admissible_points,
    max_window_count,
    min_points_for,
    min_points_table,
    remark_log_bound,
    roots_mod_prime,
    solve_mod_q,
    svk_ratio_explorer,
    theorem3_bound,
    verify_lemma4,
)
from largersieve.certified import hi, lo
from largersieve.polysweeps import (
    check_poly_instance,
    crt_multiplicativity_holds,
    hensel_sweep,
    lemma3_sweep,
    power_residues,
    sweep_deg2_exhaustive,
    sweep_random,
    theorem4_library_crosscheck,
    theorem4_sweep,
    verify_corollary2,
    verify_theorem3,
    verify_theorem4,
    window_max_by_value,
)


def scan(P, q):
    return [x for x in range(q) if P(x) % q == 0]


def scan_interval(P, q, a, count):
    return [x for x in range(a, a + count) if P(x) % q == 0]


def rand_poly(rng, n, box=20):
    cs = [rng.randint(-box, box) for _ in range(n)] + [rng.choice([-3, -1, 1, 2])]
    return IntPoly(tuple(cs))


def test_intpoly_basics():
    P = IntPoly((0, 1, 1, 0, 0))
    assert P.coeffs == (0, 1, 1) and P.degree == 2
    assert IntPoly.parse("0, 1,1") == P
    assert IntPoly.from_roots([0, -1]) == P
    assert IntPoly.monomial_plus(3, 5).coeffs == (5, 0, 0, 1)
    assert IntPoly((6, 4, 2)).content == 2
    with pytest.raises(ValueError):
        IntPoly((3,))


def test_roots_mod_prime_examples():
    assert roots_mod_prime(IntPoly((-2, 0, 1)), 7).roots == (3, 4)
    assert roots_mod_prime(IntPoly((1, 0, 1)), 3).roots == ()
    assert roots_mod_prime(IntPoly((0, 1, 1)), 3).roots == (0, 2)
    big = IntPoly((-2, 0, 1))
    assert list(roots_mod_prime(big, 7919).roots) == scan(big, 7919)
    with pytest.raises(DegenerateModP):
        roots_mod_prime(IntPoly((3, 6, 9)), 3)


def test_hensel_examples():
    assert hensel_lift(IntPoly((-2, 0, 1)), 7, 3).roots == (108, 235)
    assert 108**2 % 343 == 2
    # singular chain: x^2 = 0 mod 8 only at 0 and 4
    assert hensel_lift(IntPoly((0, 0, 1)), 2, 3).roots == (0, 4)
    assert hensel_lift(IntPoly((-5, 1)), 3, 4).roots == (5,)
    with pytest.raises(CapExceeded):
        hensel_lift(IntPoly((0, 1)), 2, 40)
    with pytest.raises(CapExceeded):
        hensel_lift(IntPoly((0, 0, 0, 0, 0, 0, 1)), 2, 18, width_cap=100)


def test_hensel_matches_scan_small():
    rng = random.Random(1)
    for _ in range(300):
        p = rng.choice([2, 3, 5, 7, 11])
        a = rng.randint(1, 5)
        if rng.random() < 0.5:
            P = rand_poly(rng, rng.randint(1, 4))
        else:
            r = rng.randrange(p)
            P = IntPoly.from_roots([r, r + p * rng.randrange(3), rng.randrange(50)])
        assert list(hensel_lift(P, p, a).roots) == scan(P, p**a)


def test_hensel_handles_identically_vanishing_mod_p():
    P = IntPoly((9, 3, 3))
    assert list(hensel_lift(P, 3, 3).roots) == scan(P, 27)


def test_solve_mod_q_examples():
    assert solve_mod_q(IntPoly((0, 1, 1)), 12).roots == (0, 3, 8, 11)
    with pytest.raises(ContentNotCoprime):
        solve_mod_q(IntPoly((4, 0, 2)), 6)
    for q in range(2, 200):
        for n in (2, 3):
            for d in range(1, q):
                if math.gcd(d, q) == 1 and d % 7 == 1:
                    assert len(solve_mod_q(IntPoly.monomial_plus(n, d), q)) <= g_function(n, q)


def test_solve_mod_q_matches_scan():
    rng = random.Random(2)
    for _ in range(400):
        q = rng.randrange(2, 10**4)
        P = rand_poly(rng, rng.randint(1, 4))
        if math.gcd(P.content, q) != 1:
            continue
        assert list(solve_mod_q(P, q).roots) == scan(P, q)


def test_crt_multiplicativity():
    rng = random.Random(3)
    checked = 0
    while checked < 200:
        q1, q2 = rng.randrange(2, 1000), rng.randrange(2, 1000)
        P = rand_poly(rng, rng.randint(2, 4))
        if math.gcd(q1, q2) != 1 or math.gcd(P.content, q1 * q2) != 1:
            continue
        assert crt_multiplicativity_holds(P, q1, q2)
        checked += 1


def test_solution_set_rechecks_roots():
    with pytest.raises(NotRoots):
        SolutionSet(IntPoly((0, 1, 1)), 12, (0, 1))
    with pytest.raises(NotRoots):
        SolutionSet(IntPoly((0, 1, 1)), 12, (12,))


def test_count_in_interval_examples():
    P = IntPoly((0, 1, 1))
    assert count_in_interval(P, 12, IntervalI(2, 3)) == (1, [3])
    assert count_in_interval(IntPoly((7, 0, 1)), 16, IntervalI(3, 4)) == (2, [3, 5])
    assert count_in_interval(P, 12, IntervalI(5, 0)) == (0, [])


def test_count_in_interval_matches_scan():
    rng = random.Random(4)
    for _ in range(300):
        q = rng.randrange(2, 300)
        P = rand_poly(rng, rng.randint(1, 3))
        if math.gcd(P.content, q) != 1:
            continue
        a, count = rng.randrange(-1000, 1000), rng.randrange(0, 3 * q)
        W, wit = count_in_interval(P, q, IntervalI(a, count))
        assert wit == scan_interval(P, q, a, count)
        assert W == len(wit)


def test_window_helpers_match_brute():
    rng = random.Random(5)
    for _ in range(200):
        q = rng.randrange(2, 60)
        roots = sorted(rng.sample(range(q), rng.randrange(1, q + 1)))
        rs = set(roots)
        ell = rng.randrange(1, 3 * q)
        best = max(sum((x % q) in rs for x in range(a, a + ell)) for a in range(q))
        W, start = max_window_count(roots, q, ell)
        assert W == best
        assert sum((x % q) in rs for x in range(start, start + ell)) == W
        k = rng.randrange(1, 2 * len(roots) + 2)
        brute = min(b - a + 1 for a in range(q) for b in range(a, a + 3 * q + 1)
                    if sum((x % q) in rs for x in range(a, b + 1)) >= k)
        assert min_points_for(roots, q, k) == brute
        assert min_points_table(roots, q, k)[k] == brute


def test_admissible_points_both_readings():
    assert max_admissible_points(16, 2) == 5
    assert max_admissible_points(16, 2, "count") == 4
    assert max_admissible_points(12, 2) == 4
    assert max_admissible_points(12, 2, "count") == 3
    assert max_admissible_points(1000, 3) == 11
    assert IntervalI(3, 4).admissible(16, 2) and IntervalI(3, 4).length == 3
    assert not IntervalI(0, 6).admissible(16, 2)
    for q in range(2, 500):
        for n in (2, 3, 4):
            ell = max_admissible_points(q, n)
            assert (ell - 1) ** n <= q < ell**n


def test_theorem3_and_corollary2_bounds():
    assert theorem3_bound(2, 12) == 4
    assert theorem3_bound(3, 30) == 24
    # at L = q^(1/n) the scaled bound is twice the unscaled one
    assert corollary2_bound(2, 16, 4) == pytest.approx(2 * theorem3_bound(2, 16))
    rng = random.Random(6)
    for _ in range(2000):
        n, q = rng.randint(2, 4), rng.randrange(2, 5000)
        W, pts = rng.randrange(0, 60), rng.randrange(1, q + 2)
        exact = corollary2_holds(W, n, q, pts)
        approx = W <= corollary2_bound(n, q, pts - 1)
        margin = abs(W - corollary2_bound(n, q, pts - 1))
        if margin > 1e-6:
            assert exact == approx


def test_remark_log_bound():
    iv = remark_log_bound(IntPoly((0, 1, 1)), 12)
    expected = 0.5 * math.log(12) / math.log(4) + math.log(math.log(12)) / math.log(4) + 3
    assert float(lo(iv)) == pytest.approx(expected, rel=1e-14)
    assert 4.55 < float(lo(iv)) and hi(iv) - lo(iv) < 1e-30
    with pytest.raises(DomainError):
        remark_log_bound(IntPoly((0, 1, 1)), 2)
    with pytest.raises(DomainError):
        remark_log_bound(IntPoly((0, 1, 1)), 12, IntervalI(0, 5))


def test_lemma4_examples():
    P = IntPoly((0, 1, 1))
    assert verify_lemma4(P, 12, [0, 3, 8, 11])
    with pytest.raises(ValueError):
        verify_lemma4(P, 12, [0, 3])
    with pytest.raises(NotRoots):
        verify_lemma4(P, 12, [0, 1, 3])


def test_lemma4_random_minimal_subsets():
    rng = random.Random(7)
    seen = 0
    for _ in range(2000):
        q = rng.choice([8, 16, 27, 32, 64, 72, 81, 125, 243, 360, 720, 1000])
        n = rng.randint(2, 3)
        r = rng.randrange(q)
        P = IntPoly.from_roots([r + (q // 4 or 1) * rng.randrange(4) for _ in range(n)])
        roots = list(solve_mod_q(P, q).roots)
        if len(roots) >= n + 1:
            sub = sorted(rng.sample(roots, n + 1))
            assert verify_lemma4(P, q, sub)
            seen += 1
    assert seen > 100


def test_svk_ratio_examples():
    assert svk_ratio_explorer(IntPoly((0, 1, 1)), 12) == pytest.approx(4 / math.sqrt(12))
    assert svk_ratio_explorer(IntPoly((-1, 0, 0, 1)), 7) == pytest.approx(3 / 7 ** (2 / 3))


def test_power_window_vectorization_matches_brute():
    for q in range(2, 80):
        for n in (2, 3, 4):
            vals = power_residues(q, n)
            assert vals.tolist() == [pow(x, n, q) for x in range(q)]
            ell = max_admissible_points(q, n)
            best = window_max_by_value(vals, q, min(ell, q))
            for v in range(q):
                roots = [x for x in range(q) if vals[x] == v]
                assert best[v] == max_window_count(roots, q, min(ell, q))[0]


def test_theorem4_pinned_example():
    W, _ = count_in_interval(IntPoly((7, 0, 1)), 16, IntervalI(3, 4))
    assert W == 2 <= 2 * omega(16)


def test_checker_detects_planted_violation():
    rep = RunReport("thm3")
    check_poly_instance(rep, (0, 0, 1), 101, list(range(101)), {"thm3", "cor2"})
    kinds = {v["check"] for v in rep.violations}
    assert kinds == {"thm3", "cor2"}


def test_small_sweeps_clean():
    for policy in ("measure", "count"):
        rep = sweep_deg2_exhaustive(box=3, q_range=(2, 120), policy=policy)
        assert rep.ok and rep.instances_checked > 10000
    rep = sweep_random(count=1500, seed=9)
    assert rep.ok and rep.info["crosscheck_mismatches"] == 0
    rep = theorem4_sweep(q_max=300, two_power_alpha=12)
    assert rep.ok
    assert theorem4_library_crosscheck(100, q_max=1000) == []
    rep = lemma3_sweep(q_max=300)
    assert rep.ok and rep.info["prime_equality_witness"]["q"] % 2 == 1
    rep = hensel_sweep(300, seed=3)
    assert rep.ok and rep.instances_checked == 300


def test_sweep_parallel_matches_serial():
    serial = sweep_deg2_exhaustive(box=2, q_range=(2, 60))
    parallel = sweep_deg2_exhaustive(box=2, q_range=(2, 60), workers=2)
    assert serial.to_dict() == parallel.to_dict()


def test_lemma3_witness_is_sharp():
    rep = lemma3_sweep(ns=[3], q_max=50)
    w = rep.info["prime_equality_witness"]
    q, d = w["q"], w["d"]
    count = int(np.sum(power_residues(q, 3) == (-d) % q))
    assert count == g_function(3, q) == 3


def test_verify_entry_points_accept_dicts():
    rep = verify_theorem3({"degrees": [2, 3], "q_range": [2, 40], "coeff_box": 2, "samples": 100,
                           "options": {"random_q_max": 300}})
    assert rep.ok and rep.target == "thm3" and rep.instances_checked > 100
    rep = verify_corollary2({"degrees": [2, 2], "q_range": [2, 60], "coeff_box": 2})
    assert rep.ok and rep.target == "cor2"
    rep = verify_theorem4({"degrees": [2, 4], "q_range": [2, 200], "options": {"two_power_alpha": 12}})
    assert rep.ok and rep.target == "thm4"


def test_all_monic_cubics_small_moduli():
    # every monic cubic mod q for q <= 24, roots by direct evaluation
    rep = RunReport("thm3")
    for q in range(2, 25):
        x = np.arange(q)
        cube = x**3 % q
        for a0 in range(q):
            for a1 in range(q):
                for a2 in range(q):
                    vals = (cube + a2 * x * x + a1 * x + a0) % q
                    check_poly_instance(rep, (a0, a1, a2, 1), q, np.flatnonzero(vals == 0).tolist(),
                                        {"thm3", "cor2"})
    assert rep.instances_checked == sum(q**3 for q in range(2, 25))
    assert rep.ok
