"""Zero-violation sweeps for the polynomial congruence bounds.

Root sets come from two independent routes: numpy brute scans (exhaustive
sweeps) and ``solve_mod_q`` (randomized sweeps), cross-checked on samples.
"""

import heapq
import random
from functools import partial
from math import gcd

import numpy as np

from .arith import as_factored, g_function, is_prime, omega, primes_up_to
from .errors import ContentNotCoprime
from .harness import RunReport, SweepConfig, run_chunks, split_range
from .polycong import (
    IntPoly,
    brute_roots,
    corollary2_holds,
    hensel_lift,
    max_admissible_points,
    max_window_count,
    min_points_table,
    remark_holds,
    solve_mod_q,
    theorem3_bound,
    verify_lemma4,
)

POLY_TARGETS = frozenset({"thm3", "cor2", "remark", "lemma4"})


def check_poly_instance(rep, coeffs, q, roots, targets, policy="measure"):
    """Run the selected per-instance checks on one (P, q, roots mod q)."""
    n = len(coeffs) - 1
    rep.instances_checked += 1
    N = len(roots)
    if N == 0:
        return
    bound = theorem3_bound(n, q)
    ell = max_admissible_points(q, n, policy)
    W, start = max_window_count(roots, q, ell)
    if "thm3" in targets:
        if W > bound:
            rep.violation(check="thm3", coeffs=list(coeffs), q=q, start=start, points=ell, W=W, bound=bound)
        elif W * 2 >= bound:
            rep.witness(W / bound, check="thm3", coeffs=list(coeffs), q=q, start=start, points=ell, W=W)
    if "remark" in targets and q >= 3 and not remark_holds(W, n, q):
        rep.violation(check="remark", coeffs=list(coeffs), q=q, start=start, points=ell, W=W)
    if "cor2" in targets and N + 1 > bound:
        # only counts above the Theorem 3 constant can break the scaled bound
        table = min_points_table(roots, q, N + 1)
        for k in range(bound + 1, N + 2):
            pts = int(table[k])
            if pts - 1 > q:
                break
            if not corollary2_holds(k, n, q, pts):
                rep.violation(check="cor2", coeffs=list(coeffs), q=q, W=k, points=pts)
    if "lemma4" in targets and N >= n + 1:
        P = IntPoly(tuple(coeffs))
        rep.info["lemma4_instances"] = rep.info.get("lemma4_instances", 0) + 1
        for xs in (roots, roots[: n + 1]):
            if not verify_lemma4(P, q, xs, n):
                rep.violation(check="lemma4", coeffs=list(coeffs), q=q, roots=list(xs))


def _deg2_box(box):
    rows = [(a0, a1, a2) for a2 in range(-box, box + 1) if a2
            for a1 in range(-box, box + 1) for a0 in range(-box, box + 1)]
    return np.array(rows, dtype=np.int64)


def _deg2_chunk(qs, box, targets, policy):
    lo_q, hi_q = qs
    polys = _deg2_box(box)
    content = np.gcd.reduce(np.abs(polys), axis=1)
    rep = RunReport("thm3")
    skipped = 0
    for q in range(lo_q, hi_q + 1):
        x = np.arange(q, dtype=np.int64)
        x2 = x * x % q
        vals = (polys[:, 2:3] % q * x2 + polys[:, 1:2] % q * x + polys[:, 0:1] % q) % q
        rows, cols = np.nonzero(vals == 0)
        cuts = np.searchsorted(rows, np.arange(len(polys) + 1))
        coprime = np.gcd(content, q) == 1
        skipped += int((~coprime).sum())
        for i in np.flatnonzero(coprime):
            roots = cols[cuts[i]:cuts[i + 1]].tolist()
            check_poly_instance(rep, tuple(int(a) for a in polys[i]), q, roots, targets, policy)
    rep.info["skipped_content"] = skipped
    return rep


def sweep_deg2_exhaustive(box=5, q_range=(2, 1000), targets=POLY_TARGETS, policy="measure", workers=1):
    """Every degree-2 polynomial with coefficients in [-box, box], every q."""
    chunks = split_range(q_range[0], q_range[1], max(1, workers) * 8)
    fn = partial(_deg2_chunk, box=box, targets=frozenset(targets), policy=policy)
    rep = run_chunks(fn, chunks, workers, target="thm3")
    rep.info["source"] = f"degree 2, box {box}, q in [{q_range[0]}, {q_range[1]}]"
    return rep


def random_modulus(rng, q_max):
    kind = rng.randrange(3)
    if kind == 0:
        return rng.randrange(2, q_max + 1)
    small = [2, 3, 5, 7, 11, 13]
    if kind == 1:
        p = rng.choice(small + [17, 19, 23, 29, 31])
        q = p
        while q * p <= q_max and rng.random() < 0.8:
            q *= p
        return q
    q = 1
    for _ in range(8):
        p = rng.choice(small)
        if q * p <= q_max:
            q *= p
    return max(q, 2)


def random_poly(rng, n, q, box=50):
    """A degree-n polynomial; half of them built from clustered roots mod q."""
    kind = rng.random()
    if kind < 0.4:
        coeffs = [rng.randint(-box, box) for _ in range(n)] + [rng.choice([-1, 1]) * rng.randint(1, box)]
        return IntPoly(tuple(coeffs))
    if kind < 0.85:
        divisors = [d for d in range(1, q + 1) if q % d == 0]
        step = rng.choice(divisors[: max(1, len(divisors) // 2 + 1)])
        base = rng.randrange(q)
        roots = [base + step * rng.randrange(0, q // step + 1) for _ in range(n)]
        return IntPoly.from_roots(roots, lead=rng.choice([1, -1, 1, 2, 3]))
    d = rng.randrange(q)
    return IntPoly.monomial_plus(n, d)


def sweep_random(degrees=(3, 4), count=10**5, q_max=10**4, seed=0, targets=POLY_TARGETS,
                 policy="measure", crosscheck_every=100):
    """Seeded random instances solved through Hensel lifting and CRT."""
    rng = random.Random(seed)
    rep = RunReport("thm3")
    mismatches = 0
    done = 0
    while done < count:
        n = rng.randint(degrees[0], degrees[1])
        q = random_modulus(rng, q_max)
        P = random_poly(rng, n, q)
        try:
            roots = list(solve_mod_q(P, q).roots)
        except ContentNotCoprime:
            continue
        if crosscheck_every and done % crosscheck_every == 0 and roots != brute_roots(P, q):
            mismatches += 1
            rep.violation(check="solve_mod_q", coeffs=list(P.coeffs), q=q)
        check_poly_instance(rep, P.coeffs, q, roots, targets, policy)
        done += 1
    rep.info["source"] = f"{count} random instances, degrees {degrees}, q <= {q_max}, seed {seed}"
    rep.info["crosscheck_mismatches"] = mismatches
    return rep.finalize()


def theorem3_sweep(targets=POLY_TARGETS, box=5, q_max=1000, random_count=10**5, random_q_max=10**4,
                   degrees=(3, 4), seed=0, policy="measure", workers=1, target="thm3", q_min=2,
                   exhaustive=True):
    """The exhaustive degree-2 sweep followed by the randomized one."""
    rep = RunReport(target)
    info = {"interval_policy": policy}
    if exhaustive:
        ex = sweep_deg2_exhaustive(box, (q_min, q_max), targets, policy, workers)
        info["exhaustive"] = ex.info["source"]
        info["skipped_content"] = ex.info.get("skipped_content", 0)
        rep.merge(ex)
    if random_count:
        rnd = sweep_random(degrees, random_count, random_q_max, seed, targets, policy)
        info["random"] = rnd.info["source"]
        info["crosscheck_mismatches"] = rnd.info["crosscheck_mismatches"]
        rep.merge(rnd)
    if "lemma4_instances" in rep.info:
        info["lemma4_instances"] = rep.info["lemma4_instances"]
    rep.info = info
    return rep.finalize()


def _as_config(config, target):
    if isinstance(config, SweepConfig):
        return config
    return SweepConfig.from_dict({k: v for k, v in dict(config).items() if k != "target"}, target)


def short_interval_sweep(cfg):
    """Degree-2 exhaustive plus random sweep checking only ``cfg.target``."""
    lo, hi = cfg.degrees
    return theorem3_sweep(
        targets={cfg.target}, box=cfg.coeff_box, q_min=cfg.q_range[0], q_max=cfg.q_range[1],
        exhaustive=lo <= 2 <= hi, random_count=cfg.samples if hi >= 3 else 0,
        random_q_max=cfg.options.get("random_q_max", 10**4), degrees=(max(lo, 3), hi), seed=cfg.seed,
        policy=cfg.interval_policy, workers=cfg.workers, target=cfg.target)


def verify_theorem3(config):
    """W <= 2(n-1)^2 omega(q) on admissible intervals over the configured sweep."""
    return short_interval_sweep(_as_config(config, "thm3"))


def verify_corollary2(config):
    """The length-scaled bound for every root count above the constant, any length up to q."""
    return short_interval_sweep(_as_config(config, "cor2"))


def verify_theorem4(config):
    """W <= n omega(q) for x^n + d, all d in [0, q), plus the 2-power moduli."""
    cfg = _as_config(config, "thm4")
    o = cfg.options
    return theorem4_sweep(
        ns=range(cfg.degrees[0], cfg.degrees[1] + 1), q_min=cfg.q_range[0], q_max=cfg.q_range[1],
        two_power_alpha=o.get("two_power_alpha", 20), two_power_ns=o.get("two_power_ns", (2, 4, 8, 16)),
        policy=cfg.interval_policy, workers=cfg.workers)


def power_residues(q, n):
    """x**n mod q for x in [0, q)."""
    x = np.arange(q, dtype=np.int64)
    acc = np.ones(q, dtype=np.int64) % q
    base, e = x % q, n
    while e:
        if e & 1:
            acc = acc * base % q
        base = base * base % q
        e >>= 1
    return acc


def window_max_by_value(values, q, ell):
    """For every residue v, the max number of x in a window of ``ell``
    consecutive integers with values[x mod q] == v (ell <= q)."""
    x = np.arange(q, dtype=np.int64)
    keys = np.sort(values * q + x)
    v = keys // q
    xs = keys % q
    end = xs + ell - 1
    inside = np.minimum(end, q - 1)
    cnt = np.searchsorted(keys, v * q + inside, side="right") - np.arange(q)
    wrap = end >= q
    cnt[wrap] += (np.searchsorted(keys, v[wrap] * q + (end[wrap] - q), side="right")
                  - np.searchsorted(keys, v[wrap] * q, side="left"))
    best = np.zeros(q, dtype=np.int64)
    np.maximum.at(best, v, cnt)
    return best


def _thm4_one(rep, q, n, policy):
    ell = min(max_admissible_points(q, n, policy), q)
    best = window_max_by_value(power_residues(q, n), q, ell)
    bound = n * omega(q)
    rep.instances_checked += q
    W = int(best.max())
    v = int(best.argmax())
    d = (-v) % q
    if W > bound:
        for v in np.flatnonzero(best > bound).tolist():
            rep.violation(check="thm4", n=n, q=q, d=(-v) % q, W=int(best[v]), bound=bound)
    elif 2 * W >= bound:
        rep.witness(W / bound, check="thm4", n=n, q=q, d=d, points=ell, W=W)


def _thm4_chunk(qs, ns, policy):
    rep = RunReport("thm4")
    for n in ns:
        for q in range(qs[0], qs[1] + 1):
            _thm4_one(rep, q, n, policy)
    return rep


def theorem4_sweep(ns=(2, 3, 4), q_max=3000, two_power_alpha=20, two_power_ns=(2, 4, 8, 16),
                   policy="measure", workers=1, q_min=2):
    """x**n + d for every d in [0, q): all q in [q_min, q_max], then q = 2**alpha."""
    chunks = split_range(q_min, q_max, max(1, workers) * 8)
    rep = run_chunks(partial(_thm4_chunk, ns=tuple(ns), policy=policy), chunks, workers, target="thm4")
    two = RunReport("thm4")
    for n in two_power_ns:
        for a in range(1, two_power_alpha + 1):
            _thm4_one(two, 2**a, n, policy)
    rep.merge(two)
    rep.info = {"ns": list(ns), "q_max": q_max, "two_power_alpha": two_power_alpha,
                "two_power_ns": list(two_power_ns), "interval_policy": policy}
    return rep.finalize()


def theorem4_library_crosscheck(samples=300, q_max=3000, seed=0, policy="measure"):
    """Compare the vectorized window maxima against solve_mod_q + max_window_count."""
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        n = rng.choice((2, 3, 4))
        q = rng.randrange(2, q_max + 1)
        d = rng.randrange(q)
        ell = min(max_admissible_points(q, n, policy), q)
        best = window_max_by_value(power_residues(q, n), q, ell)
        roots = solve_mod_q(IntPoly.monomial_plus(n, d), q).roots
        W, _ = max_window_count(list(roots), q, ell)
        if W != int(best[(-d) % q]):
            bad.append((n, q, d))
    return bad


def lemma3_sweep(ns=range(2, 9), q_max=5000, q_min=2):
    """Root counts of x**n + d with gcd(d, q) = 1 against g(n, q)."""
    rep = RunReport("lemma3")
    sharp = 0
    witness = None
    for n in ns:
        for q in range(q_min, q_max + 1):
            counts = np.bincount(power_residues(q, n), minlength=q)
            units = np.gcd(np.arange(q), q) == 1
            g = g_function(n, q)
            unit_counts = counts[units]
            rep.instances_checked += int(units.sum())
            top = int(unit_counts.max())
            if top > g:
                for v in np.flatnonzero(units & (counts > g)).tolist():
                    rep.violation(check="lemma3", n=n, q=q, d=(-v) % q, count=int(counts[v]), g=g)
            if top == g:
                sharp += 1
                if witness is None and q % 2 and q % n == 1 and is_prime(q):
                    v = int(np.flatnonzero(units & (counts == g))[0])
                    witness = {"n": n, "q": q, "d": (-v) % q, "count": g, "g": g}
    rep.info = {"sharp_pairs": sharp, "prime_equality_witness": witness, "q_max": q_max, "ns": list(ns)}
    return rep.finalize()


_PRIMES_1E6 = None


def _primes_1e6():
    global _PRIMES_1E6
    if _PRIMES_1E6 is None:
        _PRIMES_1E6 = primes_up_to(10**6).tolist()
    return _PRIMES_1E6


def random_prime_power(rng, limit=10**6):
    """A prime power <= limit, biased toward small primes and high exponents."""
    u = rng.random()
    primes = _primes_1e6()
    if u < 0.6:
        p = rng.choice(primes[:15])
    elif u < 0.96:
        p = rng.choice(primes[15:168])
    else:
        p = rng.choice(primes)
    top = 1
    while p ** (top + 1) <= limit:
        top += 1
    return p, rng.randint(1, top)


def random_hensel_poly(rng, p):
    """Random polynomial of degree 1..6, often with repeated or clustered roots."""
    n = rng.randint(1, 6)
    u = rng.random()
    if u < 0.4:
        return IntPoly(tuple(rng.randint(-100, 100) for _ in range(n)) + (rng.choice([-3, -2, -1, 1, 2, 3]),))
    if u < 0.8:
        r = rng.randrange(p)
        roots = [r + p * rng.randrange(4) if rng.random() < 0.6 else rng.randrange(p * p) for _ in range(n)]
        return IntPoly.from_roots(roots, lead=rng.choice([1, -1, 2, p]))
    k = rng.randint(1, 3)
    base = IntPoly.from_roots([rng.randrange(p)] * n)
    return IntPoly(tuple(a * (p**k if i < n else 1) for i, a in enumerate(base.coeffs)))


def hensel_sweep(count=10**4, seed=0, limit=10**6):
    """hensel_lift against a brute scan for seeded (polynomial, p**alpha) pairs."""
    rng = random.Random(seed)
    rep = RunReport("hensel")
    for _ in range(count):
        p, a = random_prime_power(rng, limit)
        P = random_hensel_poly(rng, p)
        q = p**a
        lifted = list(hensel_lift(P, p, a).roots)
        rep.instances_checked += 1
        if lifted != brute_roots(P, q):
            rep.violation(check="hensel", coeffs=list(P.coeffs), p=p, alpha=a)
        elif len(lifted) > 1 and P.content % p:
            rep.witness(len(lifted) / q ** (1 - 1 / P.degree) if P.degree > 1 else 0.0,
                        check="hensel", coeffs=list(P.coeffs), p=p, alpha=a, roots=len(lifted))
    rep.info = {"seed": seed, "limit": limit}
    return rep.finalize()


def crt_multiplicativity_holds(P, q1, q2):
    if gcd(q1, q2) != 1:
        raise ValueError("moduli must be coprime")
    return len(solve_mod_q(P, q1 * q2)) == len(solve_mod_q(P, q1)) * len(solve_mod_q(P, q2))


def window_search(degrees=(2, 4), q_max=10**4, count=5000, seed=0, policy="measure", top=5):
    """Instances with the largest W / (2 (n-1)^2 omega(q)) over admissible windows."""
    rng = random.Random(seed)
    best = []
    done = 0
    while done < count:
        n = rng.randint(degrees[0], degrees[1])
        q = random_modulus(rng, q_max)
        P = random_poly(rng, n, q)
        try:
            roots = list(solve_mod_q(P, q).roots)
        except ContentNotCoprime:
            continue
        ell = max_admissible_points(q, n, policy)
        W, start = max_window_count(roots, q, ell)
        entry = (W / theorem3_bound(n, q), -done, {"coeffs": list(P.coeffs), "q": q, "start": start,
                                                   "points": ell, "W": W})
        if len(best) < top:
            heapq.heappush(best, entry)
        else:
            heapq.heappushpop(best, entry)
        done += 1
    rep = RunReport("search")
    rep.instances_checked = done
    rep.extremal_witnesses = [{"ratio": r, "check": "window", **w} for r, _, w in sorted(best, reverse=True)]
    return rep


def svk_search(degrees=(2, 4), q_max=2000, count=2000, seed=0):
    """Largest N(P, q) / q**(1 - 1/n) ratios over random instances (exploratory)."""
    rng = random.Random(seed)
    rep = RunReport("search")
    done = 0
    while done < count:
        n = rng.randint(degrees[0], degrees[1])
        q = random_modulus(rng, q_max)
        P = random_poly(rng, n, q)
        try:
            N = len(solve_mod_q(P, q))
        except ContentNotCoprime:
            continue
        done += 1
        rep.instances_checked += 1
        rep.witness(N / q ** (1 - 1 / n), check="svk_ratio", coeffs=list(P.coeffs), q=q, N=N)
    return rep.finalize()


def as_q(q):
    return as_factored(q).value
