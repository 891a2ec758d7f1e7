"""Randomized and exhaustive property sweeps for the lattice sieve."""

import random
from fractions import Fraction
from itertools import combinations, product

from .errors import InvalidHypothesis
from .gaussian import GaussInt, gauss_class, gauss_gcd, gaussian_sieve_bound
from .harness import RunReport
from .lattice import (
    D,
    ExplicitT,
    LatticeBasis,
    LatticeSieveInstance,
    Parallelepiped,
    T_EXACT,
    hadamard_t_coefficient,
    lemma6_check,
    lemma7_check,
    max_D,
    t_bruteforce_oracle,
    theorem2_bound,
)

SMALL_PRIMES = [p for p in range(2, 80) if all(p % d for d in range(2, p))]


def lemma5_report(ms=range(1, 6)):
    rep = RunReport("lemma5")
    values = {}
    for m in ms:
        t = t_bruteforce_oracle(m)
        values[m] = t
        rep.instances_checked += 1
        if m in T_EXACT and t != T_EXACT[m]:
            rep.violation(check="lemma5_exact", m=m, oracle=t, expected=T_EXACT[m])
        if t > hadamard_t_coefficient(m):
            rep.violation(check="lemma5_upper", m=m, oracle=t, upper=hadamard_t_coefficient(m))
        rep.witness(t / hadamard_t_coefficient(m), m=m, t=t)
    rep.info = {"t": values, "upper": {m: hadamard_t_coefficient(m) for m in ms}}
    return rep.finalize()


def random_general_position(rng, m, size, box):
    """Greedy random points in [0, box]^m with no m+1 on a hyperplane."""
    chosen = []
    cells = list(product(range(box + 1), repeat=m))
    rng.shuffle(cells)
    for v in cells:
        if len(chosen) >= size:
            break
        if len(chosen) >= m and any(D(list(s) + [v]) == 0 for s in combinations(chosen, m)):
            continue
        chosen.append(v)
    return chosen


def _best_form_lattice(rng, points, p, m, tries=150):
    """Index-p lattice {x : c.x == 0 mod p} with c chosen to minimise the classes met."""
    if p ** (m - 1) <= tries:
        forms = [c for c in product(range(p), repeat=m) if any(c) and c[next(i for i in range(m) if c[i])] == 1]
    else:
        forms = [tuple(rng.randrange(p) for _ in range(m)) for _ in range(tries)]
        forms = [c for c in forms if any(c)]
    best = None
    for c in forms:
        nu = len({sum(a * x for a, x in zip(c, v)) % p for v in points})
        if best is None or nu < best[0]:
            best = (nu, c)
    return LatticeBasis.kernel_of_form(best[1], p), best[0]


def _region_for(rng, pts, m):
    if rng.random() < 0.6:
        lo = [min(v[i] for v in pts) for i in range(m)]
        hi = [max(v[i] for v in pts) for i in range(m)]
        return Parallelepiped.box(lo, hi)
    return ExplicitT(max_D(pts) * rng.choice([1, 1, 2, 3]))


def _spread_instance(rng, m):
    """Few points in a small box, many lattices with their best forms."""
    box = rng.randint(2, 6) if m == 2 else rng.randint(1, 3)
    pts = random_general_position(rng, m, rng.randint(m + 1, 10 if m == 2 else 8), box)
    if len(pts) < m + 1:
        return None
    lats = []
    for p in rng.sample(SMALL_PRIMES, rng.randint(1, len(SMALL_PRIMES))):
        if rng.random() < 0.2:
            L = LatticeBasis.scaled_identity(m, p)
            nu = len({L.class_of(v) for v in pts})
        else:
            L, nu = _best_form_lattice(rng, pts, p, m)
        if rng.random() < 0.1:
            nu = min(L.det_abs, nu + 1)
        lats.append((L, nu))
    return LatticeSieveInstance(m, tuple(pts), tuple(lats), _region_for(rng, pts, m))


def _clustered_instance(rng, m):
    """Points restricted to one or two classes of each lattice, so nu is tiny
    and the non-trivial branch of the bound is in play."""
    box = rng.randint(6, 30) if m == 2 else rng.randint(3, 9)
    primes = rng.sample(SMALL_PRIMES[:10], rng.randint(1, 5))
    lats, allowed = [], []
    for p in primes:
        c = [rng.randrange(p) for _ in range(m)]
        c[rng.randrange(m)] = 1
        L = LatticeBasis.kernel_of_form(c, p)
        lats.append(L)
        allowed.append({L.class_of(tuple(rng.randrange(p) for _ in range(m))) for _ in range(rng.randint(1, 2))})
    cells = [v for v in product(range(box + 1), repeat=m)
             if all(L.class_of(v) in ok for L, ok in zip(lats, allowed))]
    rng.shuffle(cells)
    pts = []
    for v in cells:
        if len(pts) >= m and any(D(list(s) + [v]) == 0 for s in combinations(pts, m)):
            continue
        pts.append(v)
        if len(pts) >= 12:
            break
    if len(pts) < m + 1:
        return None
    lats = tuple((L, len({L.class_of(v) for v in pts})) for L in lats)
    return LatticeSieveInstance(m, tuple(pts), lats, _region_for(rng, pts, m))


def construct_lattice_instance(rng, m, max_attempts=500):
    """A general-position instance with honest nu and b_m > 0, or None."""
    for _ in range(max_attempts):
        make = _clustered_instance if rng.random() < 0.5 else _spread_instance
        inst = make(rng, m)
        if inst is None:
            continue
        try:
            theorem2_bound(inst)
        except InvalidHypothesis:
            continue
        return inst
    return None


def theorem2_sweep(count=1000, seed=0, dims=(2, 3)):
    rng = random.Random(seed)
    rep = RunReport("thm2")
    trivial = first_wins = 0
    by_dim = {m: 0 for m in dims}
    while rep.instances_checked < count:
        m = dims[rep.instances_checked % len(dims)]
        inst = construct_lattice_instance(rng, m)
        if inst is None:
            continue
        inst.validate()
        res = theorem2_bound(inst)
        S = len(inst.points)
        rep.instances_checked += 1
        by_dim[m] += 1
        trivial += res.details["trivial_branch"]
        if not res.details["b_positive"]:
            rep.violation(check="b_i_positive", instance=inst.to_dict())
        first_wins += res.details["first_term"] > res.details["trivial_term"]
        if not res.admits(S) or not S < res.details["formula_bound"]:
            rep.violation(check="thm2", instance=inst.to_dict(), bound=float(res.bound))
        else:
            rep.witness(S / float(res.bound), m=m, points=S, bound=float(res.bound))
    rep.info = {"seed": seed, "by_dimension": by_dim, "trivial_branch": trivial, "first_term_dominates": first_wins}
    return rep.finalize()


def random_lemma6_input(rng):
    d = rng.randint(3, 8)
    n = rng.randint(1, 8)
    kind = rng.random()
    if kind < 0.3:
        # near the equal split, where the inequality is tight
        base = Fraction(rng.randint(d * 10, d * 40), 10)
        xs = [base + Fraction(rng.randint(-3, 3), rng.randint(50, 500)) for _ in range(n)]
    elif kind < 0.6:
        xs = [Fraction(rng.randint(1, 10 * d), rng.randint(1, 7)) for _ in range(n)]
    else:
        # a few tiny entries carried by one large one
        xs = [Fraction(1, rng.randint(1, 100)) for _ in range(n - 1)] + [Fraction(d * n * rng.randint(1, 5))]
    X = sum(xs)
    if X < d * n:
        xs[0] += d * n - X + Fraction(rng.randint(0, 20), rng.randint(1, 9))
    return d, xs


def lemma6_sweep(count=10**4, seed=0):
    rng = random.Random(seed)
    rep = RunReport("lemma6")
    for _ in range(count):
        d, xs = random_lemma6_input(rng)
        rep.instances_checked += 1
        if not lemma6_check(d, xs):
            rep.violation(check="lemma6", d=d, xs=[str(x) for x in xs])
    rep.info = {"seed": seed}
    return rep.finalize()


def _random_point_set(rng, m, size):
    kind = rng.random()
    side = rng.randint(2, 4) if m == 2 else rng.randint(1, 3)
    if kind < 0.4:
        cells = list(product(range(side + 1), repeat=m))
    elif kind < 0.7:
        # concentrate points on one hyperplane
        c = [rng.randint(-2, 2) for _ in range(m)]
        c[0] = c[0] or 1
        off = rng.randint(-3, 3)
        cells = [v for v in product(range(-4, 5), repeat=m) if sum(a * x for a, x in zip(c, v)) == off]
        cells += rng.sample(list(product(range(-4, 5), repeat=m)), 3)
    else:
        cells = list(product(range(10), repeat=m))
    cells = list(dict.fromkeys(cells))
    return rng.sample(cells, min(size, len(cells)))


def lemma7_sweep(count=2000, seed=0, exhaustive=True):
    rng = random.Random(seed)
    rep = RunReport("lemma7")

    def check(pts, origin):
        ok, n, K, S = lemma7_check(pts)
        rep.instances_checked += 1
        if not ok:
            rep.violation(check="lemma7", points=[list(v) for v in pts], K=K, S=S, origin=origin)

    for _ in range(count):
        m = rng.choice((2, 3))
        check(_random_point_set(rng, m, rng.randint(1, 12)), "random")
    if exhaustive:
        # every subset of the 3x3 grid and of the unit cube's vertices
        for cells in (list(product(range(3), repeat=2)), list(product(range(2), repeat=3))):
            for mask in range(1, 2 ** len(cells)):
                check([c for i, c in enumerate(cells) if mask >> i & 1], "exhaustive")
    rep.info = {"seed": seed}
    return rep.finalize()


GAUSS_PRIMES = [GaussInt(1, 1), GaussInt(2, 1), GaussInt(1, 2), GaussInt(3, 0), GaussInt(3, 2), GaussInt(2, 3),
                GaussInt(4, 1), GaussInt(1, 4), GaussInt(5, 2), GaussInt(2, 5), GaussInt(6, 1), GaussInt(1, 6),
                GaussInt(5, 4), GaussInt(4, 5), GaussInt(7, 0), GaussInt(7, 2), GaussInt(2, 7), GaussInt(6, 5)]


def gauss_sweep(count=2000, seed=0):
    """Random point sets in Z[i] with honest class counts: S <= bound when valid."""
    rng = random.Random(seed)
    rep = RunReport("gauss")
    valid = 0
    while rep.instances_checked < count:
        k = rng.randint(1, 8)
        moduli = []
        for q in rng.sample(GAUSS_PRIMES, len(GAUSS_PRIMES)):
            if all(gauss_gcd(q, r).is_unit() for r in moduli):
                moduli.append(q)
            if len(moduli) == k:
                break
        box = rng.randint(2, 12)
        allowed = {}
        for q in moduli:
            labels = sorted({gauss_class(GaussInt(a, b), q) for a in range(q.norm + 2) for b in range(q.norm + 2)})
            allowed[q] = set(rng.sample(labels, rng.randint(1, len(labels))))
        pts = [GaussInt(a, b) for a in range(box) for b in range(box)
               if all(gauss_class(GaussInt(a, b), q) in allowed[q] for q in moduli)]
        if len(pts) < 2:
            continue
        rep.instances_checked += 1
        res = gaussian_sieve_bound(moduli, points=pts)
        if res.valid:
            valid += 1
            if len(pts) > res.bound:
                rep.violation(check="gauss", moduli=[str(q) for q in moduli], points=[str(z) for z in pts])
            else:
                rep.witness(len(pts) / float(res.bound), points=len(pts), bound=float(res.bound))
    rep.info = {"seed": seed, "valid_instances": valid}
    return rep.finalize()
