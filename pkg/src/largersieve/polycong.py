"""Polynomial congruences: roots modulo primes, prime powers and composite
moduli, and root counts in short intervals."""

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, log

import numpy as np
from sympy import integer_nthroot

from .arith import (
    as_factored,
    crt_combine,
    diff_product_valuations,
    generalized_divides,
    is_prime,
    omega,
)
from .certified import ctx, hi, lo
from .errors import (
    CapExceeded,
    ContentNotCoprime,
    DegenerateModP,
    DomainError,
    NotRoots,
    OutOfRange,
    PrecisionInsufficient,
)

PRIME_SCAN_CAP = 10**7
HENSEL_CAP = 10**9
WIDTH_CAP = 10**6


@dataclass(frozen=True)
class IntPoly:
    """Integer polynomial with coefficients stored low degree first."""

    coeffs: tuple

    def __post_init__(self):
        cs = [int(a) for a in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        if len(cs) < 2:
            raise ValueError("polynomial must have degree >= 1")
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def parse(cls, text):
        """Parse ``"a0,a1,...,an"``."""
        return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))

    @classmethod
    def from_roots(cls, roots, lead=1):
        cs = [lead]
        for r in roots:
            # multiply by (x - r)
            nxt = [0] * (len(cs) + 1)
            for i, a in enumerate(cs):
                nxt[i + 1] += a
                nxt[i] -= r * a
            cs = nxt
        return cls(tuple(cs))

    @classmethod
    def monomial_plus(cls, n, d):
        """x**n + d."""
        return cls((d,) + (0,) * (n - 1) + (1,))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def content(self):
        g = 0
        for a in self.coeffs:
            g = gcd(g, a)
        return g

    def __call__(self, x):
        acc = 0
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def eval_mod(self, x, m):
        acc = 0
        for a in reversed(self.coeffs):
            acc = (acc * x + a) % m
        return acc

    def derivative_coeffs(self):
        return tuple(i * a for i, a in enumerate(self.coeffs))[1:]

    def eval_derivative_mod(self, x, m):
        acc = 0
        for a in reversed(self.derivative_coeffs()):
            acc = (acc * x + a) % m
        return acc

    def values_mod(self, m, xs=None):
        """P(x) mod m at ``xs`` (default every x in [0, m)) as a numpy array.

        Needs m * m < 2**63.
        """
        x = np.arange(m, dtype=np.int64) if xs is None else np.asarray(xs, dtype=np.int64) % m
        acc = np.zeros(len(x), dtype=np.int64)
        for a in reversed(self.coeffs):
            acc = (acc * x + (a % m)) % m
        return acc

    def __str__(self):
        return ",".join(str(a) for a in self.coeffs)


@dataclass(frozen=True)
class SolutionSet:
    """Sorted residues in [0, modulus) that are roots of ``poly``.

    The constructor re-substitutes every root.
    """

    poly: IntPoly
    modulus: int
    roots: tuple

    def __post_init__(self):
        roots = tuple(sorted(int(r) for r in self.roots))
        if len(set(roots)) != len(roots):
            raise ValueError("duplicate roots")
        m = int(self.modulus)
        if roots and (roots[0] < 0 or roots[-1] >= m):
            raise NotRoots(f"roots must lie in [0, {m})")
        if len(roots) > 32 and m < 2**31:
            bad = np.flatnonzero(self.poly.values_mod(m, roots))
            if len(bad):
                raise NotRoots(f"{roots[bad[0]]} is not a root of {self.poly} mod {m}")
        else:
            for r in roots:
                if self.poly.eval_mod(r, m):
                    raise NotRoots(f"{r} is not a root of {self.poly} mod {m}")
        object.__setattr__(self, "roots", roots)
        object.__setattr__(self, "modulus", m)

    def __len__(self):
        return len(self.roots)


def roots_mod_prime(P, p):
    """All roots of ``P`` modulo the prime ``p`` by exhaustive scan."""
    if p > PRIME_SCAN_CAP:
        raise OutOfRange(f"prime {p} above scan cap {PRIME_SCAN_CAP}")
    if all(a % p == 0 for a in P.coeffs):
        raise DegenerateModP(f"{P} vanishes identically mod {p}")
    if p < 64:
        roots = [x for x in range(p) if P.eval_mod(x, p) == 0]
    else:
        roots = np.flatnonzero(P.values_mod(p) == 0).tolist()
    return SolutionSet(P, p, roots)


def _lift_level(P, roots, p, pk, width_cap):
    """Lift roots mod p**k to roots mod p**(k+1)."""
    nxt_mod = pk * p
    out = []
    for r in roots:
        val = P.eval_mod(r, nxt_mod)
        d = P.eval_derivative_mod(r, p)
        if d:
            # unique lift: val + t*pk*P'(r) == 0 mod p**(k+1)
            t = (-(val // pk) * pow(d, -1, p)) % p
            out.append(r + t * pk)
        elif val == 0:
            # singular root: P(r + t*pk) == P(r) mod p**(k+1) for every t
            out.extend(r + t * pk for t in range(p))
        if len(out) > width_cap:
            raise CapExceeded(f"more than {width_cap} candidates mod {nxt_mod}")
    return out


def hensel_lift(P, p, alpha, cap=HENSEL_CAP, width_cap=WIDTH_CAP):
    """Roots of ``P`` modulo ``p**alpha`` by lifting the roots mod ``p``."""
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    if p**alpha > cap:
        raise CapExceeded(f"{p}**{alpha} exceeds cap {cap}")
    try:
        roots = list(roots_mod_prime(P, p).roots)
    except DegenerateModP:
        roots = list(range(p))
    pk = p
    for _ in range(alpha - 1):
        roots = _lift_level(P, roots, p, pk, width_cap)
        pk *= p
    return SolutionSet(P, pk, roots)


def _check_content(P, q):
    if gcd(P.content, int(q)) != 1:
        raise ContentNotCoprime(f"content of {P} shares a factor with {int(q)}")


def _crt_merge(r1, m1, r2, m2):
    # e1 == 1 mod m1, 0 mod m2 and e2 the other way round
    e1, m = crt_combine([(1, m1), (0, m2)])
    e2, _ = crt_combine([(0, m1), (1, m2)])
    return [(a * e1 + b * e2) % m for a in r1 for b in r2], m


def solve_mod_q(P, q, cap=HENSEL_CAP, width_cap=WIDTH_CAP):
    """All roots of ``P`` modulo ``q`` (prime powers by lifting, glued by CRT)."""
    q = as_factored(q)
    _check_content(P, q.value)
    roots, m = [0], 1
    for p, a in q.factors:
        local = hensel_lift(P, p, a, cap, width_cap)
        roots, m = _crt_merge(roots, m, local.roots, local.modulus)
        if len(roots) > width_cap:
            raise CapExceeded("too many roots")
    return SolutionSet(P, q.value, roots)


def brute_roots(P, q):
    """Roots of ``P`` mod ``q`` by direct scan; the oracle for ``solve_mod_q``."""
    q = int(q)
    if q * q < 2**62:
        return np.flatnonzero(P.values_mod(q) == 0).tolist()
    return [x for x in range(q) if P.eval_mod(x, q) == 0]


@dataclass(frozen=True)
class IntervalI:
    """Closed integer interval ``[start, start + count - 1]`` (``count`` points).

    Its real length is ``count - 1``.
    """

    start: int
    count: int

    def __post_init__(self):
        if self.count < 0:
            raise ValueError("count must be non-negative")

    @property
    def length(self):
        return max(self.count - 1, 0)

    @property
    def stop(self):
        return self.start + self.count - 1

    def admissible(self, q, n, interpretation="measure"):
        return self.count <= max_admissible_points(int(q), n, interpretation)


def max_admissible_points(q, n, interpretation="measure"):
    """Most integers an interval of length at most q**(1/n) can hold.

    ``measure``: real length (count - 1) <= q**(1/n), i.e. (count-1)**n <= q;
    ``count``: the number of integers itself, count**n <= q.
    The measure reading admits one more point and is the conservative one.
    """
    r, _ = integer_nthroot(int(q), n)
    if interpretation == "measure":
        return int(r) + 1
    if interpretation == "count":
        return int(r)
    raise ValueError(f"unknown interpretation {interpretation!r}")


def _count_roots_upto(roots, q, x):
    """#{0 <= y <= x : y mod q in roots} for x >= -1."""
    if x < 0:
        return 0
    full, rem = divmod(x + 1, q)
    return full * len(roots) + bisect_left(roots, rem)


def count_in_interval(P, q, interval, roots=None):
    """Number W of x in the interval with P(x) == 0 mod q, and the witnesses."""
    q = as_factored(q)
    if roots is None:
        roots = solve_mod_q(P, q).roots
    if interval.count == 0:
        return 0, []
    a, b = interval.start, interval.stop
    shift = -(a // q.value) * q.value  # move start into [0, q)
    W = _count_roots_upto(roots, q.value, b + shift) - _count_roots_upto(roots, q.value, a + shift - 1)
    witnesses = []
    if W <= 10_000:
        base = a - (a % q.value)
        k = base
        while k <= b:
            for r in roots:
                if a <= k + r <= b:
                    witnesses.append(k + r)
            k += q.value
    return W, witnesses


def max_window_count(roots, q, ell):
    """Max over all intervals of ``ell`` consecutive integers of the number of
    points congruent to a root; returns (count, start)."""
    n_roots = len(roots)
    if ell <= 0 or n_roots == 0:
        return 0, 0
    full, r = divmod(ell, q)
    best, best_start = 0, roots[0]
    if r:
        ext = list(roots) + [x + q for x in roots]
        for i in range(n_roots):
            c = bisect_right(ext, ext[i] + r - 1) - i
            if c > best:
                best, best_start = c, ext[i]
    return full * n_roots + best, best_start


def min_points_for(roots, q, k):
    """Fewest consecutive integers containing ``k`` points congruent to roots."""
    if k <= 0:
        return 0
    if not roots:
        return None
    return int(min_points_table(roots, q, k)[k])


def min_points_table(roots, q, k_max):
    """Array t with t[k] = fewest consecutive integers holding k root points."""
    n_roots = len(roots)
    periods = (k_max - 1) // n_roots + 2
    base = np.asarray(roots, dtype=np.int64)
    ext = (base[None, :] + q * np.arange(periods, dtype=np.int64)[:, None]).ravel()
    out = np.zeros(k_max + 1, dtype=np.int64)
    for k in range(1, k_max + 1):
        out[k] = (ext[k - 1:k - 1 + n_roots] - ext[:n_roots]).min() + 1
    return out


def theorem3_bound(n, q):
    """2 (n - 1)**2 omega(q)."""
    return 2 * (n - 1) ** 2 * omega(q)


def theorem4_bound(n, q):
    """n omega(q), for x**n + d."""
    return n * omega(q)


def corollary2_holds(W, n, q, points):
    """Exact test of W <= 2(n-1)^2 omega(q) (L / q^(1/n) + 1) with L = points - 1."""
    C = theorem3_bound(n, q)
    if W <= C:
        return True
    L = max(points - 1, 0)
    return (W - C) ** n * q <= C**n * L**n


def corollary2_bound(n, q, L):
    return theorem3_bound(n, q) * (L / q ** (1 / n) + 1)


def remark_log_bound(P, q, interval=None, prec=None):
    """(1 - 1/n) log q / log 4 + log log q / log 4 + 3, as a certified interval."""
    q = int(q)
    if q < 3:
        raise DomainError("the log-log bound needs q >= 3")
    n = P.degree if isinstance(P, IntPoly) else int(P)
    if interval is not None and not interval.admissible(q, n):
        raise DomainError("interval longer than q**(1/n)")
    c = ctx(prec)
    lq = c.log(q)
    return (1 - c.mpf(1) / n) * lq / c.log(4) + c.log(lq) / c.log(4) + 3


def remark_log_bound_float(n, q):
    return (1 - 1 / n) * log(q) / log(4) + log(log(q)) / log(4) + 3


def remark_holds(W, n, q):
    """Certified W < remark bound; float fast path with an interval fallback."""
    rhs = remark_log_bound_float(n, q)
    if W < rhs - 1e-9:
        return True
    if W > rhs + 1e-9:
        return False
    iv = remark_log_bound(n, q)
    if W < lo(iv):
        return True
    if W >= hi(iv):
        return False
    raise PrecisionInsufficient("remark bound too close to an integer")


def lemma4_exponent(s, n):
    return Fraction(s * s, 2 * n) - Fraction(s, 2)


def verify_lemma4(P, q, xs, n=None):
    """q**(s^2/(2n) - s/2) | prod (x_j - x_i) for roots x_1 < ... < x_s, s >= n+1."""
    q = as_factored(q)
    n = P.degree if n is None else n
    xs = sorted(set(int(x) for x in xs))
    if len(xs) <= n:
        raise ValueError(f"need at least n + 1 = {n + 1} roots, got {len(xs)}")
    for x in xs:
        if P.eval_mod(x, q.value):
            raise NotRoots(f"{x} is not a root mod {q.value}")
    profile = diff_product_valuations(xs, primes=q.primes)
    return generalized_divides(q, lemma4_exponent(len(xs), n), profile)


def svk_ratio_explorer(P, q):
    """N(P, q) / q**(1 - 1/n); exploratory, no bound is asserted."""
    N = len(solve_mod_q(P, q).roots)
    return N / int(q) ** (1 - 1 / P.degree)


def is_prime_modulus(q):
    return is_prime(int(q))
