"""Exact integer arithmetic: factorization, arithmetic functions, CRT and
p-adic valuations of difference products."""

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd

import numpy as np
import sympy

from .certified import PrecisionReal, ctx
from .errors import DuplicateElements, NotCoprime, OutOfRange

FACTOR_CAP = 2**96
_SPF_LIMIT = 1 << 20


def _build_spf(limit):
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, int(limit**0.5) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    return spf


_spf = None


def _smallest_prime_factor_table():
    global _spf
    if _spf is None:
        _spf = _build_spf(_SPF_LIMIT)
    return _spf


def primes_up_to(n):
    """All primes ``p <= n`` as a numpy int64 array (sieve of Eratosthenes)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).astype(np.int64)


def is_prime(n):
    """Deterministic primality test (BPSW; proven exact below 2**64)."""
    return n >= 2 and bool(sympy.isprime(n))


@dataclass(frozen=True)
class Factored:
    """A positive integer stored with its prime factorization.

    ``factors`` is a tuple of ``(p, alpha)`` with strictly increasing primes.
    """

    value: int
    factors: tuple

    def __post_init__(self):
        prod = 1
        last = 1
        for p, a in self.factors:
            if p <= last or a < 1:
                raise ValueError(f"malformed factorization {self.factors!r}")
            last = p
            prod *= p**a
        if prod != self.value:
            raise ValueError(f"factors of {self.value} multiply out to {prod}")

    def __int__(self):
        return self.value

    def __index__(self):
        return self.value

    @property
    def primes(self):
        return tuple(p for p, _ in self.factors)

    def prime_powers(self):
        """The maximal prime powers ``p**alpha`` exactly dividing the value."""
        return [p**a for p, a in self.factors]

    def as_dict(self):
        return dict(self.factors)


@lru_cache(maxsize=1 << 16)
def _factorize(n):
    if n <= _SPF_LIMIT:
        spf = _smallest_prime_factor_table()
        counts = Counter()
        while n > 1:
            p = int(spf[n])
            counts[p] += 1
            n //= p
        return tuple(sorted(counts.items()))
    found = sympy.factorint(n, limit=None)
    for p in found:
        if not is_prime(p):
            raise ArithmeticError(f"factor {p} failed certification")
    return tuple(sorted((int(p), int(a)) for p, a in found.items()))


def factorize(n):
    """Factor ``2 <= n <= 2**96`` into a :class:`Factored`."""
    if isinstance(n, Factored):
        return n
    n = int(n)
    if n < 2 or n > FACTOR_CAP:
        raise OutOfRange(f"factorize expects 2 <= n <= 2**96, got {n}")
    return Factored(n, _factorize(n))


def as_factored(q):
    """Accept an int >= 1 or a Factored; 1 maps to the empty factorization."""
    if isinstance(q, Factored):
        return q
    q = int(q)
    if q == 1:
        return Factored(1, ())
    return factorize(q)


def prime_power_base(q):
    """Return ``p`` when ``q = p**j`` (j >= 1), else ``None``."""
    f = as_factored(q)
    if len(f.factors) == 1:
        return f.factors[0][0]
    return None


def von_mangoldt(q, prec=None):
    """Lambda(q) on the natural-log scale, as a certified real."""
    p = prime_power_base(q)
    c = ctx(prec)
    return PrecisionReal.from_interval(c.log(p) if p else c.mpf(0))


def omega(q):
    return len(as_factored(q).factors)


def phi(q):
    out = 1
    for p, a in as_factored(q).factors:
        out *= (p - 1) * p ** (a - 1)
    return out


def vp(q, p):
    """The exponent of the prime ``p`` in ``q`` (``q`` a nonzero integer)."""
    q = int(q)
    if q == 0:
        raise ValueError("v_p(0) is infinite")
    q = abs(q)
    k = 0
    while q % p == 0:
        q //= p
        k += 1
    return k


def _g_local(n, p, j):
    if p >= 3:
        return gcd(n, (p - 1) * p ** (j - 1))
    if j == 1:
        return 1
    if j == 2:
        return gcd(n, 2)
    return gcd(n, 2) * gcd(n, 2 ** (j - 2))


def g_function(n, q):
    """Upper bound for the number of roots of ``x**n + d`` mod ``q``, gcd(d, q) = 1.

    Multiplicative in ``q``; on a prime power it is gcd(n, phi(p**j)) for odd
    ``p`` and follows the (-1)**a * 5**b structure of the units mod 2**j.
    """
    if n < 2:
        raise ValueError("g_function needs n >= 2")
    out = 1
    for p, j in as_factored(q).factors:
        out *= _g_local(n, p, j)
    return out


def crt_combine(residues):
    """Combine ``[(r, m), ...]`` with pairwise coprime moduli.

    Returns ``(r, M)`` with ``0 <= r < M = prod(m)``.
    """
    r_acc, m_acc = 0, 1
    for r, m in residues:
        m = int(m)
        if m < 1:
            raise ValueError("moduli must be positive")
        if gcd(m_acc, m) != 1:
            raise NotCoprime(f"modulus {m} shares a factor with {m_acc}")
        # r_acc + m_acc * t == r (mod m)
        t = ((r - r_acc) * pow(m_acc, -1, m)) % m if m > 1 else 0
        r_acc += m_acc * t
        m_acc *= m
        r_acc %= m_acc
    return r_acc, m_acc


def _check_distinct(xs):
    xs = sorted(int(x) for x in xs)
    if len(xs) < 2:
        raise ValueError("need at least two elements")
    for a, b in zip(xs, xs[1:]):
        if a == b:
            raise DuplicateElements(f"repeated element {a}")
    return xs


def _vp_pair_count(xs, p):
    # v_p(prod of differences) = sum over k of #pairs congruent mod p**k
    total = 0
    pk = p
    xs = list(xs)
    while True:
        counts = Counter(x % pk for x in xs)
        pairs = sum(c * (c - 1) // 2 for c in counts.values())
        if pairs == 0:
            return total
        total += pairs
        pk *= p


def diff_product_valuations(xs, primes=None):
    """Prime valuations of ``prod_{i<j} (x_j - x_i)`` without forming it.

    With ``primes`` given only those primes are reported (zeros included);
    otherwise every prime dividing some difference appears.
    """
    xs = _check_distinct(xs)
    if primes is not None:
        return {p: _vp_pair_count(xs, p) for p in primes}
    profile = Counter()
    for a, b in combinations(xs, 2):
        d = b - a
        if d > 1:
            for p, e in factorize(d).factors:
                profile[p] += e
    return dict(sorted(profile.items()))


def generalized_divides(q, alpha, delta):
    """Whether ``q**alpha | Delta`` in the sense alpha*v_p(q) <= v_p(Delta) for all p.

    ``alpha`` is compared exactly as a Fraction; ``delta`` maps primes to
    valuations (missing primes count as 0).
    """
    alpha = Fraction(alpha)
    for p, a in as_factored(q).factors:
        if alpha * a > delta.get(p, 0):
            return False
    return True
