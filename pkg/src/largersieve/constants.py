"""The extremal constant c_s, a numerical maximizer for the product of
pairwise differences on [0, 1], and the explicit constants built from them."""

import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import prod

from .arith import primes_up_to
from .certified import PrecisionReal, ctx, enclose, hi, lo
from .errors import OutOfRange, PrecisionInsufficient

S_MAX = 10**6

# Euler-Mascheroni constant to 50 places; the enclosure radius is 1e-45.
EULER_GAMMA = "0.57721566490153286060651209008240243104215933593992"

_klogk_prefix = {}
_prefix_lock = threading.Lock()


def _klogk_sum(n, c):
    """Interval enclosing sum_{k=2}^{n} k log k (0 for n < 2), cached per precision."""
    if n < 2:
        return c.mpf(0)
    with _prefix_lock:
        table = _klogk_prefix.setdefault(c.prec, [c.mpf(0), c.mpf(0)])
        if len(table) <= n:
            acc = table[-1]
            for k in range(len(table), n + 1):
                acc = acc + k * c.log(k)
                table.append(acc)
        return table[n]


def log_c_s_times_binom(s, c):
    """Interval for s(s-1) log c_s.

    Collecting the j-sum by the value k of each ``k log k`` term gives
    3 * sum_{k<=s-2} + 2(s-1)log(s-1) - sum_{s<k<=2s-2}.
    """
    total = 3 * _klogk_sum(s - 2, c)
    if s - 1 >= 2:
        total = total + 2 * (s - 1) * c.log(s - 1)
    if 2 * s - 2 > s:
        total = total - (_klogk_sum(2 * s - 2, c) - _klogk_sum(s, c))
    return total


def c_s_interval(s, c):
    if not 2 <= s <= S_MAX:
        raise OutOfRange(f"c_s defined here for 2 <= s <= {S_MAX}, got {s}")
    return c.exp(log_c_s_times_binom(s, c) / (s * (s - 1)))


def c_s(s, prec=None):
    """Certified enclosure of the constant c_s (0**0 taken as 1)."""
    c = ctx(prec)
    return PrecisionReal.from_interval(c_s_interval(s, c))


@dataclass(frozen=True)
class FeketeConfig:
    s: int
    points: tuple
    product_value: float


def difference_product(points):
    return prod(b - a for a, b in combinations(sorted(points), 2))


def lemma1_oracle(s, grid_refinements=8, refinement_factor=10):
    """Maximize prod_{i<j}(xi_j - xi_i) over 0 <= xi_1 <= ... <= xi_s <= 1.

    Derivative-free: a coarse grid search over the interior points followed by
    coordinate-wise searches on successively finer grids. The endpoints are
    pinned at 0 and 1, which any maximizer must use.
    """
    if not 2 <= s <= 7:
        raise OutOfRange("lemma1_oracle is limited to 2 <= s <= 7")
    if s == 2:
        return FeketeConfig(2, (0.0, 1.0), 1.0)
    k = s - 2
    step = 1.0 / refinement_factor
    grid = [i * step for i in range(1, refinement_factor)]

    best, best_val = None, -1.0
    for inner in combinations_with_replacement(grid, k):
        val = difference_product((0.0, *inner, 1.0))
        if val > best_val:
            best, best_val = list(inner), val

    for _ in range(grid_refinements):
        step /= refinement_factor
        improved = True
        while improved:
            improved = False
            for i in range(k):
                left = best[i - 1] if i > 0 else 0.0
                right = best[i + 1] if i + 1 < k else 1.0
                centre = best[i]
                for t in range(-refinement_factor, refinement_factor + 1):
                    x = centre + t * step
                    if not left <= x <= right:
                        continue
                    trial = best.copy()
                    trial[i] = x
                    val = difference_product((0.0, *trial, 1.0))
                    if val > best_val:
                        best, best_val = trial, val
                        improved = True
    pts = (0.0, *best, 1.0)
    return FeketeConfig(s, pts, difference_product(pts))


def lemma2_rhs_interval(s, c):
    s_i = c.mpf(s)
    return c.exp((s_i * c.log(2 * s_i) + c.log(s_i) / 4) / (s * (s - 1))) / 4


@dataclass(frozen=True)
class Lemma2Row:
    s: int
    lhs: PrecisionReal
    rhs: PrecisionReal
    ok: bool


def lemma2_check(s_max, prec=None):
    """Certify c_s < exp((s log 2s + log(s)/4) / (s(s-1))) / 4 for 2 <= s <= s_max."""
    if s_max < 2:
        raise OutOfRange("s_max must be at least 2")
    c = ctx(prec)
    rows = []
    for s in range(2, s_max + 1):
        lhs = c_s_interval(s, c)
        rhs = lemma2_rhs_interval(s, c)
        if hi(lhs) < lo(rhs):
            ok = True
        elif lo(lhs) >= hi(rhs):
            ok = False
        else:
            raise PrecisionInsufficient(f"intervals overlap at s={s}")
        rows.append(Lemma2Row(s, PrecisionReal.from_interval(lhs), PrecisionReal.from_interval(rhs), ok))
    return rows


def euler_gamma_interval(c):
    g = Fraction(EULER_GAMMA)
    r = Fraction(1, 10**45)
    return c.mpf([enclose(g - r, c).a, enclose(g + r, c).b])


def remark_tail_bound(cutoff, prec=None):
    """Upper bound for sum_{n > cutoff} log n / (n^2 - 1).

    The summand decreases for n >= 2, so the sum is at most the integral from
    ``cutoff``, which is at most (log X + 1) / (X (1 - X^-2)).
    """
    if cutoff < 2:
        raise OutOfRange("cutoff must be at least 2")
    c = ctx(prec)
    x = c.mpf(cutoff)
    return hi((c.log(x) + 1) / (x * (1 - 1 / (x * x))))


@dataclass(frozen=True)
class RemarkConstant:
    partial: PrecisionReal  # primes <= cutoff only
    tail_bound: Fraction  # bound for 4 * (sum over primes > cutoff)
    enclosure: PrecisionReal  # contains the full constant
    cutoff: int


def remark_constant(prime_cutoff=10**6, prec=None):
    """Enclose 2 - log 2 + 2*gamma + 4 * sum_{p >= 3} log p / (p^2 - 1)."""
    if prime_cutoff < 1000:
        raise OutOfRange("prime_cutoff must be at least 1000")
    c = ctx(prec)
    acc = c.mpf(0)
    for p in primes_up_to(prime_cutoff)[1:].tolist():
        acc = acc + c.log(p) / (p * p - 1)
    partial = 2 - c.log(2) + 2 * euler_gamma_interval(c) + 4 * acc
    tail = 4 * remark_tail_bound(prime_cutoff, prec=c.prec)
    whole = c.mpf([partial.a, (partial + enclose(tail, c)).b])
    return RemarkConstant(
        PrecisionReal.from_interval(partial),
        tail,
        PrecisionReal.from_interval(whole),
        prime_cutoff,
    )


def certify_remark_bound(bound=Fraction("3.817"), prime_cutoff=10**6, prec=None):
    """True when the remark constant is certified <= ``bound``.

    Returns False when it is certified larger and raises PrecisionInsufficient
    when the enclosure straddles ``bound``.
    """
    rc = remark_constant(prime_cutoff, prec)
    if rc.enclosure.hi <= bound:
        return True
    if rc.enclosure.lo > bound:
        return False
    raise PrecisionInsufficient("enclosure straddles the bound; raise the prime cutoff")
