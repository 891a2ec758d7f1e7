"""One-dimensional larger sieve bounds.

Four evaluators share one certified ratio routine:

* ``gallagher_bound``: the classical inequality with von Mangoldt weights;
* ``theorem1_bound``: log q weights with the extremal constant c_S folded
  into the interval length, for pairwise coprime moduli;
* ``theorem1_lambda_variant``: the same with von Mangoldt weights;
* ``corollary1_bound``: the explicit form with the additive constant 1.38,
  valid once S exceeds 1243.

``verify_instance`` checks an explicit element set against all of them and
against the divisibility of the difference product that drives the proofs.
"""

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .arith import (
    as_factored,
    diff_product_valuations,
    generalized_divides,
    prime_power_base,
    primes_up_to,
)
from .certified import PrecisionReal, certainly_positive, ctx, enclose, hi, lo
from .constants import log_c_s_times_binom
from .errors import InstanceInconsistent, NotPairwiseCoprime

COROLLARY1_SHIFT = Fraction("1.38")
COROLLARY1_FLOOR = 1243
# Largest S probed directly by the self-referential search; beyond it the
# monotonicity of the right-hand side gives the bound.
SEARCH_CAP = 1 << 14


@dataclass(frozen=True)
class SieveInstance1D:
    N: int
    M: Fraction
    moduli: tuple  # ((q, nu), ...)
    elements: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "M", Fraction(self.M))
        object.__setattr__(self, "moduli", tuple((int(q), int(nu)) for q, nu in self.moduli))
        if self.elements is not None:
            object.__setattr__(self, "elements", tuple(sorted(int(x) for x in self.elements)))
        if self.M <= 0:
            raise InstanceInconsistent("interval length M must be positive")
        for q, nu in self.moduli:
            if q < 2 or not 1 <= nu <= q:
                raise InstanceInconsistent(f"need q >= 2 and 1 <= nu <= q, got q={q}, nu={nu}")

    @property
    def S(self):
        return None if self.elements is None else len(self.elements)

    def observed_nu(self):
        return {q: len({x % q for x in self.elements}) for q, _ in self.moduli}

    @classmethod
    def from_dict(cls, data):
        elements = data.get("elements")
        moduli = []
        for entry in data["moduli"]:
            q = int(entry["q"])
            nu = entry.get("nu")
            if nu is None:
                if elements is None:
                    raise InstanceInconsistent(f"modulus {q} has no nu and no elements")
                nu = len({int(x) % q for x in elements})
            moduli.append((q, int(nu)))
        return cls(int(data.get("N", 0)), Fraction(str(data["M"])), tuple(moduli), elements)

    def to_dict(self):
        out = {
            "N": self.N,
            "M": str(self.M) if self.M.denominator != 1 else int(self.M),
            "moduli": [{"q": q, "nu": nu} for q, nu in self.moduli],
        }
        if self.elements is not None:
            out["elements"] = list(self.elements)
        return out

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class BoundReport:
    """A certified upper bound ``bound`` (``math.inf`` when not valid).

    ``numerator``/``denominator`` are the enclosures of the ratio terms at the
    point where the bound was decided. ``strict`` marks bounds stated with a
    strict inequality.
    """

    method: str
    bound: object
    numerator: PrecisionReal
    denominator: PrecisionReal
    valid: bool
    strict: bool = False
    details: dict = field(default_factory=dict)

    def admits(self, count):
        """Whether a set of ``count`` elements is consistent with this bound."""
        if not self.valid:
            return True
        return count < self.bound if self.strict else count <= self.bound

    def to_dict(self):
        return {
            "method": self.method,
            "valid": self.valid,
            "bound": _jsonable(self.bound),
            "numerator": float(self.numerator.value),
            "denominator": float(self.denominator.value),
            "strict": self.strict,
            "details": {k: _jsonable(v) for k, v in self.details.items()},
        }


def _jsonable(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, PrecisionReal):
        return float(x.value)
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def ratio_terms(weights, nus, shift, c):
    """Enclose (sum w - shift, sum w/nu - shift) for interval weights ``w``."""
    num = c.mpf(0)
    den = c.mpf(0)
    for w, nu in zip(weights, nus):
        num = num + w
        den = den + w / nu
    return num - shift, den - shift


def ratio_bound(weights, nus, shift, c, method, strict=False, details=None):
    """Bound (sum w - shift) / (sum w/nu - shift), valid if the denominator is
    certainly positive; the reported bound is the upper end of the enclosure."""
    num, den = ratio_terms(weights, nus, shift, c)
    valid = certainly_positive(den)
    bound = hi(num / den) if valid else math.inf
    return BoundReport(
        method,
        bound,
        PrecisionReal.from_interval(num),
        PrecisionReal.from_interval(den),
        valid,
        strict,
        details or {},
    )


def _log_weights(moduli, c):
    return [c.log(q) for q, _ in moduli]


def _lambda_weights(moduli, c):
    out = []
    for q, _ in moduli:
        p = prime_power_base(q)
        out.append(c.log(p) if p else c.mpf(0))
    return out


def _check_pairwise_coprime(moduli):
    qs = [q for q, _ in moduli]
    for a, b in combinations(qs, 2):
        if math.gcd(a, b) != 1:
            raise NotPairwiseCoprime(f"moduli {a} and {b} are not coprime")


def gallagher_bound(inst, prec=None):
    """Classical larger sieve: (sum Lambda(q) - log M) / (sum Lambda(q)/nu(q) - log M)."""
    c = ctx(prec)
    ignored = [q for q, _ in inst.moduli if prime_power_base(q) is None]
    return ratio_bound(
        _lambda_weights(inst.moduli, c),
        [nu for _, nu in inst.moduli],
        c.log(enclose(inst.M, c)),
        c,
        "gallagher",
        details={"ignored_non_prime_powers": ignored},
    )


def _self_referential_bound(weights, nus, M, c, method, search_cap=SEARCH_CAP):
    """Largest S consistent with S <= (A - log(c_S M)) / (B - log(c_S M)).

    Here A = sum w, B = sum w/nu. The right-hand side decreases in S wherever
    its denominator is positive, because c_S decreases, so the admissible S
    form an initial segment [1, S*]; S* is found by doubling and bisection.
    """
    A, B = ratio_terms(weights, nus, c.mpf(0), c)
    log_m = c.log(enclose(M, c))
    cache = {}

    def evaluate(s):
        if s not in cache:
            shift = log_c_s_times_binom(s, c) / (s * (s - 1)) + log_m
            num, den = A - shift, B - shift
            pos = certainly_positive(den)
            rhs = hi(num / den) if pos else math.inf
            cache[s] = (num, den, pos, rhs)
        return cache[s]

    def excluded(s):
        _, _, pos, rhs = evaluate(s)
        return pos and s > rhs

    details = {}
    # c_S > 1/4, so the denominator never exceeds B - log M + log 4
    ceiling = B - log_m + c.log(4)
    if not certainly_positive(ceiling):
        num, den, _, _ = evaluate(2)
        return BoundReport(
            method, math.inf, PrecisionReal.from_interval(num),
            PrecisionReal.from_interval(den), False, details={"reason": "denominator never positive"},
        )
    if excluded(2):
        s_star, probe = 1, 2
    else:
        good, s = 2, 4
        while s <= search_cap and not excluded(s):
            good, s = s, s * 2
        if s > search_cap:
            if not excluded(good):
                num, den, pos, rhs = evaluate(good)
                if not pos:
                    return BoundReport(
                        method, math.inf, PrecisionReal.from_interval(num),
                        PrecisionReal.from_interval(den), False, details={"search_cap": search_cap},
                    )
                # every admissible S > good satisfies S <= rhs(S) <= rhs(good)
                bound = max(Fraction(good), Fraction(math.floor(rhs)))
                return BoundReport(
                    method, bound, PrecisionReal.from_interval(num),
                    PrecisionReal.from_interval(den), True,
                    details={"s_star": int(bound), "search_cap": search_cap},
                )
        bad = s
        while bad - good > 1:
            mid = (good + bad) // 2
            if excluded(mid):
                bad = mid
            else:
                good = mid
        s_star, probe = good, good
    num, den, pos, rhs = evaluate(probe)
    details["s_star"] = s_star
    details["rhs_at_s_star"] = rhs
    return BoundReport(
        method,
        Fraction(s_star),
        PrecisionReal.from_interval(num),
        PrecisionReal.from_interval(den),
        True,
        details=details,
    )


def theorem1_bound(inst, prec=None, search_cap=SEARCH_CAP):
    """Improved larger sieve with log q weights and the constant c_S."""
    _check_pairwise_coprime(inst.moduli)
    c = ctx(prec)
    return _self_referential_bound(
        _log_weights(inst.moduli, c), [nu for _, nu in inst.moduli], inst.M, c, "theorem1", search_cap
    )


def theorem1_lambda_variant(inst, prec=None, search_cap=SEARCH_CAP):
    """As ``theorem1_bound`` with von Mangoldt weights; never worse than Gallagher's."""
    _check_pairwise_coprime(inst.moduli)
    c = ctx(prec)
    return _self_referential_bound(
        _lambda_weights(inst.moduli, c),
        [nu for _, nu in inst.moduli],
        inst.M,
        c,
        "theorem1_lambda_variant",
        search_cap,
    )


def corollary1_bound(inst, prec=None):
    """Either S <= 1243 or S < (sum Lambda - log M + 1.38) / (sum Lambda/nu - log M + 1.38).

    ``bound`` is the effective max(1243, rhs) when the denominator is positive;
    the right-hand side alone is kept in ``details['rhs']``.
    """
    c = ctx(prec)
    shift = c.log(enclose(inst.M, c)) - enclose(COROLLARY1_SHIFT, c)
    r = ratio_bound(
        _lambda_weights(inst.moduli, c), [nu for _, nu in inst.moduli], shift, c, "corollary1"
    )
    details = {"floor": COROLLARY1_FLOOR, "rhs": r.bound}
    if not r.valid:
        return BoundReport("corollary1", math.inf, r.numerator, r.denominator, False, True, details)
    return BoundReport(
        "corollary1", max(Fraction(COROLLARY1_FLOOR), r.bound), r.numerator, r.denominator, True, True, details
    )


def corollary1_admits(report, count):
    """The disjunction: count <= 1243 or count < rhs."""
    if not report.valid:
        return True
    return count <= COROLLARY1_FLOOR or count < report.details["rhs"]


@dataclass
class VerifyReport:
    checks: list = field(default_factory=list)  # (name, passed, detail)

    def add(self, name, passed, detail=None):
        self.checks.append((name, bool(passed), detail))

    @property
    def ok(self):
        return all(p for _, p, _ in self.checks)

    @property
    def violations(self):
        return [(n, d) for n, p, d in self.checks if not p]


def _is_pairwise_coprime(moduli):
    return all(math.gcd(a, b) == 1 for (a, _), (b, _) in combinations(moduli, 2))


def verify_instance(inst, prec=None):
    """Check an instance with explicit elements against every bound."""
    if inst.elements is None or len(inst.elements) < 2:
        raise InstanceInconsistent("verification needs at least two elements")
    xs = inst.elements
    if len(set(xs)) != len(xs):
        raise InstanceInconsistent("elements must be distinct")
    if xs[0] < inst.N or xs[-1] > inst.N + inst.M:
        raise InstanceInconsistent("elements must lie in [N, N + M]")
    observed = inst.observed_nu()
    for q, nu in inst.moduli:
        if observed[q] > nu:
            raise InstanceInconsistent(f"declared nu({q})={nu} below observed {observed[q]}")

    S = len(xs)
    report = VerifyReport()
    primes = sorted({p for q, _ in inst.moduli for p in as_factored(q).primes})
    profile = diff_product_valuations(xs, primes=primes)
    for q, _ in inst.moduli:
        alpha = Fraction(S * S, 2 * observed[q]) - Fraction(S, 2)
        if alpha > 0:
            report.add(f"divides[q={q}]", generalized_divides(q, alpha, profile), str(alpha))

    # the difference product is at most (c_S M)^(S choose 2)
    c = ctx(prec)
    cap = log_c_s_times_binom(S, c) / 2 + (S * (S - 1) // 2) * c.log(enclose(inst.M, c))
    low, _ = log_difference_product(xs)
    report.add("delta_le_cS_M", low <= hi(cap), None)

    gall = gallagher_bound(inst, prec)
    report.add("gallagher", gall.admits(S), _jsonable(gall.bound))
    cor = corollary1_bound(inst, prec)
    report.add("corollary1", corollary1_admits(cor, S), _jsonable(cor.details["rhs"]))
    if _is_pairwise_coprime(inst.moduli):
        t1 = theorem1_bound(inst, prec)
        report.add("theorem1", t1.admits(S), _jsonable(t1.bound))
        lam = theorem1_lambda_variant(inst, prec)
        report.add("theorem1_lambda_variant", lam.admits(S), _jsonable(lam.bound))
        if lam.valid and gall.valid:
            report.add("lambda_variant_le_gallagher", lam.bound <= gall.bound, None)
    return report


def log_difference_product(xs):
    """Rigorous float enclosure (lo, hi) of log prod_{i<j} |x_j - x_i|.

    Each libm log is within one ulp and fsum adds exactly, so the error is at
    most one ulp of the largest term per pair, padded by a factor of 4.
    """
    arr = np.asarray(sorted(xs), dtype=np.float64)
    i, j = np.triu_indices(len(arr), 1)
    logs = np.log(np.abs(arr[j] - arr[i]))
    total = math.fsum(logs.tolist())
    err = 4 * len(logs) * math.ulp(float(logs.max()) if len(logs) else 0.0) + 4 * math.ulp(total)
    return Fraction(total) - Fraction(err), Fraction(total) + Fraction(err)


def honest_instance(N, M, moduli, elements):
    """Instance whose nu(q) are the residue counts actually used by ``elements``."""
    elements = sorted(set(int(x) for x in elements))
    mods = [(q, len({x % q for x in elements})) for q in moduli]
    return SieveInstance1D(N, M, tuple(mods), tuple(elements))


def _coprime_prime_powers(rng, primes, count, max_q):
    chosen = rng.sample(primes, min(count, len(primes)))
    out = []
    for p in sorted(chosen):
        q = p
        while q * p <= max_q and rng.random() < 0.3:
            q *= p
        out.append(q)
    return out


def construct_instance(rng, max_attempts=50):
    """Random instance with explicit elements and honest nu; moduli are
    pairwise coprime prime powers so every evaluator applies."""
    primes = primes_up_to(200).tolist()
    for _ in range(max_attempts):
        strategy = rng.randrange(4)
        M = rng.randrange(10, 3000)
        N = rng.randrange(-5000, 5000)
        xs = np.arange(N, N + M + 1, dtype=np.int64)
        if strategy == 0:
            # residue-class sieve: keep a few classes per modulus
            mods = _coprime_prime_powers(rng, primes[:25], rng.randrange(1, 15), 400)
            mask = np.ones(len(xs), dtype=bool)
            for q in mods:
                keep = rng.sample(range(q), max(1, int(q * rng.uniform(0.05, 0.6))))
                mask &= np.isin(xs % q, keep)
            elements = xs[mask].tolist()
        elif strategy == 1:
            # values of a quadratic in the interval
            a, b = rng.randrange(1, 4), rng.randrange(-20, 21)
            k = np.arange(-200, 201, dtype=np.int64)
            vals = a * k * k + b * k + rng.randrange(-50, 51)
            elements = np.unique(vals[(vals >= N) & (vals <= N + M)]).tolist()
            mods = _coprime_prime_powers(rng, primes[:30], rng.randrange(3, 30), 300)
        elif strategy == 2:
            # arithmetic progression: one class modulo divisors of the step
            step = rng.choice([6, 10, 15, 30, 105, 210, 77, 143])
            start = N + rng.randrange(step)
            elements = list(range(start, N + M + 1, step))
            mods = _coprime_prime_powers(rng, primes[:15], rng.randrange(2, 10), 200)
        else:
            # small random subset, many moduli
            size = rng.randrange(2, 12)
            elements = rng.sample(range(N, N + M + 1), min(size, M + 1))
            mods = _coprime_prime_powers(rng, primes, rng.randrange(5, 40), 1000)
        if len(elements) >= 2 and mods:
            return honest_instance(N, M, mods, elements)
    raise RuntimeError("could not construct an instance")


def sieve_sweep(count=10**4, seed=0, prec=None):
    """verify_instance over seeded constructed instances."""
    from .harness import RunReport

    rng = random.Random(seed)
    rep = RunReport("sieve")
    valid = {"gallagher": 0, "corollary1": 0, "theorem1": 0, "theorem1_lambda_variant": 0}
    for _ in range(count):
        inst = construct_instance(rng)
        res = verify_instance(inst, prec)
        rep.instances_checked += 1
        for name, _, bound in res.checks:
            if name in valid and bound != "inf":
                valid[name] += 1
        if not res.ok:
            rep.violation(check="sieve", failed=res.violations, instance=inst.to_dict())
            continue
        t1 = next((b for n, _, b in res.checks if n == "theorem1"), "inf")
        if t1 != "inf":
            rep.witness(inst.S / t1, elements=inst.S, theorem1=t1)
    rep.info = {"seed": seed, "valid_bounds": valid}
    return rep.finalize()
