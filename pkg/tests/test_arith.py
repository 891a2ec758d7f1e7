import math
import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from largersieve.arith import (
    FACTOR_CAP,
    Factored,
    crt_combine,
    diff_product_valuations,
    factorize,
    g_function,
    generalized_divides,
    is_prime,
    omega,
    phi,
    primes_up_to,
    von_mangoldt,
    vp,
)
from largersieve.errors import DuplicateElements, NotCoprime, OutOfRange


PRIMES_20K = primes_up_to(20_001).tolist()


def brute_phi(q):
    return sum(1 for a in range(1, q + 1) if math.gcd(a, q) == 1)


def brute_sqrt_count(n, q):
    # max over units a of #{x mod q : x**n == a}
    best = 0
    for a in range(q):
        if math.gcd(a, q) == 1:
            best = max(best, sum(1 for x in range(q) if (pow(x, n, q) - a) % q == 0))
    return best


def delta_product(xs):
    out = 1
    for a, b in combinations(sorted(xs), 2):
        out *= b - a
    return out


@pytest.mark.parametrize(
    "n, expected",
    [(360, ((2, 3), (3, 2), (5, 1))), (97, ((97, 1),)), (2**31 - 1, ((2147483647, 1),))],
)
def test_factorize_examples(n, expected):
    f = factorize(n)
    assert f.factors == expected
    assert f.value == n


def test_factorize_bounds():
    with pytest.raises(OutOfRange):
        factorize(1)
    with pytest.raises(OutOfRange):
        factorize(FACTOR_CAP + 1)
    big = factorize(FACTOR_CAP)
    assert big.factors == ((2, 96),)


def test_factored_rejects_bad_data():
    with pytest.raises(ValueError):
        Factored(12, ((3, 1), (2, 2)))
    with pytest.raises(ValueError):
        Factored(12, ((2, 1), (3, 1)))


def test_factorize_roundtrip_many():
    rng = random.Random(20240611)
    for _ in range(200_000):
        n = rng.randrange(2, 1 << 20)
        f = factorize(n)
        assert math.prod(p**a for p, a in f.factors) == n
    for _ in range(40):
        n = rng.randrange(2, FACTOR_CAP)
        f = factorize(n)
        assert math.prod(p**a for p, a in f.factors) == n
        assert all(is_prime(p) for p in f.primes)


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=2, max_value=2**64))
def test_factorize_property(n):
    f = factorize(n)
    assert math.prod(p**a for p, a in f.factors) == n
    assert list(f.primes) == sorted(set(f.primes))


def test_primes_up_to_matches_trial_division():
    ps = primes_up_to(1000).tolist()
    assert ps == [n for n in range(2, 1001) if all(n % d for d in range(2, int(n**0.5) + 1))]


def test_von_mangoldt():
    assert float(von_mangoldt(8)) == pytest.approx(math.log(2), abs=1e-15)
    assert von_mangoldt(6).value == 0
    assert float(von_mangoldt(7)) == pytest.approx(math.log(7), abs=1e-15)
    assert von_mangoldt(8).abs_error_bound < Fraction(1, 10**40)


def test_omega_phi_vp():
    assert omega(12) == 2
    assert phi(9) == 6
    assert vp(48, 2) == 4
    assert omega(1) == 0 and phi(1) == 1
    for q in range(1, 300):
        assert phi(q) == brute_phi(q)


def test_g_function_examples():
    assert g_function(2, 4) == 2
    assert g_function(2, 2) == 1
    assert g_function(2, 15) == 4 == brute_sqrt_count(2, 15)


@pytest.mark.parametrize("n", [2, 3, 4, 6, 8])
@pytest.mark.parametrize("q", [3, 5, 8, 9, 16, 27, 32, 49, 64])
def test_g_function_is_sharp_on_prime_powers(n, q):
    # on prime powers the bound is attained by some unit
    assert g_function(n, q) == brute_sqrt_count(n, q)


def test_g_function_bound_and_multiplicativity():
    for n in range(2, 9):
        for q in range(1, 10_001):
            assert g_function(n, q) <= 2 * n ** omega(q)
    for u in range(1, 60):
        for v in range(1, 60):
            if math.gcd(u, v) == 1:
                assert g_function(3, u * v) == g_function(3, u) * g_function(3, v)
                assert phi(u * v) == phi(u) * phi(v)
                assert omega(u * v) == omega(u) + omega(v)


def test_crt_examples():
    assert crt_combine([(1, 3), (2, 5)]) == (7, 15)
    assert crt_combine([(0, 4), (0, 9)]) == (0, 36)
    assert crt_combine([(3, 7), (5, 11)]) == (38, 77)
    with pytest.raises(NotCoprime):
        crt_combine([(1, 6), (1, 4)])


@given(st.lists(st.sampled_from([3, 4, 5, 7, 11, 13, 17]), min_size=1, max_size=4, unique=True), st.data())
def test_crt_property(moduli, data):
    residues = [(data.draw(st.integers(-50, 50)), m) for m in moduli]
    r, m = crt_combine(residues)
    assert m == math.prod(moduli) and 0 <= r < m
    assert all((r - a) % b == 0 for a, b in residues)


def test_diff_product_examples():
    assert diff_product_valuations([0, 1, 2]) == {2: 1}
    assert diff_product_valuations([0, 2, 4]) == {2: 4}
    assert diff_product_valuations([0, 3, 8, 11]) == {2: 6, 3: 2, 5: 1, 11: 1}
    assert diff_product_valuations([11, 0, 8, 3], primes=[2, 3, 7]) == {2: 6, 3: 2, 7: 0}
    with pytest.raises(DuplicateElements):
        diff_product_valuations([1, 2, 2])


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-10_000, 10_000), min_size=2, max_size=12, unique=True))
def test_diff_product_matches_bigint(xs):
    delta = delta_product(xs)
    profile = diff_product_valuations(xs)
    expected = {p: vp(delta, p) for p in PRIMES_20K if delta % p == 0}
    assert profile == expected
    small = [p for p in (2, 3, 5, 7)]
    assert diff_product_valuations(xs, primes=small) == {p: vp(delta, p) for p in small}


def test_generalized_divides():
    assert generalized_divides(4, Fraction(3, 2), {2: 3})
    assert not generalized_divides(4, Fraction(3, 2), {2: 2})
    assert generalized_divides(12, Fraction(1, 2), {2: 1, 3: 1})
    assert not generalized_divides(12, Fraction(1, 2), {2: 1})
    assert generalized_divides(12, Fraction(-1), {})
