"""How far do the one-dimensional bounds sit above a set they should catch?

The perfect squares up to M occupy (p+1)/2 classes mod every odd prime p, so
the larger sieve sees them as a thin set. Here we compare the squares' actual
count against the Gallagher bound, the self-referential bound and its
von Mangoldt variant as the list of primes grows.
"""

from largersieve.arith import primes_up_to
from largersieve.sieve1d import (
    gallagher_bound,
    honest_instance,
    theorem1_bound,
    theorem1_lambda_variant,
    verify_instance,
)

K = 200
squares = [k * k for k in range(K + 1)]
M = K * K


def show(rep):
    return f"{float(rep.bound):9.1f}" if rep.valid else "      n/a"


print(f"{len(squares)} squares in [0, {M}]")
print(f"{'primes <=':>10} {'gallagher':>10} {'self-ref':>10} {'lambda':>10}")
for Q in (150, 300, 1000, 3000, 10000):
    moduli = primes_up_to(Q)[1:].tolist()  # odd primes only
    inst = honest_instance(0, M, moduli, squares)
    print(f"{Q:>10} {show(gallagher_bound(inst)):>10} {show(theorem1_bound(inst)):>10} "
          f"{show(theorem1_lambda_variant(inst)):>10}")

# every bound that applies must admit the set, and the difference product
# must carry the divisibility the counting argument predicts
res = verify_instance(honest_instance(0, M, primes_up_to(1000)[1:].tolist(), squares))
print("all checks pass:", res.ok, f"({len(res.checks)} checks)")
