"""The larger sieve in the plane and in space.

Points that avoid most classes of several index-p sublattices of Z^m cannot be
numerous inside a bounded region. We generate such point sets, evaluate the
m-dimensional bound, and repeat the exercise in the Gaussian integers where
the lattices are ideals.
"""

import random

from largersieve.gaussian import GaussInt, gauss_class
from largersieve.lattice import (
    D,
    gamma_m,
    hadamard_t_coefficient,
    t_bruteforce_oracle,
    theorem2_bound,
)
from largersieve.latsweeps import construct_lattice_instance, gauss_sweep

# the largest simplex volume (times m!) spanned by lattice points of the unit cube
for m in range(1, 5):
    print(f"m={m}: t={t_bruteforce_oracle(m)}  Hadamard-type cap {float(hadamard_t_coefficient(m)):.3f}  "
          f"gamma={gamma_m(m)}")

# seeded instances where the points avoid most classes of small-prime lattices
rng = random.Random(5)
print(f"\n{'m':>2} {'points':>6} {'lattices':>8} {'bound':>8} {'first term':>10} {'trivial':>8}")
for m in (2, 2, 2, 3, 3, 3):
    inst = construct_lattice_instance(rng, m)
    inst.validate()
    rep = theorem2_bound(inst)
    d = rep.details
    print(f"{m:>2} {len(inst.points):>6} {len(inst.lattices):>8} {float(rep.bound):>8.1f} "
          f"{float(d['first_term']):>10.1f} {float(d['trivial_term']):>8.0f}")
pts = inst.points
print(f"last instance: D{list(pts[:4])} = {D(list(pts[:4]))}")

# Gaussian integers: ideals are square lattices, and the bound is stated with
# norms and the region's diameter. Random sets confined to some classes of
# coprime Gaussian primes never get past it.
rep = gauss_sweep(200, seed=2)
print(f"\nZ[i]: {rep.instances_checked} random sets, bound applicable to {rep.info['valid_instances']}, "
      f"violations {len(rep.violations)}")
for w in rep.extremal_witnesses[:3]:
    print(f"  {w['points']} points against a bound of {w['bound']:.1f}")

# a small explicit case: multiples of 1+i inside a 6 x 6 square meet one class mod 1+i
zs = [GaussInt(a, b) for a in range(6) for b in range(6) if (a + b) % 2 == 0]
print(f"{len(zs)} points, classes mod 1+i: {len({gauss_class(z, GaussInt(1, 1)) for z in zs})}, "
      f"mod 3: {len({gauss_class(z, GaussInt(3)) for z in zs})}")
