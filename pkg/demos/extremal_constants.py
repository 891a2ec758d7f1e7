"""The constant c_s: how spread out can s points in [0,1] be?

c_s^(s(s-1)/2) is the largest product of pairwise gaps of s points in the unit
interval. We evaluate it in closed form with certified error, compare it with a
direct numerical optimizer for small s, watch it fall toward 1/4, and certify
the numerical constant that appears in the log-scaled root count bound.
"""

from largersieve.constants import c_s, certify_remark_bound, lemma1_oracle, lemma2_check, remark_constant
from largersieve.errors import PrecisionInsufficient

print(f"{'s':>5} {'c_s':>22} {'error bound':>12}  optimizer points")
for s in (2, 3, 4, 5, 6):
    v = c_s(s)
    pts = ", ".join(f"{x:.4f}" for x in lemma1_oracle(s).points)
    print(f"{s:>5} {float(v.value):>22.17f} {float(v.abs_error_bound):>12.1e}  {pts}")
for s in (10, 100, 1000, 10**5):
    v = c_s(s)
    print(f"{s:>5} {float(v.value):>22.17f} {float(v.abs_error_bound):>12.1e}")

# c_s stays under (2s)^(1/(s-1)) s^(1/(4s(s-1))) / 4 for every s checked
rows = lemma2_check(200)
worst = min(rows, key=lambda r: r.rhs.lo - r.lhs.hi)
print(f"\nupper envelope holds for s=2..200: {all(r.ok for r in rows)}; "
      f"tightest at s={worst.s} with margin {float(worst.rhs.lo - worst.lhs.hi):.2e}")

# with primes up to 10^5 the enclosure still straddles 3.817; 10^6 settles it
for cutoff in (10**5, 10**6):
    rc = remark_constant(cutoff)
    try:
        verdict = certify_remark_bound(prime_cutoff=cutoff)
    except PrecisionInsufficient:
        verdict = "undecided"
    print(f"2 - log 2 + 2 gamma + 4 sum log p/(p^2-1) in [{float(rc.enclosure.lo):.6f}, {float(rc.enclosure.hi):.6f}] "
          f"with primes <= {cutoff}: <= 3.817 {verdict}")
