"""Roots of polynomial congruences: how they lift and how they crowd.

We follow x^2 - 2 from mod 7 up to mod 7^6, glue prime power moduli with the
Chinese remainder theorem, and then ask how many roots can fit in a short
interval compared with the bound that depends only on the degree and the
number of prime factors of q.
"""

from largersieve.polycong import (
    IntPoly,
    count_in_interval,
    hensel_lift,
    IntervalI,
    max_admissible_points,
    max_window_count,
    remark_log_bound_float,
    solve_mod_q,
    svk_ratio_explorer,
    theorem3_bound,
)

P = IntPoly.parse("-2,0,1")
print(f"P = x^2 - 2, coefficients low first: {P}")
for a in range(1, 7):
    print(f"  roots mod 7^{a}: {list(hensel_lift(P, 7, a).roots)}")

# a singular root: x^2 mod 2^a has 2^(a//2) roots, all bunched near 0
Q = IntPoly.parse("0,0,1")
for a in (4, 8, 12):
    print(f"x^2 mod 2^{a}: {len(hensel_lift(Q, 2, a))} roots")

q = 3 * 5 * 7 * 11 * 13
R = IntPoly.parse("-1,0,1")
roots = list(solve_mod_q(R, q).roots)
print(f"\nx^2 - 1 mod {q}: {len(roots)} roots (2 per prime factor, glued by CRT)")

# the longest interval the short-interval bounds speak about
n = R.degree
ell = max_admissible_points(q, n)
W, start = max_window_count(roots, q, ell)
print(f"intervals of {ell} consecutive integers hold at most {W} roots; "
      f"degree bound {theorem3_bound(n, q)}, log bound {remark_log_bound_float(n, q):.1f}")
W2, where = count_in_interval(R, q, IntervalI(start, ell))
print(f"  e.g. [{start}, {start + ell - 1}] contains {W2}: {where}")

# roots of x^n + d against q^(1-1/n): how many roots per unit of 'expected' count
for f, m in ((IntPoly.monomial_plus(2, -1), 2**10), (IntPoly.monomial_plus(4, -1), 5 * 13 * 17 * 29),
             (IntPoly.parse("0,0,0,1"), 3**9)):
    print(f"{f} mod {m}: N/q^(1-1/n) = {float(svk_ratio_explorer(f, m)):.3f}")
