"""Higher-dimensional larger sieve: simplex determinants, lattice classes and
the point-count bound for sets in general position."""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, gcd

import numpy as np
from sympy import Matrix

from .certified import PrecisionReal, certainly_positive, ctx, enclose, hi
from .errors import (
    CapExceeded,
    DegenerateRegion,
    DimensionMismatch,
    HypothesisViolated,
    InstanceInconsistent,
    InvalidHypothesis,
)
from .sieve1d import BoundReport

SUBSET_CAP = 10**7
# t(Omega) / Vol(Omega) for parallelepipeds, m = 1..4
T_EXACT = {1: 1, 2: 1, 3: 2, 4: 3}


def det_int(rows):
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise DimensionMismatch("matrix is not square")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def simplex_matrix(points):
    m = len(points) - 1
    for v in points:
        if len(v) != m:
            raise DimensionMismatch(f"need {m + 1} points in dimension {m}, got a point of length {len(v)}")
    return [[1] * (m + 1)] + [[v[i] for v in points] for i in range(m)]


def D(points):
    """|det| of the (m+1)x(m+1) matrix with a row of ones over the m+1 points."""
    points = [tuple(int(x) for x in v) for v in points]
    if len(points) < 2:
        raise DimensionMismatch("need m + 1 >= 2 points")
    return abs(det_int(simplex_matrix(points)))


def _batched_D(pts, idx):
    """D over many index tuples at once; exact while entries stay small."""
    arr = np.asarray(pts, dtype=np.float64)[idx]  # (k, m+1, m)
    k, m1, _ = arr.shape
    mats = np.concatenate([np.ones((k, m1, 1)), arr], axis=2)
    return np.rint(np.abs(np.linalg.det(mats))).astype(np.int64)


def _float_det_safe(pts):
    m = len(pts[0])
    span = max(max(abs(x) for x in v) for v in pts) * 2 + 1
    # Hadamard bound on the shifted matrix keeps float rounding below 1/2
    return (span**2 * m + 1) ** ((m + 1) / 2) < 2**40


def general_position_check(points, cap=SUBSET_CAP, batch=200_000):
    """(ok, min D) over all (m+1)-subsets of the points."""
    pts = [tuple(int(x) for x in v) for v in points]
    m = len(pts[0]) if pts else 0
    if any(len(v) != m for v in pts):
        raise DimensionMismatch("points of mixed dimension")
    if len(pts) < m + 1:
        raise ValueError(f"need at least {m + 1} points")
    total = comb(len(pts), m + 1)
    if total > cap:
        raise CapExceeded(f"{total} subsets exceed the cap {cap}")
    best = None
    if _float_det_safe(pts):
        it = combinations(range(len(pts)), m + 1)
        while True:
            idx = np.fromiter((i for t in _take(it, batch) for i in t), dtype=np.int64)
            if idx.size == 0:
                break
            vals = _batched_D(pts, idx.reshape(-1, m + 1))
            low = int(vals.min())
            best = low if best is None else min(best, low)
            if best == 0:
                break
    else:
        for sub in combinations(pts, m + 1):
            d = D(sub)
            best = d if best is None else min(best, d)
            if best == 0:
                break
    return best > 0, best


def _take(it, n):
    for _, x in zip(range(n), it):
        yield x


def max_D(points):
    """Largest D over all (m+1)-subsets (brute force)."""
    pts = [tuple(int(x) for x in v) for v in points]
    m = len(pts[0])
    if len(pts) < m + 1:
        return 0
    if comb(len(pts), m + 1) > SUBSET_CAP:
        raise CapExceeded("too many subsets")
    if _float_det_safe(pts):
        idx = np.array(list(combinations(range(len(pts)), m + 1)), dtype=np.int64)
        return int(_batched_D(pts, idx).max())
    return max(D(s) for s in combinations(pts, m + 1))


def column_hnf(basis):
    """Lower-triangular column Hermite form H of the lattice spanned by the
    columns of ``basis``: positive diagonal, 0 <= H[i][j] < H[i][i] for j < i."""
    A = [list(map(int, r)) for r in basis]
    m = len(A)
    for i in range(m):
        # gcd the row-i entries of columns i..m-1 into column i
        for j in range(i + 1, m):
            while A[i][j]:
                t = A[i][i] // A[i][j]
                for r in range(m):
                    A[r][i] -= t * A[r][j]
                for r in range(m):
                    A[r][i], A[r][j] = A[r][j], A[r][i]
        if A[i][i] == 0:
            raise DegenerateRegion("basis is singular")
        if A[i][i] < 0:
            for r in range(m):
                A[r][i] = -A[r][i]
        for j in range(i):
            t = A[i][j] // A[i][i]
            if t:
                for r in range(m):
                    A[r][j] -= t * A[r][i]
    return tuple(tuple(r) for r in A)


@dataclass(frozen=True)
class LatticeBasis:
    """Sublattice of Z^m generated by the columns of ``basis`` (a row-major matrix)."""

    basis: tuple
    det_abs: int = field(init=False)
    hnf: tuple = field(init=False, repr=False)

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.basis)
        m = len(rows)
        if m < 1 or any(len(r) != m for r in rows):
            raise DimensionMismatch("basis must be a square matrix")
        det = abs(det_int(rows))
        if det == 0:
            raise DegenerateRegion("basis is singular")
        object.__setattr__(self, "basis", rows)
        object.__setattr__(self, "det_abs", det)
        object.__setattr__(self, "hnf", column_hnf(rows))

    @classmethod
    def from_columns(cls, cols):
        m = len(cols)
        return cls(tuple(tuple(cols[j][i] for j in range(m)) for i in range(m)))

    @classmethod
    def scaled_identity(cls, m, q):
        return cls(tuple(tuple(q if i == j else 0 for j in range(m)) for i in range(m)))

    @classmethod
    def kernel_of_form(cls, coeffs, p):
        """{x : coeffs . x == 0 mod p} for a prime p and coeffs not all 0 mod p."""
        c = [a % p for a in coeffs]
        m = len(c)
        k = next(i for i in range(m) if c[i])
        inv = pow(c[k], -1, p)
        cols = []
        for j in range(m):
            v = [0] * m
            if j == k:
                v[k] = p
            else:
                v[j] = 1
                v[k] = (-c[j] * inv) % p
            cols.append(v)
        return cls.from_columns(cols)

    @property
    def m(self):
        return len(self.basis)

    def class_of(self, point):
        """Canonical representative of ``point`` modulo the lattice."""
        x = [int(a) for a in point]
        H = self.hnf
        if len(x) != self.m:
            raise DimensionMismatch("point dimension does not match the lattice")
        for i in range(self.m):
            k = x[i] // H[i][i]
            if k:
                for r in range(i, self.m):
                    x[r] -= k * H[r][i]
        return tuple(x)

    def contains(self, v):
        """Membership by an exact rational solve against the original basis."""
        sol = Matrix(self.basis).LUsolve(Matrix([int(a) for a in v]))
        return all(x.is_integer for x in sol)

    def to_dict(self):
        return {"basis": [list(r) for r in self.basis]}


def class_of(point, lattice):
    return lattice.class_of(point)


@dataclass(frozen=True)
class Parallelepiped:
    """origin + edges @ [0, 1]^m, ``edges`` given row-major with edge vectors as columns."""

    origin: tuple
    edges: tuple

    def __post_init__(self):
        edges = tuple(tuple(Fraction(x) for x in r) for r in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "origin", tuple(Fraction(x) for x in self.origin))
        if len(self.origin) != len(edges) or any(len(r) != len(edges) for r in edges):
            raise DimensionMismatch("origin and edge matrix disagree")

    @classmethod
    def box(cls, lo, hi):
        m = len(lo)
        return cls(tuple(lo), tuple(tuple(hi[i] - lo[i] if i == j else 0 for j in range(m)) for i in range(m)))

    @property
    def m(self):
        return len(self.origin)

    @property
    def volume(self):
        return abs(Matrix(self.edges).det())

    def contains(self, point):
        rel = Matrix([Fraction(x) - o for x, o in zip(point, self.origin)])
        coords = Matrix(self.edges).LUsolve(rel)
        return all(0 <= c <= 1 for c in coords)


@dataclass(frozen=True)
class ExplicitT:
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t))
        if self.t <= 0:
            raise DegenerateRegion("t must be positive")


def t_parallelepiped(region, prec=None):
    """(upper bound, exact value or None) for the largest D inside a parallelepiped.

    The upper bound is ((m+2)^((m+1)/2) / 2^m) Vol, returned as an enclosure.
    """
    vol = Fraction(int(region.volume.p), int(region.volume.q))
    if vol == 0:
        raise DegenerateRegion("parallelepiped has zero volume")
    m = region.m
    c = ctx(prec)
    upper = c.mpf(m + 2) ** (c.mpf(m + 1) / 2) / 2**m * enclose(vol, c)
    exact = T_EXACT[m] * vol if m in T_EXACT else None
    return PrecisionReal.from_interval(upper), exact


def t_bruteforce_oracle(m, batch=100_000):
    """Max |det| of (m+1)x(m+1) matrices with a first row of ones and 0/1 entries."""
    if not 1 <= m <= 5:
        raise ValueError("m must be in [1, 5]")
    cube = [tuple((k >> i) & 1 for i in range(m)) for k in range(2**m)]
    best, arg = 0, None
    it = combinations(range(len(cube)), m + 1)
    while True:
        idx = np.fromiter((i for t in _take(it, batch) for i in t), dtype=np.int64)
        if idx.size == 0:
            break
        idx = idx.reshape(-1, m + 1)
        vals = _batched_D(cube, idx)
        j = int(vals.argmax())
        if vals[j] > best:
            best, arg = int(vals[j]), idx[j]
    # confirm the maximiser exactly
    assert D([cube[i] for i in arg]) == best
    return best


def hadamard_t_coefficient(m):
    return (m + 2) ** ((m + 1) / 2) / 2**m


@dataclass(frozen=True)
class LatticeSieveInstance:
    m: int
    points: tuple
    lattices: tuple  # ((LatticeBasis, nu), ...)
    region: object

    def __post_init__(self):
        pts = tuple(tuple(int(x) for x in v) for v in self.points)
        if any(len(v) != self.m for v in pts):
            raise DimensionMismatch("point dimension mismatch")
        if len(set(pts)) != len(pts):
            raise InstanceInconsistent("points must be distinct")
        lats = tuple((L if isinstance(L, LatticeBasis) else LatticeBasis(L), int(nu)) for L, nu in self.lattices)
        for L, nu in lats:
            if L.m != self.m:
                raise DimensionMismatch("lattice dimension mismatch")
            if not 1 <= nu <= L.det_abs:
                raise InstanceInconsistent("need 1 <= nu <= |Gamma|")
        if isinstance(self.region, Parallelepiped) and self.region.m != self.m:
            raise DimensionMismatch("region dimension mismatch")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "lattices", lats)

    def observed_nu(self):
        return [len({L.class_of(v) for v in self.points}) for L, _ in self.lattices]

    def validate(self):
        """Check honest nu, coprime determinants, region containment and general position."""
        for (L, nu), seen in zip(self.lattices, self.observed_nu()):
            if seen > nu:
                raise InstanceInconsistent(f"points meet {seen} classes of a lattice declared with nu={nu}")
        _check_coprime_dets(self.lattices)
        if isinstance(self.region, Parallelepiped):
            if not all(self.region.contains(v) for v in self.points):
                raise InstanceInconsistent("point outside the region")
        elif len(self.points) > self.m and max_D(self.points) > self.region.t:
            raise InstanceInconsistent("explicit t is below the largest D of the points")
        if len(self.points) > self.m:
            ok, _ = general_position_check(self.points)
            if not ok:
                raise InstanceInconsistent("points are not in general position")
        return True

    @classmethod
    def from_dict(cls, d):
        m = int(d["m"])
        lats = [(LatticeBasis(tuple(map(tuple, e["basis"]))), e["nu"]) for e in d["lattices"]]
        r = d["region"]
        if r["type"] == "parallelepiped":
            region = Parallelepiped(tuple(r["origin"]), tuple(map(tuple, r["edges"])))
        elif r["type"] == "explicit_t":
            region = ExplicitT(Fraction(str(r["t"])))
        else:
            raise ValueError(f"unknown region type {r['type']!r}")
        return cls(m, tuple(map(tuple, d.get("points", []))), tuple(lats), region)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_dict(self):
        if isinstance(self.region, Parallelepiped):
            region = {"type": "parallelepiped", "origin": [str(x) for x in self.region.origin],
                      "edges": [[str(x) for x in r] for r in self.region.edges]}
        else:
            region = {"type": "explicit_t", "t": str(self.region.t)}
        return {"m": self.m, "points": [list(v) for v in self.points],
                "lattices": [{"basis": [list(r) for r in L.basis], "nu": nu} for L, nu in self.lattices],
                "region": region}


def _check_coprime_dets(lattices):
    dets = [L.det_abs for L, _ in lattices]
    for a, b in combinations(dets, 2):
        if gcd(a, b) != 1:
            raise InvalidHypothesis(f"lattice determinants {a} and {b} are not coprime")


def gamma_m(m):
    return (m + 1) // 2 * m * (m + 1) // 2


def _log_t(region, c):
    if isinstance(region, ExplicitT):
        return c.log(enclose(region.t, c)), region.t
    upper, exact = t_parallelepiped(region, c.prec)
    if exact is not None:
        return c.log(enclose(exact, c)), exact
    # a larger t only raises the bound, so the upper estimate is safe
    return c.log(upper.interval(c)), upper


def theorem2_bound(inst, prec=None):
    """Strict upper bound on the number of points of a general-position set."""
    c = ctx(prec)
    m = inst.m
    if not inst.lattices:
        raise InvalidHypothesis("no lattices")
    _check_coprime_dets(inst.lattices)
    log_t, t = _log_t(inst.region, c)
    logs = [c.log(L.det_abs) for L, _ in inst.lattices]
    nus = [nu for _, nu in inst.lattices]

    def b(i):
        acc = c.mpf(0)
        for lg, nu in zip(logs, nus):
            acc = acc + lg / c.mpf(nu) ** i
        return acc - log_t

    bs = [b(i) for i in range(m + 1)]
    if not certainly_positive(bs[m]):
        raise InvalidHypothesis("b_m is not positive")
    b_positive = all(certainly_positive(x) for x in bs)
    g = gamma_m(m)
    first, s_star = None, None
    for s in range(1, m + 1, 2):
        val = g * c.exp(c.log(bs[m - s] / bs[m]) / s)
        if first is None or hi(val) > hi(first):
            first, s_star = val, s
    trivial = (m + 1) * max(nus)
    bound = max(hi(first), Fraction(trivial))
    details = {"gamma_m": g, "s_star": s_star, "b": [PrecisionReal.from_interval(x) for x in bs],
               "b_positive": b_positive, "t": t, "first_term": hi(first), "trivial_term": trivial,
               "formula_bound": bound, "trivial_branch": False}
    if inst.points and len(inst.points) < trivial:
        bound = Fraction(trivial)
        details["trivial_branch"] = True
    return BoundReport("theorem2", bound, PrecisionReal.from_interval(bs[m - s_star]),
                       PrecisionReal.from_interval(bs[m]), True, True, details)


def falling_factorial(x, d):
    out = Fraction(1)
    for i in range(d):
        out *= x - i
    return out


def lemma6_check(d, xs):
    """sum P(x_i) >= n P(X/n) for P(x) = x(x-1)...(x-d+1), exactly in rationals."""
    xs = [Fraction(x) for x in xs]
    n = len(xs)
    if d < 3:
        raise HypothesisViolated("need d >= 3")
    if n == 0 or any(x <= 0 for x in xs):
        raise HypothesisViolated("need positive x_i")
    X = sum(xs)
    if X < d * n:
        raise HypothesisViolated(f"X = {X} < d n = {d * n}")
    return sum(falling_factorial(x, d) for x in xs) >= n * falling_factorial(X / n, d)


def _on_common_hyperplane(base, x):
    return D(list(base) + [x]) == 0


def _independent(sub):
    """Whether m points span an affine hyperplane (differences have rank m-1)."""
    if len(sub) <= 1:
        return True
    diffs = [[a - b for a, b in zip(v, sub[0])] for v in sub[1:]]
    k, m = len(diffs), len(diffs[0])
    return any(det_int([[r[j] for j in cols] for r in diffs]) for cols in combinations(range(m), k))


def max_points_on_hyperplane(points, cap=200):
    """K: the largest number of points lying on one affine hyperplane."""
    pts = [tuple(int(x) for x in v) for v in points]
    if len(pts) > cap:
        raise CapExceeded(f"more than {cap} points")
    m = len(pts[0])
    if len(pts) <= m:
        return len(pts)
    best = 0
    for sub in combinations(pts, m):
        if not _independent(sub):
            continue
        count = sum(1 for x in pts if x in sub or _on_common_hyperplane(sub, x))
        best = max(best, count)
    # every point set lies on a hyperplane if no m points span one
    return best if best else len(pts)


def max_general_position_subset(points, cap=20):
    """Largest subset whose (m+1)-subsets all have D > 0 (exact backtracking).

    Returns 0 when no subset of m+1 points qualifies.
    """
    pts = [tuple(int(x) for x in v) for v in points]
    if len(pts) > cap:
        raise CapExceeded(f"more than {cap} points")
    m = len(pts[0])
    n = len(pts)
    best = [0]

    def extend(chosen, start):
        if len(chosen) > best[0]:
            best[0] = len(chosen)
        for i in range(start, n):
            if len(chosen) + (n - i) <= best[0]:
                return
            v = pts[i]
            if len(chosen) >= m and any(D(list(s) + [v]) == 0 for s in combinations(chosen, m)):
                continue
            extend(chosen + [v], i + 1)

    extend([], 0)
    return best[0] if best[0] >= m + 1 else 0


def lemma7_bound(K, S, m):
    """K max(1, binom(S, m)); S = 0 means no general-position subset exists."""
    if K < 1:
        raise ValueError("K must be >= 1")
    return K * max(1, comb(S, m)) if S else K


def lemma7_check(points):
    """(holds, #N, K, S) for a point set."""
    pts = list({tuple(int(x) for x in v) for v in points})
    m = len(pts[0])
    K = max_points_on_hyperplane(pts)
    S = max_general_position_subset(pts)
    return len(pts) <= lemma7_bound(K, S, m), len(pts), K, S
