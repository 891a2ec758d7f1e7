"""Larger sieve over the Gaussian integers."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .certified import ctx, enclose
from .errors import InstanceInconsistent, InvalidHypothesis
from .lattice import LatticeBasis
from .sieve1d import ratio_bound


@dataclass(frozen=True)
class GaussInt:
    re: int
    im: int = 0

    def __post_init__(self):
        object.__setattr__(self, "re", int(self.re))
        object.__setattr__(self, "im", int(self.im))

    @property
    def norm(self):
        return self.re * self.re + self.im * self.im

    def __add__(self, o):
        o = _g(o)
        return GaussInt(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        o = _g(o)
        return GaussInt(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return GaussInt(-self.re, -self.im)

    def __mul__(self, o):
        o = _g(o)
        return GaussInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussInt(self.re, -self.im)

    def __divmod__(self, o):
        """Quotient rounded to the nearest lattice point, so N(r) <= N(o)/2."""
        o = _g(o)
        n = o.norm
        if n == 0:
            raise ZeroDivisionError("division by zero")
        num = self * o.conjugate()
        qt = GaussInt(_round_div(num.re, n), _round_div(num.im, n))
        return qt, self - qt * o

    def __mod__(self, o):
        return divmod(self, o)[1]

    def is_unit(self):
        return self.norm == 1

    def lattice(self):
        """The ideal (a + bi) as the lattice spanned by (a, b) and (-b, a)."""
        return LatticeBasis.from_columns([(self.re, self.im), (-self.im, self.re)])

    def __str__(self):
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


def _g(x):
    return x if isinstance(x, GaussInt) else GaussInt(x)


def _round_div(a, n):
    return (2 * a + n) // (2 * n)


def gauss_gcd(a, b):
    a, b = _g(a), _g(b)
    while b.norm:
        a, b = b, a % b
    return a


def parse_gauss(text):
    """'a,b' or 'a+bi' style input."""
    t = str(text).replace(" ", "")
    if "," in t:
        a, b = t.split(",")
        return GaussInt(int(a), int(b))
    if t.endswith("i"):
        body = t[:-1]
        k = max(body.rfind("+"), body.rfind("-"))
        if k <= 0:
            return GaussInt(0, int(body + "1") if body in ("", "-", "+") else int(body))
        im = body[k:]
        return GaussInt(int(body[:k]), int(im + "1") if im in ("+", "-") else int(im))
    return GaussInt(int(t))


@lru_cache(maxsize=4096)
def _ideal_lattice(q):
    return q.lattice()


def gauss_class(z, modulus):
    """Residue class label of z in Z[i]/(modulus)."""
    return _ideal_lattice(modulus).class_of((z.re, z.im))


def squared_diameter(points):
    return max(((b - a).norm for a, b in combinations(points, 2)), default=0)


def check_pairwise_coprime(moduli):
    for a, b in combinations(moduli, 2):
        if not gauss_gcd(a, b).is_unit():
            raise InvalidHypothesis(f"{a} and {b} share a factor in Z[i]")


def gaussian_sieve_bound(moduli, nus=None, points=None, d_squared=None, prec=None):
    """(sum log N(q) - 2 log d) / (sum log N(q)/nu(q) - 2 log d).

    ``d_squared`` is the squared diameter of the region; it defaults to that of
    the points. ``nus`` default to the observed class counts of the points.
    """
    moduli = [_g(q) for q in moduli]
    if any(q.norm < 2 for q in moduli):
        raise InvalidHypothesis("moduli must be non-units")
    check_pairwise_coprime(moduli)
    if points is not None:
        points = [_g(z) for z in points]
        seen = [len({gauss_class(z, q) for z in points}) for q in moduli]
        if nus is None:
            nus = seen
        elif any(s > nu for s, nu in zip(seen, nus)):
            raise InstanceInconsistent("points occupy more classes than declared")
        if d_squared is None:
            d_squared = squared_diameter(points)
    if nus is None or d_squared is None:
        raise ValueError("need points or explicit nus and d_squared")
    d_squared = Fraction(d_squared)
    if d_squared <= 0:
        raise InvalidHypothesis("region diameter must be positive")
    c = ctx(prec)
    weights = [c.log(q.norm) for q in moduli]
    shift = c.log(enclose(d_squared, c))  # 2 log d
    return ratio_bound(weights, nus, shift, c, "gaussian", details={"d_squared": d_squared})
