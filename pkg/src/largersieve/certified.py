"""Interval arithmetic helpers on top of mpmath's interval context.

Every quantity that decides the sign of a bound's denominator goes through
these helpers, so the sign is either certified or reported as unknown.
"""

import math
import os
import threading
from dataclasses import dataclass
from fractions import Fraction

from mpmath import libmp
from mpmath.ctx_iv import MPIntervalContext

DEFAULT_PREC = 160

_contexts = {}
_lock = threading.Lock()


def default_prec():
    """Working precision in bits; overridable with ``LARGERSIEVE_PREC``."""
    raw = os.environ.get("LARGERSIEVE_PREC")
    if raw is None:
        return DEFAULT_PREC
    bits = int(raw)
    if bits < 64:
        raise ValueError("LARGERSIEVE_PREC must be at least 64 bits")
    return bits


def ctx(prec=None):
    """Interval context fixed at ``prec`` bits.

    One context per precision; contexts are never re-targeted, which keeps
    concurrent callers from trampling each other's precision.
    """
    prec = default_prec() if prec is None else int(prec)
    c = _contexts.get(prec)
    if c is None:
        with _lock:
            c = _contexts.get(prec)
            if c is None:
                c = MPIntervalContext()
                c.prec = prec
                _contexts[prec] = c
    return c


def _to_fraction(raw):
    if raw == libmp.finf:
        return math.inf
    if raw == libmp.fninf:
        return -math.inf
    if raw == libmp.fnan:
        raise ArithmeticError("NaN endpoint")
    p, q = libmp.to_rational(raw)
    return Fraction(int(p), int(q))


def lo(x):
    """Exact lower endpoint of interval ``x`` as a Fraction."""
    return _to_fraction(x._mpi_[0])


def hi(x):
    """Exact upper endpoint of interval ``x`` as a Fraction."""
    return _to_fraction(x._mpi_[1])


def enclose(value, c):
    """Interval in context ``c`` containing the exact rational ``value``."""
    value = Fraction(value)
    if value.denominator == 1:
        return c.mpf(value.numerator)
    return c.mpf(value.numerator) / c.mpf(value.denominator)


def certainly_positive(x):
    return lo(x) > 0


def certainly_nonpositive(x):
    return hi(x) <= 0


@dataclass(frozen=True)
class PrecisionReal:
    """A real number known to lie in ``[lo, hi]`` (exact rational endpoints).

    ``value`` is the midpoint and ``abs_error_bound`` the half-width.
    """

    lo: Fraction
    hi: Fraction

    @classmethod
    def from_interval(cls, x):
        return cls(lo(x), hi(x))

    @property
    def value(self):
        return (self.lo + self.hi) / 2

    @property
    def abs_error_bound(self):
        return (self.hi - self.lo) / 2

    def interval(self, c):
        return c.mpf([enclose(self.lo, c).a, enclose(self.hi, c).b])

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return f"PrecisionReal({float(self.value)!r} +/- {float(self.abs_error_bound):.3g})"
