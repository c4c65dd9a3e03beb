"""Scalar kernel: exact rationals and approximate floats.

Exact mode uses arbitrary-precision rationals (gmpy2.mpq when available,
fractions.Fraction otherwise); arithmetic is associative, comparisons are
total, and equality is decidable.  Approximate mode uses 64-bit floats
with a global absolute tolerance and exists only for ball / support-oracle
domains whose support values are irrational.  The two modes never mix
inside one computation: exact entry points reject floats outright.
"""

from __future__ import annotations

import math
from fractions import Fraction
from operator import index as operator_index

try:
    from gmpy2 import mpq as _rat_impl

    _RAT_TYPES = (type(_rat_impl(0)), Fraction)
except ImportError:  # pragma: no cover - gmpy2 is normally installed
    _rat_impl = Fraction
    _RAT_TYPES = (Fraction,)

#: absolute tolerance for comparisons in approximate mode
APPROX_TOL = 1e-9

#: denominator precision (bits) for rational square-root bounds
SQRT_BITS = 20


class ModeMixingError(TypeError):
    """An exact computation received an approximate scalar or vice versa."""


def rat(a, b=None):
    """Build an exact rational from ints, rationals, or 'p/q' strings."""
    if b is not None:
        return _rat_impl(a) / _rat_impl(b)
    if isinstance(a, _RAT_TYPES):
        return _rat_impl(a)
    if isinstance(a, int):
        return _rat_impl(a)
    if isinstance(a, str):
        return _rat_impl(Fraction(a))
    if isinstance(a, float):
        raise ModeMixingError(f"exact scalar expected, got float {a!r}")
    try:  # integral types such as gmpy2.mpz or numpy integers
        return _rat_impl(int(operator_index(a)))
    except TypeError:
        raise TypeError(f"cannot build exact rational from {type(a).__name__}") from None


RAT_ZERO = rat(0)
RAT_ONE = rat(1)


def is_exact(x) -> bool:
    return isinstance(x, _RAT_TYPES) or isinstance(x, int)


def as_exact(x):
    """Coerce to an exact rational, rejecting floats."""
    if isinstance(x, float):
        raise ModeMixingError(f"exact scalar expected, got float {x!r}")
    return rat(x)


def as_float(x) -> float:
    """Coerce any scalar (exact or float) to a float."""
    return float(x)


def rat_str(x) -> str:
    """Serialize an exact rational as 'p/q' (or 'p' for integers)."""
    x = rat(x)
    return str(x)


def parse_rat(s):
    """Parse 'p/q', 'p', or an int into an exact rational."""
    if isinstance(s, int):
        return rat(s)
    if isinstance(s, str):
        return rat(s)
    raise TypeError(f"expected 'p/q' string or int, got {type(s).__name__}")


def num_den(x):
    x = rat(x)
    return int(x.numerator), int(x.denominator)


def sqrt_ub(x, bits: int = SQRT_BITS):
    """Rational upper bound on sqrt(x) at denominator 2**bits.

    Soundness matters, tightness does not: callers divide by the result to
    get certified lower bounds on Euclidean distances.
    """
    x = as_exact(x)
    if x < 0:
        raise ValueError("sqrt of negative value")
    p, q = num_den(x)
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return rat(rp, rq)
    # sqrt(p/q) = sqrt(p*q)/q <= (isqrt(p*q*4^bits) + 1) / (q*2^bits)
    scaled = p * q << (2 * bits)
    return rat(math.isqrt(scaled) + 1, q << bits)


def sqrt_lb(x, bits: int = SQRT_BITS):
    """Rational lower bound on sqrt(x) at denominator 2**bits."""
    x = as_exact(x)
    if x < 0:
        raise ValueError("sqrt of negative value")
    p, q = num_den(x)
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return rat(rp, rq)
    scaled = p * q << (2 * bits)
    return rat(math.isqrt(scaled), q << bits)


def to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator)) if not isinstance(x, int) else Fraction(x)
