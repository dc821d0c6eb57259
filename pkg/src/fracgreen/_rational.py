"""Exact-rational helpers shared by the series engines."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

MAX_DENOMINATOR = 10**6


def as_number(x):
    """Return ``x`` as a Fraction when it is (to rounding) a small rational.

    Parameters such as ``1 - 2/alpha`` arrive as floats carrying rounding
    noise; snapping them to the rational they represent lets the
    high-precision engines treat coincident poles as exactly coincident and
    sum cancelling series coherently.  Anything else is returned as float.
    """
    if isinstance(x, Rational):
        return Fraction(x)
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"non-finite parameter {x}")
    f = Fraction(x).limit_denominator(MAX_DENOMINATOR)
    if abs(float(f) - x) <= 4.0 * math.ulp(x) + 1e-300:
        return f
    return x


def is_rational(x) -> bool:
    return isinstance(x, Fraction)


def common_denominator(values) -> int:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return den


def nonpositive_integer(x):
    """n >= 0 if x == -n exactly (Fractions) or within 1e-12 (floats), else None."""
    if isinstance(x, Fraction):
        if x.denominator == 1 and x <= 0:
            return int(-x)
        return None
    r = round(x)
    if r <= 0 and abs(x - r) <= 1e-12 * max(1.0, abs(x)):
        return int(-r)
    return None
