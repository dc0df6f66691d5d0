"""Scalar conventions shared by the whole package.

Everything downstream runs in one of two modes:

* ``exact`` -- entries are `fractions.Fraction`; comparisons are exact and
  certificates are genuine proofs.
* ``approx`` -- entries are binary64 floats; comparisons carry a tolerance
  ``eps`` and results report margins instead of proofs.

A matrix (or polytope) is exact only if every entry is rational; a single
irrational entry demotes the whole object to approx mode.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

EXACT = "exact"
APPROX = "approx"

DEFAULT_EPS = 1e-9

# Rational values of 4cos^2(pi/k): the only exact-mode dihedral products < 4.
RATIONAL_COS_PRODUCTS = {Fraction(0): 2, Fraction(1): 3, Fraction(2): 4, Fraction(3): 6}

INFINITY = math.inf


class InputError(ValueError):
    """Malformed user-supplied data (bad JSON, bad matrix shape, bad mode)."""


def default_mode() -> str | None:
    env = os.environ.get("VINBERG_MODE")
    if env is None:
        return None
    env = env.strip().lower()
    if env not in (EXACT, APPROX):
        raise InputError(f"VINBERG_MODE must be 'exact' or 'approx', got {env!r}")
    return env


def parse_scalar(value):
    """Parse a JSON-ish scalar: int/Fraction stay exact, 'p/q' strings are
    exact rationals, 'inf' is infinity, floats stay floats."""
    if isinstance(value, bool):
        raise InputError(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if value == int(value) and abs(value) < 2**53:
            return Fraction(int(value))
        return value
    if isinstance(value, str):
        text = value.strip()
        if text.lower() in ("inf", "+inf", "infinity"):
            return INFINITY
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse scalar {value!r}") from exc
    raise InputError(f"cannot parse scalar {value!r}")


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int))


def all_exact(rows) -> bool:
    return all(is_exact(x) for row in rows for x in row)


def to_float(x) -> float:
    return float(x)


def scalar_repr(x) -> str:
    """Serialization used in reports: exact rationals as 'p/q', floats at 12
    significant digits."""
    if x == INFINITY:
        return "inf"
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    return f"{float(x):.12g}"


def sign_of(x, eps: float = 0.0) -> int:
    """Sign with a dead zone of width eps (eps=0 gives the exact sign)."""
    if isinstance(x, Fraction) and eps == 0.0:
        return (x > 0) - (x < 0)
    xf = float(x)
    if xf > eps:
        return 1
    if xf < -eps:
        return -1
    return 0
