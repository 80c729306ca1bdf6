"""Arithmetic on the extended complex plane (Riemann sphere).

Finite points are plain Python ``complex`` numbers; the point at infinity is
the singleton :data:`INFINITY`.  All helpers here are overflow-safe: values
whose magnitude cannot be represented are promoted to :data:`INFINITY`
explicitly by callers via :func:`as_sphere`, never left as IEEE infinities.
"""

from __future__ import annotations

import math
from typing import Union

from .errors import DomainError

__all__ = [
    "INFINITY",
    "Infinity",
    "SpherePoint",
    "add",
    "sub",
    "mul",
    "div",
    "as_sphere",
    "is_infinity",
    "is_finite",
    "int_power",
    "nth_roots",
    "principal_nth_root",
    "roots_of_unity",
    "chordal_distance",
]

_TWO_PI = 2.0 * math.pi

# Above this magnitude the direct chordal formula could overflow; switch to
# the inversion identity instead.
_CHORDAL_SAFE = 1e150


class Infinity:
    """The point at infinity.  Use the module-level singleton ``INFINITY``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (Infinity, ())


INFINITY = Infinity()

SpherePoint = Union[complex, Infinity]


def is_infinity(p: SpherePoint) -> bool:
    """True when ``p`` is the point at infinity."""
    return p is INFINITY or isinstance(p, Infinity)


def is_finite(p: SpherePoint) -> bool:
    """True when ``p`` is a finite complex number."""
    return not is_infinity(p)


def as_sphere(value) -> SpherePoint:
    """Promote a number to a sphere point.

    Non-finite complex values (overflow or division-by-zero flags) become
    :data:`INFINITY`; everything else is returned as ``complex``.
    """
    if is_infinity(value):
        return INFINITY
    z = complex(value)
    if math.isfinite(z.real) and math.isfinite(z.imag):
        return z
    return INFINITY


def add(a: complex, b: complex) -> complex:
    """Sum of two finite complex numbers."""
    return complex(a) + complex(b)


def sub(a: complex, b: complex) -> complex:
    """Difference of two finite complex numbers."""
    return complex(a) - complex(b)


def mul(a: complex, b: complex) -> complex:
    """Product of two finite complex numbers."""
    return complex(a) * complex(b)


def div(a: complex, b: complex) -> complex:
    """Quotient of two finite complex numbers.

    Division by exact zero yields a flagged non-finite value; pass the result
    through :func:`as_sphere` to promote it to the point at infinity.
    """
    a = complex(a)
    b = complex(b)
    if b == 0:
        return complex(math.inf, math.inf)
    return a / b


def int_power(z, exponent: int):
    """``z`` raised to a non-negative integer power by binary exponentiation.

    Works on complex scalars and numpy arrays alike; the multiplication
    order is fixed so scalar and vectorized callers produce bit-identical
    results.
    """
    if exponent < 0:
        raise DomainError("int_power requires a non-negative exponent")
    result = z * 0 + 1.0
    base = z
    k = exponent
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def principal_nth_root(w: complex, n: int) -> complex:
    """Principal nth root of a finite ``w``: argument in (-pi/n, pi/n]."""
    if n < 1:
        raise DomainError("root order must be a positive integer")
    w = complex(w)
    if w == 0:
        return 0j
    rho = abs(w) ** (1.0 / n)
    theta = math.atan2(w.imag, w.real) / n
    return complex(rho * math.cos(theta), rho * math.sin(theta))


def nth_roots(w: complex, n: int) -> list[complex]:
    """All nth roots of a finite ``w``, principal branch first.

    The first entry has argument in (-pi/n, pi/n]; the rest follow
    counterclockwise.  The nth root of zero is zero with multiplicity n.
    """
    if n < 1:
        raise DomainError("root order must be a positive integer")
    if is_infinity(w):
        raise DomainError("nth_roots requires a finite value")
    w = complex(w)
    if w == 0:
        return [0j] * n
    rho = abs(w) ** (1.0 / n)
    theta = math.atan2(w.imag, w.real) / n
    return [
        complex(
            rho * math.cos(theta + _TWO_PI * k / n),
            rho * math.sin(theta + _TWO_PI * k / n),
        )
        for k in range(n)
    ]


def roots_of_unity(n: int) -> list[complex]:
    """The n complex roots of 1, starting at 1 and going counterclockwise."""
    if n < 1:
        raise DomainError("root order must be a positive integer")
    return [
        complex(math.cos(_TWO_PI * k / n), math.sin(_TWO_PI * k / n))
        for k in range(n)
    ]


def _invert(p: SpherePoint) -> SpherePoint:
    if is_infinity(p):
        return 0j
    if p == 0:
        return INFINITY
    return 1.0 / p


def chordal_distance(a: SpherePoint, b: SpherePoint) -> float:
    """Chordal metric on the sphere: 2|a-b| / (sqrt(1+|a|^2) sqrt(1+|b|^2)).

    Total and overflow-safe for any pair of sphere points; the maximum
    possible value is 2 (antipodal points).  Large magnitudes are handled
    through the exact inversion identity d(a, b) = d(1/a, 1/b).
    """
    a_inf = is_infinity(a)
    b_inf = is_infinity(b)
    if a_inf and b_inf:
        return 0.0
    if a_inf or b_inf:
        finite = b if a_inf else a
        r = abs(finite)
        if r <= _CHORDAL_SAFE:
            return 2.0 / math.sqrt(1.0 + r * r)
        return 2.0 / r
    ra = abs(a)
    rb = abs(b)
    if ra > _CHORDAL_SAFE and rb > _CHORDAL_SAFE:
        return chordal_distance(_invert(a), _invert(b))
    if ra > _CHORDAL_SAFE:
        # sqrt(1 + ra^2) rounds to ra here; divide first to dodge overflow.
        return 2.0 * (abs(a - b) / ra) / math.sqrt(1.0 + rb * rb)
    if rb > _CHORDAL_SAFE:
        return 2.0 * (abs(a - b) / rb) / math.sqrt(1.0 + ra * ra)
    return 2.0 * abs(a - b) / (math.sqrt(1.0 + ra * ra) * math.sqrt(1.0 + rb * rb))
