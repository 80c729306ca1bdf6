"""The one-parameter family of iteration operators for z^n - 1.

Applying the damped-Newton composite with convexity weight ``alpha`` to
p(z) = z^n - 1 and simplifying yields a rational map whose numerator and
denominator are low-degree polynomials in w = z^n.  Three parameter values
collapse the generic rational form to something smaller; they are detected
by :func:`classify_form` and evaluated through their own reduced formulas.

Evaluation is total on the Riemann sphere: points with |z| > 1 are evaluated
in the reciprocal chart u = 1/z, and z in {0, infinity} go through exact
per-form tables, so no intermediate ever overflows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .sphere import (
    INFINITY,
    SpherePoint,
    as_sphere,
    int_power,
    is_infinity,
    principal_nth_root,
)

__all__ = [
    "FamilyParams",
    "OperatorForm",
    "FORM_TOLERANCE",
    "classify_form",
    "halley_alpha",
    "upper_degenerate_alpha",
    "newton_like_alpha",
    "evaluate",
    "eval_derivative",
    "reduced_map",
    "operator_degree",
]

# Two parameters closer than this to a special value are treated as that
# special value.
FORM_TOLERANCE = 1e-14


class OperatorForm(enum.Enum):
    """Structural form of the iteration operator at a given parameter."""

    GENERIC = "Generic"
    HALLEY_DEGENERATE = "HalleyDegenerate"
    UPPER_DEGENERATE = "UpperDegenerate"
    NEWTON_LIKE = "NewtonLike"


@dataclass(frozen=True)
class FamilyParams:
    """Family member: polynomial degree ``n`` and weight ``alpha``.

    ``n`` must be an integer >= 2; ``alpha`` is any finite complex number.
    """

    n: int
    alpha: complex

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool):
            raise DomainError("n must be an integer")
        if self.n < 2:
            raise DomainError("n must be at least 2")
        a = complex(self.alpha)
        if not (math.isfinite(a.real) and math.isfinite(a.imag)):
            raise DomainError("alpha must be finite")
        object.__setattr__(self, "alpha", a)

    @property
    def form(self) -> OperatorForm:
        return classify_form(self)


def halley_alpha() -> complex:
    """Parameter at which the operator collapses to the Halley map."""
    return complex(0.5)


def upper_degenerate_alpha(n: int) -> complex:
    """Parameter where the numerator/denominator share a factor and the
    origin and infinity swap in a two-cycle."""
    return complex((2 * n - 1) / (2 * n - 2))


def newton_like_alpha(n: int) -> complex:
    """Parameter where the denominator loses its w term and the free
    critical points move to infinity."""
    return complex(n / (n - 1))


def classify_form(params: FamilyParams) -> OperatorForm:
    """Detect the structural form of the operator at ``params``.

    A parameter within ``FORM_TOLERANCE`` of a collapsing value is treated
    as exactly that value.
    """
    n, a = params.n, params.alpha
    if abs(a - 0.5) <= FORM_TOLERANCE:
        return OperatorForm.HALLEY_DEGENERATE
    if abs(a - upper_degenerate_alpha(n)) <= FORM_TOLERANCE:
        return OperatorForm.UPPER_DEGENERATE
    if abs(a - newton_like_alpha(n)) <= FORM_TOLERANCE:
        return OperatorForm.NEWTON_LIKE
    return OperatorForm.GENERIC


# ---------------------------------------------------------------------------
# Coefficients of the operator as a rational function of w = z^n.
#
# Generic form:  O(z) = (a0 + a1 w + a2 w^2) / (z^(n-1) (d0 + d1 w))
# Its derivative: O'(z) = (w-1)^2 (n-1)(p0 + p1 w) / (2 n w (r0 + r1 w)^2)
# ---------------------------------------------------------------------------


def generic_numerator(n: int, a: complex) -> tuple[complex, complex, complex]:
    """(a0, a1, a2) with numerator a0 + a1 w + a2 w^2."""
    return (
        (1 - 2 * a) * (n - 1),
        2 - 4 * a - 4 * n + 6 * a * n - 2 * a * n * n,
        (n - 1) * (1 - 2 * a - 2 * n + 2 * a * n),
    )


def generic_denominator(n: int, a: complex) -> tuple[complex, complex]:
    """(d0, d1) with denominator z^(n-1) (d0 + d1 w)."""
    return (
        2 * n * a * (1 - n),
        2 * n * (a * n - a - n),
    )


def generic_derivative_factors(
    n: int, a: complex
) -> tuple[complex, complex, complex, complex]:
    """(p0, p1, r0, r1) for the derivative formula."""
    return (
        a * (1 - 2 * a) * (n - 1) ** 2,
        (1 - 2 * n - 2 * a + 2 * a * n) * (a * n - a - n),
        a * (n - 1),
        a + n - a * n,
    )


# Exact images of the origin and of infinity for each form.
_IMAGE_OF_ORIGIN = {
    OperatorForm.GENERIC: INFINITY,
    OperatorForm.HALLEY_DEGENERATE: 0j,
    OperatorForm.UPPER_DEGENERATE: INFINITY,
    OperatorForm.NEWTON_LIKE: INFINITY,
}
_IMAGE_OF_INFINITY = {
    OperatorForm.GENERIC: INFINITY,
    OperatorForm.HALLEY_DEGENERATE: INFINITY,
    OperatorForm.UPPER_DEGENERATE: 0j,
    OperatorForm.NEWTON_LIKE: INFINITY,
}


def evaluate(params: FamilyParams, z: SpherePoint) -> SpherePoint:
    """One step of the iteration, total on the sphere.

    ``|z| <= 1`` is evaluated directly; ``|z| > 1`` goes through the
    reciprocal chart so no power of z can overflow.  Exact poles map to the
    point at infinity.
    """
    form = classify_form(params)
    n, a = params.n, params.alpha
    if is_infinity(z):
        return _IMAGE_OF_INFINITY[form]
    z = complex(z)
    if z == 0:
        return _IMAGE_OF_ORIGIN[form]
    inv = abs(z) > 1.0
    x = 1.0 / z if inv else z
    xn1 = int_power(x, n - 1)
    xn = xn1 * x
    if form is OperatorForm.GENERIC:
        a0, a1, a2 = generic_numerator(n, a)
        d0, d1 = generic_denominator(n, a)
        if inv:
            num = a2 + xn * (a1 + a0 * xn)
            den = x * (d1 + d0 * xn)
        else:
            num = a0 + xn * (a1 + a2 * xn)
            den = xn1 * (d0 + d1 * xn)
    elif form is OperatorForm.HALLEY_DEGENERATE:
        if inv:
            num = (n - 1) + (n + 1) * xn
            den = x * ((n + 1) + (n - 1) * xn)
        else:
            num = x * ((n + 1) + (n - 1) * xn)
            den = (n - 1) + (n + 1) * xn
    elif form is OperatorForm.UPPER_DEGENERATE:
        if inv:
            num = xn * (xn + (2 * n - 1))
            den = x * (1 + (2 * n - 1) * xn)
        else:
            num = 1 + (2 * n - 1) * xn
            den = xn1 * ((2 * n - 1) + xn)
    else:  # NEWTON_LIKE
        if inv:
            num = (n + 1) * xn * xn + 2 * (n * n - 1) * xn - (n - 1)
            den = 2 * n * n * x * xn
        else:
            num = (n + 1) + xn * (2 * (n * n - 1) - (n - 1) * xn)
            den = 2 * n * n * xn1
    if den == 0:
        return INFINITY
    return as_sphere(num / den)


def eval_derivative(params: FamilyParams, z: SpherePoint) -> complex:
    """Derivative of the operator at a finite point.

    Finite and exact at the roots of unity (where it vanishes).  Points
    where the derivative has a pole (the origin for most forms, infinity
    always) raise :class:`DomainError`; the multiplier at infinity is a
    landmark, available through the fixed-point catalog.
    """
    form = classify_form(params)
    n, a = params.n, params.alpha
    if is_infinity(z):
        raise DomainError(
            "derivative at infinity is chart-dependent; "
            "use the fixed-point multiplier instead"
        )
    z = complex(z)
    if z == 0:
        if form is OperatorForm.HALLEY_DEGENERATE:
            return complex((n + 1) / (n - 1))
        raise DomainError("the derivative has a pole at the origin")
    inv = abs(z) > 1.0
    x = 1.0 / z if inv else z
    xn = int_power(x, n)
    if form is OperatorForm.GENERIC:
        p0, p1, r0, r1 = generic_derivative_factors(n, a)
        if inv:
            num = (n - 1) * (1 - xn) ** 2 * (p1 + p0 * xn)
            den = 2 * n * (r1 + r0 * xn) ** 2
        else:
            num = (xn - 1) ** 2 * (n - 1) * (p0 + p1 * xn)
            den = 2 * n * xn * (r0 + r1 * xn) ** 2
    elif form is OperatorForm.HALLEY_DEGENERATE:
        if inv:
            num = (n * n - 1) * (1 - xn) ** 2
            den = ((n + 1) + (n - 1) * xn) ** 2
        else:
            num = (n * n - 1) * (xn - 1) ** 2
            den = ((n - 1) + (n + 1) * xn) ** 2
    elif form is OperatorForm.UPPER_DEGENERATE:
        if inv:
            num = -(2 * n * n - 3 * n + 1) * (1 - xn) ** 2 * xn
            den = (1 + (2 * n - 1) * xn) ** 2
        else:
            num = -(2 * n * n - 3 * n + 1) * (xn - 1) ** 2
            den = xn * ((2 * n - 1) + xn) ** 2
    else:  # NEWTON_LIKE
        if inv:
            num = -(n * n - 1) * (1 - xn) ** 2
            den = 2 * n * n * xn
        else:
            num = -(n * n - 1) * (xn - 1) ** 2
            den = 2 * n * n * xn
    if den == 0:
        raise DomainError("the derivative has a pole at this point")
    value = num / den
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DomainError("the derivative overflows at this point")
    return value


def _form_w_polynomials(params: FamilyParams):
    """Numerator/denominator of O as polynomials in w, plus monomial powers.

    Returns (s, t, num_coeffs, den_coeffs) with
    O(z) = z^s N(w) / (z^t D(w)),  w = z^n,
    where coefficient tuples are ascending in w.
    """
    form = classify_form(params)
    n, a = params.n, params.alpha
    if form is OperatorForm.GENERIC:
        return 0, n - 1, generic_numerator(n, a), generic_denominator(n, a)
    if form is OperatorForm.HALLEY_DEGENERATE:
        return 1, 0, (complex(n + 1), complex(n - 1)), (complex(n - 1), complex(n + 1))
    if form is OperatorForm.UPPER_DEGENERATE:
        return 0, n - 1, (complex(1), complex(2 * n - 1)), (complex(2 * n - 1), complex(1))
    return (
        0,
        n - 1,
        (complex(n + 1), complex(2 * (n * n - 1)), complex(-(n - 1))),
        (complex(2 * n * n),),
    )


def _poly_eval(coeffs, x):
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def reduced_map(params: FamilyParams, w: SpherePoint) -> SpherePoint:
    """The quotient map on w = z^n that the operator semiconjugates to.

    Because the operator commutes with rotation by the nth roots of unity,
    w -> (O(z))^n depends on z only through w; this evaluates that induced
    rational map, totally on the sphere, using the same reciprocal-chart
    strategy as :func:`evaluate`.
    """
    s, t, num_c, den_c = _form_w_polynomials(params)
    n = params.n
    if is_infinity(w):
        inv = True
        v = 0j
    else:
        w = complex(w)
        if w == 0:
            num = int_power(_poly_eval(num_c, 0j), n)
            if t > 0 or num == 0:
                # w^t in the denominator: pole at the origin unless the
                # numerator vanishes there too (never happens here).
                return INFINITY if num != 0 else 0j
            den = int_power(_poly_eval(den_c, 0j), n)
            return INFINITY if den == 0 else as_sphere(num / den)
        inv = abs(w) > 1.0
        v = 1.0 / w if inv else w
    if not inv:
        num = int_power(v, s) * int_power(_poly_eval(num_c, v), n)
        den = int_power(v, t) * int_power(_poly_eval(den_c, v), n)
    else:
        # N(1/v) = rev(N)(v) / v^degN, D(1/v) = rev(D)(v) / v^degD;
        # collect the powers of v into a single monomial exponent.
        deg_n = len(num_c) - 1
        deg_d = len(den_c) - 1
        e = t - s + n * (deg_d - deg_n)
        num = int_power(_poly_eval(tuple(reversed(num_c)), v), n)
        den = int_power(_poly_eval(tuple(reversed(den_c)), v), n)
        if e >= 0:
            num = num * int_power(v, e)
        else:
            den = den * int_power(v, -e)
    if den == 0:
        return INFINITY
    return as_sphere(num / den)


def operator_degree(params: FamilyParams) -> int:
    """Topological degree of the operator as a map of the sphere."""
    form = classify_form(params)
    n = params.n
    if form is OperatorForm.HALLEY_DEGENERATE:
        return n + 1
    if form is OperatorForm.UPPER_DEGENERATE:
        return 2 * n - 1
    return 2 * n


def principal_free_critical_target(params: FamilyParams) -> complex:
    """The value whose nth roots are the free critical points (generic form).

    Raises :class:`DegenerateParameter` via landmarks when not applicable;
    this low-level helper assumes the generic form and a nonzero denominator.
    """
    n, a = params.n, params.alpha
    den = n * (2 * n - 1) - a * (4 * n - 1) * (n - 1) + 2 * a * a * (n - 1) ** 2
    num = a * (2 * a - 1) * (n - 1) ** 2
    return num / den


def principal_free_critical(params: FamilyParams) -> complex:
    """Principal free critical point c1 (generic form)."""
    return principal_nth_root(principal_free_critical_target(params), params.n)
