"""Closed-form landmarks: fixed points, critical points, stability geometry.

Everything here is evaluated from explicit formulas — nothing is searched
numerically — so these values serve as independent anchors for the orbit
engine and the renderers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DegenerateParameter
from .operators import (
    FamilyParams,
    OperatorForm,
    FORM_TOLERANCE,
    classify_form,
    newton_like_alpha,
    principal_free_critical_target,
    upper_degenerate_alpha,
)
from .sphere import INFINITY, SpherePoint, nth_roots, roots_of_unity

__all__ = [
    "StabilityClass",
    "FixedPointKind",
    "CriticalPointKind",
    "FixedPointInfo",
    "CriticalPointInfo",
    "StabilityDisk",
    "DiskSubject",
    "CatalogLabel",
    "BifurcationCatalogEntry",
    "stability_class",
    "fixed_points",
    "critical_points",
    "stability_disks",
    "order4_alpha",
    "strange_fixed_multiplier",
    "multiplier_at_infinity",
    "precritical_alphas",
    "superattracting_strange_alpha",
    "bifurcation_catalog",
]

_STABILITY_EPS = 1e-10


class StabilityClass(enum.Enum):
    SUPERATTRACTING = "Superattracting"
    ATTRACTING = "Attracting"
    INDIFFERENT = "Indifferent"
    REPELLING = "Repelling"


class FixedPointKind(enum.Enum):
    ROOT = "Root"
    STRANGE = "Strange"
    INFINITY_FIXED = "InfinityFixed"


class CriticalPointKind(enum.Enum):
    ROOT_CRITICAL = "RootCritical"
    FREE_CRITICAL = "FreeCritical"
    ORIGIN_CRITICAL = "OriginCritical"


class DiskSubject(enum.Enum):
    INFINITY_FIXED = "InfinityFixed"
    STRANGE_FIXED = "StrangeFixed"


@dataclass(frozen=True)
class FixedPointInfo:
    location: SpherePoint
    multiplier: complex
    kind: FixedPointKind
    stability: StabilityClass


@dataclass(frozen=True)
class CriticalPointInfo:
    location: SpherePoint
    multiplicity: int
    kind: CriticalPointKind


@dataclass(frozen=True)
class StabilityDisk:
    center: complex
    radius: float
    subject: DiskSubject

    def contains(self, alpha: complex, margin: float = 0.0) -> bool:
        """True when alpha lies strictly inside the disk shrunk by ``margin``."""
        return abs(complex(alpha) - self.center) < self.radius - margin


class CatalogLabel(enum.Enum):
    CHEBYSHEV = "Chebyshev"
    HALLEY = "Halley"
    SUPER_HALLEY = "SuperHalley"
    ORDER4 = "Order4"
    UPPER_DEGENERATE = "UpperDegenerate"
    NEWTON_LIKE = "NewtonLike"
    SUPERATTRACTING_STRANGE = "SuperattractingStrange"
    PRECRITICAL_PLUS = "PrecriticalPlus"
    PRECRITICAL_MINUS = "PrecriticalMinus"


@dataclass(frozen=True)
class BifurcationCatalogEntry:
    alpha: complex
    label: CatalogLabel
    description: str


def stability_class(multiplier: complex) -> StabilityClass:
    """Classify a fixed point by the modulus of its multiplier."""
    m = abs(complex(multiplier))
    if m <= _STABILITY_EPS:
        return StabilityClass.SUPERATTRACTING
    if m < 1.0 - _STABILITY_EPS:
        return StabilityClass.ATTRACTING
    if abs(m - 1.0) <= _STABILITY_EPS:
        return StabilityClass.INDIFFERENT
    return StabilityClass.REPELLING


def order4_alpha(n: int) -> complex:
    """Parameter at which convergence order rises from 3 to 4."""
    return complex((2 * n - 1) / (3 * n - 3))


def superattracting_strange_alpha(n: int) -> complex:
    """Parameter at which the strange fixed points become superattracting."""
    return complex((2 * n - 1) / (n - 1))


def precritical_alphas(n: int) -> tuple[complex, complex]:
    """Parameters where the principal free critical point maps onto the
    origin (and from there to infinity)."""
    root = math.sqrt(2.0 * (n - 1))
    return (
        complex(1.0 / (n - 1), root / (n - 1)),
        complex(1.0 / (n - 1), -root / (n - 1)),
    )


def strange_fixed_multiplier(params: FamilyParams) -> complex:
    """Shared multiplier of the n strange fixed points (generic form)."""
    n, a = params.n, params.alpha
    return (4 * n - 2 - 2 * a * (n - 1)) / (n - 1)


def multiplier_at_infinity(params: FamilyParams) -> complex:
    """Multiplier of the fixed point at infinity.

    For the form whose origin<->infinity two-cycle replaces the fixed point
    at infinity, raises :class:`DegenerateParameter`.
    """
    form = classify_form(params)
    n, a = params.n, params.alpha
    if form is OperatorForm.HALLEY_DEGENERATE:
        return complex((n + 1) / (n - 1))
    if form is OperatorForm.UPPER_DEGENERATE:
        raise DegenerateParameter(
            "infinity is not fixed at this parameter: the origin and "
            "infinity form a two-cycle"
        )
    if form is OperatorForm.NEWTON_LIKE:
        return 0j
    return (2 * n * (a * n - a - n)) / ((n - 1) * (1 - 2 * a - 2 * n + 2 * a * n))


def _by_argument(points: list[complex]) -> list[complex]:
    """Deterministic presentation of an n-fold symmetric set: argument
    ascending in (-pi, pi]."""
    return sorted(points, key=lambda z: math.atan2(z.imag, z.real))


def _strange_target(params: FamilyParams) -> complex:
    """Value whose nth roots are the strange fixed points (generic form)."""
    n, a = params.n, params.alpha
    den = 1 - 2 * a - 3 * n + 2 * a * n
    if den == 0:
        raise DegenerateParameter(
            "strange fixed points escape to infinity at this parameter "
            "(their defining denominator vanishes)"
        )
    return (1 - 2 * a - n + 2 * a * n) / den


def fixed_points(params: FamilyParams) -> list[FixedPointInfo]:
    """All fixed points with multipliers and stability classes.

    Order: the n roots of unity first, then the strange fixed points (when
    present), then the origin (when fixed), then infinity (when fixed).
    """
    form = classify_form(params)
    n = params.n
    out = [
        FixedPointInfo(xi, 0j, FixedPointKind.ROOT, StabilityClass.SUPERATTRACTING)
        for xi in roots_of_unity(n)
    ]
    if form is OperatorForm.HALLEY_DEGENERATE:
        lam = complex((n + 1) / (n - 1))
        cls = stability_class(lam)
        out.append(FixedPointInfo(0j, lam, FixedPointKind.STRANGE, cls))
        out.append(FixedPointInfo(INFINITY, lam, FixedPointKind.INFINITY_FIXED, cls))
        return out
    if form is OperatorForm.UPPER_DEGENERATE:
        lam = complex((2 * n - 1) / (n - 1))
        cls = stability_class(lam)
        for z in _by_argument(nth_roots(complex(-1.0), n)):
            out.append(FixedPointInfo(z, lam, FixedPointKind.STRANGE, cls))
        return out
    if form is OperatorForm.NEWTON_LIKE:
        target = complex(-(n + 1) / (n - 1))
        lam = complex(2.0)
        lam_inf = 0j
    else:
        target = _strange_target(params)
        lam = strange_fixed_multiplier(params)
        lam_inf = multiplier_at_infinity(params)
    cls = stability_class(lam)
    for z in _by_argument(nth_roots(target, n)):
        out.append(FixedPointInfo(z, lam, FixedPointKind.STRANGE, cls))
    out.append(
        FixedPointInfo(
            INFINITY, lam_inf, FixedPointKind.INFINITY_FIXED, stability_class(lam_inf)
        )
    )
    return out


def critical_points(params: FamilyParams) -> list[CriticalPointInfo]:
    """All critical points with multiplicities.

    The roots of unity are always critical (multiplicity 2; 3 at the
    fourth-order parameter).  The origin carries multiplicity n-2 (omitted
    for n=2).  The generic form adds n free critical points; the form with
    free criticals pushed to infinity reports them there with multiplicity
    n; the degenerate two-cycle form pairs the origin with infinity.
    """
    form = classify_form(params)
    n, a = params.n, params.alpha
    root_mult = 3 if abs(a - order4_alpha(n)) <= FORM_TOLERANCE else 2
    out = [
        CriticalPointInfo(xi, root_mult, CriticalPointKind.ROOT_CRITICAL)
        for xi in roots_of_unity(n)
    ]
    if form is OperatorForm.HALLEY_DEGENERATE:
        return out
    if form is OperatorForm.UPPER_DEGENERATE:
        if n > 2:
            out.append(
                CriticalPointInfo(0j, n - 2, CriticalPointKind.ORIGIN_CRITICAL)
            )
            out.append(
                CriticalPointInfo(INFINITY, n - 2, CriticalPointKind.ORIGIN_CRITICAL)
            )
        return out
    if n > 2:
        out.append(CriticalPointInfo(0j, n - 2, CriticalPointKind.ORIGIN_CRITICAL))
    if form is OperatorForm.NEWTON_LIKE:
        out.append(CriticalPointInfo(INFINITY, n, CriticalPointKind.FREE_CRITICAL))
        return out
    target = principal_free_critical_target(params)
    for c in _by_argument(nth_roots(target, n)):
        out.append(CriticalPointInfo(c, 1, CriticalPointKind.FREE_CRITICAL))
    return out


def stability_disks(n: int) -> tuple[StabilityDisk, StabilityDisk]:
    """Parameter disks inside which infinity / the strange fixed points
    are attracting (infinity disk first)."""
    inf_center = (1 - 4 * n + 5 * n * n) / (2.0 * (n - 1) * (2 * n - 1))
    inf_radius = n / (2.0 * (2 * n - 1))
    strange_center = (2 * n - 1) / (n - 1.0)
    return (
        StabilityDisk(complex(inf_center), inf_radius, DiskSubject.INFINITY_FIXED),
        StabilityDisk(complex(strange_center), 0.5, DiskSubject.STRANGE_FIXED),
    )


def bifurcation_catalog(n: int) -> list[BifurcationCatalogEntry]:
    """The nine structurally special parameters, constructed from formulas."""
    pre_plus, pre_minus = precritical_alphas(n)
    return [
        BifurcationCatalogEntry(
            0j,
            CatalogLabel.CHEBYSHEV,
            "free critical points collapse onto the origin, which maps to "
            "the fixed point at infinity",
        ),
        BifurcationCatalogEntry(
            complex(0.5),
            CatalogLabel.HALLEY,
            "operator collapses to a degree-(n+1) map; the origin and "
            "infinity become repelling fixed points",
        ),
        BifurcationCatalogEntry(
            complex(1.0),
            CatalogLabel.SUPER_HALLEY,
            "classical accelerated member; the free critical target "
            "simplifies to (n-1)^2",
        ),
        BifurcationCatalogEntry(
            order4_alpha(n),
            CatalogLabel.ORDER4,
            "roots gain local degree 4 and the iteration converges with "
            "fourth order; free critical points coincide with the roots",
        ),
        BifurcationCatalogEntry(
            upper_degenerate_alpha(n),
            CatalogLabel.UPPER_DEGENERATE,
            "numerator and denominator share a factor: the degree drops to "
            "2n-1 and the origin and infinity swap in a two-cycle "
            "(superattracting for n > 2)",
        ),
        BifurcationCatalogEntry(
            newton_like_alpha(n),
            CatalogLabel.NEWTON_LIKE,
            "the denominator loses its z^n term: free critical points move "
            "to infinity and infinity becomes superattracting",
        ),
        BifurcationCatalogEntry(
            superattracting_strange_alpha(n),
            CatalogLabel.SUPERATTRACTING_STRANGE,
            "the strange fixed points become superattracting and swallow "
            "the free critical points",
        ),
        BifurcationCatalogEntry(
            pre_plus,
            CatalogLabel.PRECRITICAL_PLUS,
            "the principal free critical point maps onto the origin and "
            "from there to infinity",
        ),
        BifurcationCatalogEntry(
            pre_minus,
            CatalogLabel.PRECRITICAL_MINUS,
            "conjugate of the precritical-plus parameter: the free critical "
            "point maps onto the origin and from there to infinity",
        ),
    ]
