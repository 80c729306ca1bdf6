"""Orbit iteration: outcomes, convergence-order estimation, batch engine.

The scalar engine (:func:`iterate_orbit`) is total on the sphere and
classifies every orbit into one of four outcomes.  The batch engine
(:func:`batch_orbit_roots`) answers only "which root, after how many
steps" for whole arrays of seeds, using the same chart-switching
arithmetic as the scalar path so the two agree pixel for pixel.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import BasinEscape, DegenerateParameter, DomainError
from .operators import (
    FamilyParams,
    FORM_TOLERANCE,
    OperatorForm,
    classify_form,
    eval_derivative,
    evaluate,
    generic_denominator,
    generic_numerator,
    halley_alpha,
    principal_free_critical,
    upper_degenerate_alpha,
)
from .sphere import (
    INFINITY,
    SpherePoint,
    as_sphere,
    chordal_distance,
    int_power,
    is_finite,
    is_infinity,
    roots_of_unity,
)

__all__ = [
    "IterationBudget",
    "ConvergedToRoot",
    "ConvergedToPoint",
    "CycleDetected",
    "MaxIterations",
    "OrbitOutcome",
    "iterate_orbit",
    "OrderEstimate",
    "estimate_convergence_order",
    "critical_orbit_fate",
    "cat_set_membership",
    "batch_orbit_roots",
]


@dataclass(frozen=True)
class IterationBudget:
    """Limits and tolerances for orbit iteration."""

    max_iterations: int = 150
    root_tolerance: float = 1e-4
    cycle_detection: bool = True
    point_tolerance: float = 1e-8

    def __post_init__(self):
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be positive")
        if not (self.root_tolerance > 0 and self.point_tolerance > 0):
            raise DomainError("tolerances must be positive")


@dataclass(frozen=True)
class ConvergedToRoot:
    root_index: int
    iterations: int


@dataclass(frozen=True)
class ConvergedToPoint:
    location: SpherePoint
    iterations: int


@dataclass(frozen=True)
class CycleDetected:
    period: int
    representative: SpherePoint
    multiplier_estimate: complex


@dataclass(frozen=True)
class MaxIterations:
    last: SpherePoint


OrbitOutcome = Union[ConvergedToRoot, ConvergedToPoint, CycleDetected, MaxIterations]


def iterate_orbit(
    params: FamilyParams,
    seed: SpherePoint,
    budget: Optional[IterationBudget] = None,
) -> OrbitOutcome:
    """Iterate the operator from ``seed`` and classify the orbit.

    Checks, in order at every step (including the seed itself at step 0):
    proximity to a root of unity (Euclidean, first matching root index),
    stabilisation against the previous iterate (chordal), and - when
    ``cycle_detection`` is on - a return to a remembered earlier iterate,
    which triggers minimal-period extraction and a multiplier estimate.
    """
    if budget is None:
        budget = IterationBudget()
    roots = roots_of_unity(params.n)
    z = as_sphere(seed)
    prev: Optional[SpherePoint] = None
    snapshot: Optional[SpherePoint] = None
    snapshot_step = -1
    k = 0
    while True:
        if is_finite(z):
            zf = complex(z)
            for j, xi in enumerate(roots):
                if abs(zf - xi) < budget.root_tolerance:
                    return ConvergedToRoot(j, k)
        if prev is not None and chordal_distance(z, prev) < budget.point_tolerance:
            return ConvergedToPoint(z, k)
        if budget.cycle_detection:
            if (
                snapshot is not None
                and k > snapshot_step
                and chordal_distance(z, snapshot) < budget.point_tolerance
            ):
                period = _minimal_period(
                    params, z, k - snapshot_step, budget.point_tolerance
                )
                if period == 1:
                    return ConvergedToPoint(z, k)
                return CycleDetected(period, z, _cycle_multiplier(params, z, period))
            if k & (k - 1) == 0:
                # Remember iterates at steps 0, 1, 2, 4, 8, ...: any
                # eventual cycle is re-entered within twice its period.
                snapshot, snapshot_step = z, k
        if k >= budget.max_iterations:
            return MaxIterations(z)
        prev = z
        z = evaluate(params, z)
        k += 1


def _minimal_period(
    params: FamilyParams, rep: SpherePoint, candidate: int, tolerance: float
) -> int:
    """Smallest divisor d of ``candidate`` with O^d(rep) back within tolerance."""
    for d in range(1, candidate + 1):
        if candidate % d != 0:
            continue
        z = rep
        for _ in range(d):
            z = evaluate(params, z)
        if chordal_distance(z, rep) < tolerance:
            return d
    return candidate


def _cycle_multiplier(params: FamilyParams, rep: SpherePoint, period: int) -> complex:
    """Multiplier of the detected cycle.

    Product of derivatives along one period when every cycle point is
    finite and derivative-regular; otherwise (cycles through the origin or
    infinity) a one-period contraction ratio measured in the chordal
    metric, which is chart-free.
    """
    points = [rep]
    for _ in range(period - 1):
        points.append(evaluate(params, points[-1]))
    try:
        product = complex(1.0)
        for p in points:
            product *= eval_derivative(params, p)
        return product
    except DomainError:
        pass
    if is_infinity(rep):
        probe: SpherePoint = complex(1e7)
    elif complex(rep) == 0:
        probe = complex(1e-7)
    else:
        probe = complex(rep) + 1e-7 * max(1.0, abs(complex(rep)))
    before = chordal_distance(probe, rep)
    q = probe
    z = rep
    for _ in range(period):
        q = evaluate(params, q)
        z = evaluate(params, z)
    after = chordal_distance(q, z)
    if before == 0:
        return complex(0.0)
    return complex(after / before)


@dataclass(frozen=True)
class OrderEstimate:
    """Convergence-order measurement from successive error ratios."""

    estimate: float
    errors: tuple[float, ...]
    step_estimates: tuple[float, ...]


def estimate_convergence_order(
    params: FamilyParams,
    root_index: int = 0,
    offset: complex = 0.35,
    max_steps: int = 200,
    window: int = 1,
) -> OrderEstimate:
    """Empirical convergence order toward the chosen root of unity.

    Seeds at root * (1 + offset), records errors e_k = |z_k - root| while
    they stay above 1e-13, and forms the usual three-term ratio estimates
    log(e_{k+1}/e_k) / log(e_k/e_{k-1}).  Returns the median of the last
    ``window`` estimates; the final triple alone is the least contaminated
    by the pre-asymptotic transient, so the default window is 1.

    Raises :class:`BasinEscape` when the orbit leaves the basin (caught by
    not ending within 1e-6 of the root) and :class:`DomainError` when too
    few error triples exist to form any estimate.
    """
    if window < 1:
        raise DomainError("window must be at least 1")
    roots = roots_of_unity(params.n)
    if not 0 <= root_index < params.n:
        raise DomainError("root_index out of range")
    xi = roots[root_index]
    z: SpherePoint = xi * (1 + complex(offset))
    errors: list[float] = []
    for _ in range(max_steps):
        if is_infinity(z):
            break
        e = abs(complex(z) - xi)
        if e < 1e-13:
            break
        errors.append(e)
        z = evaluate(params, z)
    converged = is_finite(z) and abs(complex(z) - xi) < 1e-6
    if not converged:
        raise BasinEscape(
            f"orbit seeded at offset {offset} left the basin of root "
            f"{root_index} (n={params.n}, alpha={params.alpha})"
        )
    steps: list[float] = []
    for k in range(1, len(errors) - 1):
        den = math.log(errors[k] / errors[k - 1])
        if den != 0:
            steps.append(math.log(errors[k + 1] / errors[k]) / den)
    if not steps:
        raise DomainError(
            "orbit produced too few usable error triples to estimate an order"
        )
    return OrderEstimate(
        estimate=float(statistics.median(steps[-window:])),
        errors=tuple(errors),
        step_estimates=tuple(steps),
    )


def critical_orbit_fate(
    params: FamilyParams, budget: Optional[IterationBudget] = None
) -> OrbitOutcome:
    """Outcome of the orbit of the distinguished critical point.

    Generic form: the principal free critical point.  The form with free
    criticals at infinity starts there; the degenerate two-cycle form
    starts at the origin.  The Halley-collapse form has no free critical
    points, so the fate is undefined.
    """
    form = classify_form(params)
    if form is OperatorForm.HALLEY_DEGENERATE:
        raise DegenerateParameter(
            "this parameter has no free critical points: every critical "
            "point already sits on a root"
        )
    if form is OperatorForm.NEWTON_LIKE:
        seed: SpherePoint = INFINITY
    elif form is OperatorForm.UPPER_DEGENERATE:
        seed = 0j
    else:
        seed = principal_free_critical(params)
    return iterate_orbit(params, seed, budget)


def cat_set_membership(
    params: FamilyParams, budget: Optional[IterationBudget] = None
) -> bool:
    """True when the free critical orbit does NOT reach a root of unity
    within the budget.

    This is the numerical stand-in for the parameter set where critical
    orbits avoid the root basins; like the black pixels of a parameter
    plane, it conflates true avoidance with convergence slower than the
    budget allows.
    """
    form = classify_form(params)
    if form not in (OperatorForm.GENERIC, OperatorForm.NEWTON_LIKE):
        raise DegenerateParameter(
            "membership is defined for the full-degree operator forms only"
        )
    return not isinstance(critical_orbit_fate(params, budget), ConvergedToRoot)


# ---------------------------------------------------------------------------
# Batch engine
# ---------------------------------------------------------------------------


def _batch_coefficients(n: int, alpha):
    """Per-form w-coefficients for the vectorized step.

    ``alpha`` may be a scalar (any form) or an array (generic formulas with
    collapsing parameters masked out by the caller).
    """
    a = alpha
    a0, a1, a2 = generic_numerator(n, a)
    d0, d1 = generic_denominator(n, a)
    return a0, a1, a2, d0, d1


def _batch_step_generic(n, coeffs, z):
    a0, a1, a2, d0, d1 = coeffs
    inv = np.abs(z) > 1.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x = np.where(inv, 1.0 / z, z)
        xn1 = int_power(x, n - 1)
        xn = xn1 * x
        num = np.where(inv, a2 + xn * (a1 + a0 * xn), a0 + xn * (a1 + a2 * xn))
        den = np.where(inv, x * (d1 + d0 * xn), xn1 * (d0 + d1 * xn))
        return num / den


def _batch_step_halley(n, z):
    inv = np.abs(z) > 1.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x = np.where(inv, 1.0 / z, z)
        xn1 = int_power(x, n - 1)
        xn = xn1 * x
        num = np.where(inv, (n - 1) + (n + 1) * xn, x * ((n + 1) + (n - 1) * xn))
        den = np.where(inv, x * ((n + 1) + (n - 1) * xn), (n - 1) + (n + 1) * xn)
        return num / den


def _batch_step_upper(n, z):
    inv = np.abs(z) > 1.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x = np.where(inv, 1.0 / z, z)
        xn1 = int_power(x, n - 1)
        xn = xn1 * x
        num = np.where(inv, xn * (xn + (2 * n - 1)), 1 + (2 * n - 1) * xn)
        den = np.where(inv, x * (1 + (2 * n - 1) * xn), xn1 * ((2 * n - 1) + xn))
        return num / den


def _batch_step_newton_like(n, z):
    inv = np.abs(z) > 1.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        x = np.where(inv, 1.0 / z, z)
        xn1 = int_power(x, n - 1)
        xn = xn1 * x
        num = np.where(
            inv,
            (n + 1) * xn * xn + 2 * (n * n - 1) * xn - (n - 1),
            (n + 1) + xn * (2 * (n * n - 1) - (n - 1) * xn),
        )
        den = np.where(inv, 2 * n * n * x * xn, 2 * n * n * xn1)
        return num / den


def batch_orbit_roots(
    n: int,
    alpha,
    seeds: np.ndarray,
    budget: Optional[IterationBudget] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Root-convergence outcomes for an array of seeds.

    ``alpha`` is either a scalar (dynamical-plane mode: one operator, many
    seeds) or an array of the same shape as ``seeds`` (parameter-plane
    mode: one seed per parameter, evaluated through the generic formulas;
    parameters within the form tolerance of a collapsing value whose
    generic coefficients would be invalid are reported as non-converged).

    Returns ``(root_index, iterations)`` int32 arrays shaped like
    ``seeds``; non-converged entries hold -1 and the iteration budget.
    """
    if budget is None:
        budget = IterationBudget()
    seeds = np.asarray(seeds, dtype=np.complex128)
    shape = seeds.shape
    z = seeds.ravel().copy()
    size = z.size
    root_index = np.full(size, -1, dtype=np.int32)
    iterations = np.full(size, budget.max_iterations, dtype=np.int32)
    roots = np.array(roots_of_unity(n), dtype=np.complex128)

    alpha_is_array = isinstance(alpha, np.ndarray) and alpha.shape == shape
    if alpha_is_array:
        a_flat = alpha.ravel().astype(np.complex128)
        step_mode = "array"
        coeffs = _batch_coefficients(n, a_flat)
        # Parameters collapsing to the reduced forms have no free critical
        # orbit to follow (or follow the origin/infinity two-cycle); they
        # are reported as non-converged, matching the scalar engine.
        masked = (np.abs(a_flat - halley_alpha()) <= FORM_TOLERANCE) | (
            np.abs(a_flat - upper_degenerate_alpha(n)) <= FORM_TOLERANCE
        )
        z = np.where(masked, np.complex128(complex(float("nan"), float("nan"))), z)
    else:
        params = FamilyParams(n, complex(alpha))
        form = classify_form(params)
        if form is OperatorForm.GENERIC:
            step_mode = "generic"
            coeffs = _batch_coefficients(n, params.alpha)
        elif form is OperatorForm.HALLEY_DEGENERATE:
            step_mode = "halley"
            coeffs = None
        elif form is OperatorForm.UPPER_DEGENERATE:
            step_mode = "upper"
            coeffs = None
        else:
            step_mode = "newton"
            coeffs = None

    active = np.arange(size, dtype=np.intp)
    prefilter_slack = budget.root_tolerance + 1e-12
    for k in range(budget.max_iterations + 1):
        za = z[active]
        finite = np.isfinite(za.real) & np.isfinite(za.imag)
        if step_mode == "upper":
            # The two-cycle form swaps the origin and infinity, so a pixel
            # that blows up is still live: park it at a huge stand-in that
            # the reciprocal chart maps back near the origin.
            za = np.where(finite, za, np.complex128(1e300))
            z[active] = za
            finite = np.ones_like(finite)
        if not np.all(finite):
            active = active[finite]
            za = z[active]
        if active.size == 0:
            break
        near = np.abs(np.abs(za) - 1.0) < prefilter_slack
        if np.any(near):
            cand = active[near]
            zc = z[cand]
            assigned = np.zeros(cand.size, dtype=bool)
            for j in range(n):
                hit = (~assigned) & (np.abs(zc - roots[j]) < budget.root_tolerance)
                if np.any(hit):
                    idx = cand[hit]
                    root_index[idx] = j
                    iterations[idx] = k
                    assigned |= hit
            if np.any(assigned):
                keep = np.ones(active.size, dtype=bool)
                keep[np.flatnonzero(near)[assigned]] = False
                active = active[keep]
        if active.size == 0 or k == budget.max_iterations:
            break
        za = z[active]
        if step_mode == "generic":
            z[active] = _batch_step_generic(n, coeffs, za)
        elif step_mode == "halley":
            z[active] = _batch_step_halley(n, za)
        elif step_mode == "upper":
            z[active] = _batch_step_upper(n, za)
        elif step_mode == "newton":
            z[active] = _batch_step_newton_like(n, za)
        else:
            sub = (coeffs[0][active], coeffs[1][active], coeffs[2][active],
                   coeffs[3][active], coeffs[4][active])
            z[active] = _batch_step_generic(n, sub, za)
    return root_index.reshape(shape), iterations.reshape(shape)
