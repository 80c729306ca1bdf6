"""Orbit iteration, cycle detection, convergence-order estimation, and the
vectorized batch engine's bit-agreement with the scalar path."""

import cmath
import random

import numpy as np
import pytest

from chebhalley import (
    INFINITY,
    BasinEscape,
    ConvergedToPoint,
    ConvergedToRoot,
    CycleDetected,
    DegenerateParameter,
    DomainError,
    FamilyParams,
    IterationBudget,
    MaxIterations,
    batch_orbit_roots,
    cat_set_membership,
    critical_orbit_fate,
    estimate_convergence_order,
    is_finite,
    is_infinity,
    iterate_orbit,
    roots_of_unity,
)


# ---------------------------------------------------------------------------
# Budgets
# ---------------------------------------------------------------------------


def test_budget_validation():
    with pytest.raises(DomainError):
        IterationBudget(max_iterations=0)
    with pytest.raises(DomainError):
        IterationBudget(root_tolerance=0.0)
    with pytest.raises(DomainError):
        IterationBudget(point_tolerance=-1.0)
    assert IterationBudget().max_iterations == 150


# ---------------------------------------------------------------------------
# Scalar orbits
# ---------------------------------------------------------------------------


def test_seed_on_a_root_converges_in_zero_iterations():
    params = FamilyParams(3, 0.2 + 1.4j)
    for j, xi in enumerate(roots_of_unity(3)):
        assert iterate_orbit(params, xi) == ConvergedToRoot(j, 0)


def test_seed_within_root_tolerance_counts_as_converged():
    params = FamilyParams(3, 0.7)
    out = iterate_orbit(params, 1.0 + 5e-5j)
    assert out == ConvergedToRoot(0, 0)


def test_generic_seed_reaches_a_root():
    out = iterate_orbit(FamilyParams(3, 0.7), 0.3 + 0.3j)
    assert out == ConvergedToRoot(0, 4)


def test_budget_exhaustion_reports_last_iterate():
    out = iterate_orbit(FamilyParams(3, 0.7), 0.3 + 0.3j,
                        IterationBudget(max_iterations=1))
    assert isinstance(out, MaxIterations)
    assert is_finite(out.last)


def test_infinity_is_fixed_for_the_full_family():
    out = iterate_orbit(FamilyParams(3, 0.2 + 1.4j), INFINITY)
    assert isinstance(out, ConvergedToPoint)
    assert is_infinity(out.location)
    assert out.iterations == 1


def test_orbit_rotation_symmetry():
    # the operator commutes with multiplication by the primitive nth root of
    # unity, so rotated seeds land on the rotated root after the same number
    # of steps
    n = 3
    omega = cmath.exp(2j * cmath.pi / n)
    rng = random.Random(11)
    for alpha in (0.2 + 1.4j, 0.7 + 0j):
        params = FamilyParams(n, alpha)
        compared = 0
        for _ in range(60):
            z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
            base = iterate_orbit(params, z)
            if not isinstance(base, ConvergedToRoot):
                continue
            rotated = iterate_orbit(params, omega * z)
            assert isinstance(rotated, ConvergedToRoot)
            assert rotated.root_index == (base.root_index + 1) % n
            assert rotated.iterations == base.iterations
            compared += 1
        assert compared > 20


# ---------------------------------------------------------------------------
# Critical orbits and membership
# ---------------------------------------------------------------------------


def test_critical_orbit_at_the_superattracting_strange_parameter():
    out = critical_orbit_fate(FamilyParams(3, 2.5))
    assert isinstance(out, ConvergedToPoint)
    assert complex(out.location) == pytest.approx(4.0 ** (1.0 / 3.0) + 0j, rel=1e-12)


def test_critical_orbit_on_the_origin_infinity_two_cycle():
    budget = IterationBudget(max_iterations=200)
    out3 = critical_orbit_fate(FamilyParams(3, 1.25), budget)
    assert isinstance(out3, CycleDetected)
    assert out3.period == 2
    assert abs(out3.multiplier_estimate) < 1e-6  # superattracting for n > 2
    out5 = critical_orbit_fate(FamilyParams(5, 9.0 / 8.0), budget)
    assert isinstance(out5, CycleDetected)
    assert out5.period == 2
    assert abs(out5.multiplier_estimate) < 1e-6
    out2 = critical_orbit_fate(FamilyParams(2, 1.5), budget)
    assert isinstance(out2, CycleDetected)
    assert out2.period == 2
    assert abs(out2.multiplier_estimate) == pytest.approx(9.0, abs=1e-2)


def test_critical_orbit_for_the_simplified_form_starts_at_infinity():
    out = critical_orbit_fate(FamilyParams(3, 1.5))
    assert isinstance(out, ConvergedToPoint)
    assert is_infinity(out.location)


def test_critical_orbit_undefined_for_the_collapsed_form():
    with pytest.raises(DegenerateParameter):
        critical_orbit_fate(FamilyParams(3, 0.5))


def test_membership_examples():
    assert cat_set_membership(FamilyParams(2, 2.0)) is True
    assert cat_set_membership(FamilyParams(3, 2.5)) is True
    assert cat_set_membership(FamilyParams(3, 5.0 / 6.0)) is False
    with pytest.raises(DegenerateParameter):
        cat_set_membership(FamilyParams(3, 0.5))
    with pytest.raises(DegenerateParameter):
        cat_set_membership(FamilyParams(3, 1.25))


# ---------------------------------------------------------------------------
# Convergence-order estimation
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "n, alpha, target",
    [
        (2, 1.0 + 0j, 4.0),
        (3, 5.0 / 6.0 + 0j, 4.0),
        (3, 0j, 3.0),
        (3, 0.5 + 0j, 3.0),
        (10, 0j, 3.0),
    ],
)
def test_order_estimates(n, alpha, target):
    est = estimate_convergence_order(FamilyParams(n, alpha))
    assert abs(est.estimate - target) < 0.2
    assert est.errors[0] == pytest.approx(0.35)
    assert all(e >= 1e-13 for e in est.errors)
    assert est.errors[-1] < est.errors[0]
    assert len(est.step_estimates) >= 1


def test_order_estimator_detects_basin_escape():
    with pytest.raises(BasinEscape):
        estimate_convergence_order(FamilyParams(3, 2.5))


def test_order_estimator_starves_on_tiny_offsets():
    # fourth-order convergence burns through the measurable error range in
    # two steps when the seed starts at relative distance 1e-2
    with pytest.raises(DomainError):
        estimate_convergence_order(FamilyParams(3, 0.7), offset=0.01)


def test_order_estimator_argument_validation():
    with pytest.raises(DomainError):
        estimate_convergence_order(FamilyParams(3, 0.7), window=0)
    with pytest.raises(DomainError):
        estimate_convergence_order(FamilyParams(3, 0.7), root_index=3)


# ---------------------------------------------------------------------------
# Batch engine
# ---------------------------------------------------------------------------


def _scalar_root_table(params, seeds, budget):
    root = np.full(seeds.shape, -1, dtype=np.int32)
    iters = np.full(seeds.shape, budget.max_iterations, dtype=np.int32)
    for idx in np.ndindex(seeds.shape):
        out = iterate_orbit(params, complex(seeds[idx]), budget)
        if isinstance(out, ConvergedToRoot):
            root[idx] = out.root_index
            iters[idx] = out.iterations
    return root, iters


@pytest.mark.parametrize(
    "n, alpha",
    [
        (3, 0.2 + 1.4j),
        (2, 0.7 - 1.1j),
        (10, 1.0 + 0.5j),
        (3, 0.5 + 0j),
        (3, 1.25 + 0j),
        (3, 1.5 + 0j),
        (5, 9.0 / 8.0 + 0j),
    ],
)
def test_batch_agrees_with_scalar_engine(n, alpha):
    rng = np.random.default_rng(7)
    seeds = (rng.uniform(-2, 2, (12, 13)) + 1j * rng.uniform(-2, 2, (12, 13)))
    budget = IterationBudget(max_iterations=60, cycle_detection=False)
    params = FamilyParams(n, alpha)
    want_root, want_iters = _scalar_root_table(params, seeds, budget)
    got_root, got_iters = batch_orbit_roots(n, alpha, seeds, budget)
    assert np.array_equal(got_root, want_root)
    assert np.array_equal(got_iters, want_iters)


def test_batch_array_alpha_agrees_with_scalar_engine():
    from chebhalley import principal_free_critical

    n = 3
    re = np.linspace(-0.5, 2.5, 9)
    im = np.linspace(-1.0, 1.0, 9)
    alphas = (re[None, :] + 1j * im[:, None]).astype(np.complex128)
    alphas[0, 0] = 0.5       # collapsed form: masked to non-converged
    alphas[1, 1] = 1.25      # two-cycle form: masked to non-converged
    seeds = np.zeros_like(alphas)
    for idx in np.ndindex(alphas.shape):
        a = complex(alphas[idx])
        if a in (0.5 + 0j, 1.25 + 0j):
            continue
        seeds[idx] = principal_free_critical(FamilyParams(n, a))
    budget = IterationBudget(max_iterations=60, cycle_detection=False)
    got_root, got_iters = batch_orbit_roots(n, alphas, seeds, budget)
    assert got_root[0, 0] == -1 and got_root[1, 1] == -1
    assert got_iters[0, 0] == 60 and got_iters[1, 1] == 60
    mismatches = 0
    for idx in np.ndindex(alphas.shape):
        a = complex(alphas[idx])
        if a in (0.5 + 0j, 1.25 + 0j):
            continue
        out = iterate_orbit(FamilyParams(n, a), complex(seeds[idx]), budget)
        if isinstance(out, ConvergedToRoot):
            if got_root[idx] != out.root_index or got_iters[idx] != out.iterations:
                mismatches += 1
        elif got_root[idx] != -1:
            mismatches += 1
    assert mismatches == 0


def test_batch_nonconverged_markers():
    # seeds on the two-cycle never reach a root; markers are -1 and the
    # full budget
    budget = IterationBudget(max_iterations=40, cycle_detection=False)
    root, iters = batch_orbit_roots(3, 1.25, np.array([0j, 100.0 + 0j]), budget)
    assert root.tolist() == [-1, -1]
    assert iters.tolist() == [40, 40]
