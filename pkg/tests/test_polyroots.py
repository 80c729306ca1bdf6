"""Dense polynomial arithmetic and the simultaneous root solver."""

import math

import pytest

from chebhalley import (
    INFINITY,
    ComplexPolynomial,
    DomainError,
    FamilyParams,
    all_roots,
    chordal_distance,
    evaluate,
    operator_degree,
    preimage_polynomial,
)


def _from_roots(roots: list[complex]) -> ComplexPolynomial:
    coeffs = [1.0 + 0j]
    for r in roots:
        coeffs = [0j] + coeffs
        for k in range(len(coeffs) - 1):
            coeffs[k] -= r * coeffs[k + 1]
    return ComplexPolynomial(tuple(coeffs))


# ---------------------------------------------------------------------------
# ComplexPolynomial basics
# ---------------------------------------------------------------------------


def test_polynomial_degree_and_trailing_trim():
    p = ComplexPolynomial((1.0, 2.0, 0.0))
    assert p.degree == 1
    assert p.coefficients == (1.0 + 0j, 2.0 + 0j)
    assert ComplexPolynomial((0j,)).degree == 0


def test_polynomial_evaluation_and_derivative():
    # (z - 1)^3 (z + 2) = z^4 - z^3 - 3 z^2 + 5 z - 2
    p = ComplexPolynomial((-2.0, 5.0, -3.0, -1.0, 1.0))
    assert p(1.0 + 0j) == 0j
    assert p(-2.0 + 0j) == 0j
    assert p(2.0 + 0j) == (16 - 8 - 12 + 10 - 2)
    dp = p.derivative()
    assert dp.coefficients == (5.0 + 0j, -6.0 + 0j, -3.0 + 0j, 4.0 + 0j)
    assert ComplexPolynomial((3.0,)).derivative().coefficients == (0j,)


# ---------------------------------------------------------------------------
# Root solving
# ---------------------------------------------------------------------------


def test_all_roots_recovers_a_triple_root_exactly_once_merged():
    p = ComplexPolynomial((-2.0, 5.0, -3.0, -1.0, 1.0))
    roots = all_roots(p)
    assert len(roots) == 4
    near_one = [r for r in roots if abs(r - 1.0) < 1e-6]
    assert len(near_one) == 3
    # the cluster merge replaces the smeared triple by one shared center,
    # polished on the second derivative where the triple root is a simple,
    # well-conditioned zero
    assert len({r for r in near_one}) == 1
    assert abs(near_one[0] - 1.0) < 1e-12
    other = [r for r in roots if abs(r + 2.0) < 1e-10]
    assert len(other) == 1


def test_all_roots_matches_a_known_simple_root_multiset():
    targets = [2.0 + 0j, -1.0 + 1.0j, -1.0 - 1.0j, 0.5 + 0j]
    roots = all_roots(_from_roots(targets))
    assert len(roots) == 4
    for t in targets:
        assert min(abs(r - t) for r in roots) < 1e-10


def test_all_roots_strips_origin_factors_without_iteration():
    p = ComplexPolynomial((0.0, 0.0, 0.0, 1.0))
    assert all_roots(p) == [0j, 0j, 0j]


def test_all_roots_ordering_is_deterministic():
    p = _from_roots([1j, -1j, 2.0 + 0j, -2.0 + 0j])
    first = all_roots(p)
    second = all_roots(p)
    assert first == second
    magnitudes = [abs(r) for r in first]
    assert magnitudes == sorted(magnitudes)


def test_all_roots_rejects_the_zero_polynomial():
    with pytest.raises(DomainError):
        all_roots(ComplexPolynomial((0j,)))
    assert all_roots(ComplexPolynomial((3.0,))) == []


def test_all_roots_residuals_stay_within_contract():
    p = _from_roots([0.1 + 0.9j, -0.7 + 0j, 1.3 - 0.4j, 2.0 + 2.0j, -1.5 - 0.5j])
    top = max(abs(c) for c in p.coefficients)
    for r in all_roots(p):
        scale = top * max(1.0, abs(r)) ** p.degree
        assert abs(p(r)) <= 1e-10 * scale


# ---------------------------------------------------------------------------
# Preimage polynomials
# ---------------------------------------------------------------------------


def test_preimages_of_infinity_for_the_full_family():
    params = FamilyParams(3, 0.7)
    poly = preimage_polynomial(params, INFINITY)
    roots = all_roots(poly)
    at_origin = [r for r in roots if r == 0j]
    ring = [r for r in roots if r != 0j]
    assert len(at_origin) == 2
    assert len(ring) == 3
    for r in ring:
        assert abs(r**3 - (-0.875)) < 1e-10


@pytest.mark.parametrize(
    "n, alpha",
    [(3, 0.7 + 0j), (3, 0.5 + 0j), (3, 1.25 + 0j), (3, 1.5 + 0j), (2, 0.2 + 0.9j)],
)
def test_preimage_count_matches_operator_degree(n, alpha):
    params = FamilyParams(n, alpha)
    target = 0.3 + 0.2j
    poly = preimage_polynomial(params, target)
    roots = all_roots(poly)
    # a non-exceptional finite value has every preimage finite
    assert len(roots) == operator_degree(params)
    for r in roots:
        assert chordal_distance(evaluate(params, r), target) < 1e-7


def test_preimages_of_a_fixed_root_cluster_there():
    params = FamilyParams(3, 0.7)
    roots = all_roots(preimage_polynomial(params, 1.0 + 0j))
    assert len(roots) == operator_degree(params)
    at_one = [r for r in roots if abs(r - 1.0) < 1e-6]
    # local degree at a root of unity is 3: the fixed point plus branching
    assert len(at_one) == 3
