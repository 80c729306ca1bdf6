"""Closed-form operator evaluation against an independent reference route.

The frozen literals below were computed offline with 60-digit arithmetic
from the defining one-point iteration (the correcting step built from the
ratio p*p''/p'^2 applied to p(z) = z^n - 1), which never touches the
package's rational closed forms.  Agreement here certifies the algebraic
reduction to numerator/denominator polynomials in w = z^n.
"""

import math

import pytest
from hypothesis import given, strategies as st

from chebhalley import (
    FORM_TOLERANCE,
    INFINITY,
    DomainError,
    FamilyParams,
    OperatorForm,
    classify_form,
    eval_derivative,
    evaluate,
    int_power,
    is_infinity,
    operator_degree,
    principal_free_critical,
    reduced_map,
    roots_of_unity,
)

# (n, alpha, z) -> (operator value, operator derivative), frozen from the
# independent 60-digit evaluation of the defining iteration formula.
EVALUATION_REFERENCE = {
    # generic form, |z| < 1 chart
    (3, 0.7 + 0j, 0.5 + 0.25j): (
        0.9000848876135820181731229 + 0.009121831659493065518890483j,
        0.8833001055970556329750993 + 0.4653891659753798989589187j,
    ),
    # generic form, |z| > 1 chart, complex parameter, larger n
    (10, 1.0 + 0.5j, 1.1 - 0.2j): (
        0.9200254553806600584970904 - 0.4158634820036323249269609j,
        -1.071746720646453646393485 + 1.646884227652768589721424j,
    ),
    # generic form, n = 2
    (2, 0.7 + 0j, -0.3 + 1.1j): (
        -0.7277921894577090722995747 - 0.6975382497750013235216263j,
        None,
    ),
    # collapsed degree-(n+1) form at alpha = 1/2
    (3, 0.5 + 0j, 0.2 + 0.3j): (
        0.4400873921541050548747072 + 0.6388528931070772125685631j,
        2.648994100351753457704753 - 0.1507587535519427731034205j,
    ),
    # collapsed degree-(2n-1) form at alpha = (2n-1)/(2n-2), |z| > 1 chart
    (3, 1.25 + 0j, 2.0 + 1.0j): (
        0.7298823529411764705882353 - 0.4555294117647058823529412j,
        -0.5810712802768166089965398 + 0.2727086505190311418685121j,
    ),
    # simplified full-degree form at alpha = n/(n-1)
    (3, 1.5 + 0j, 0.5 - 0.3j): (
        0.7591740099961553248750481 + 0.3207012687427912341407151j,
        1.006412013478978673360925 - 2.150957866883777732546306j,
    ),
}

# principal free critical points frozen from the same offline pipeline
FREE_CRITICAL_REFERENCE = {
    (3, 2j): 0.84280726748158049248 - 0.27840028417589494386j,
    (3, 0.7 + 0j): 0.68269248109553167539 + 0j,
    (10, 0.3 + 0.4j): 0.85850255811788696846 - 0.2079431843406190332j,
}

# principal strange fixed point and its multiplier, same pipeline
STRANGE_REFERENCE = {
    (3, 2.5 + 0j): (1.5874010519681994748 + 0j, 0.0 + 0j),
    (3, 2j): (0.88538373832962119034 - 0.16124077096328868227j, 5.0 - 4.0j),
}


def _params(key):
    n, alpha, z = key
    return FamilyParams(n, alpha), z


# ---------------------------------------------------------------------------
# Value agreement with the independent reference
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("key", sorted(EVALUATION_REFERENCE, key=repr))
def test_evaluate_matches_independent_reference(key):
    params, z = _params(key)
    expected, _ = EVALUATION_REFERENCE[key]
    got = evaluate(params, z)
    assert abs(got - expected) <= 5e-14 * abs(expected)


@pytest.mark.parametrize(
    "key",
    [k for k in sorted(EVALUATION_REFERENCE, key=repr) if EVALUATION_REFERENCE[k][1] is not None],
)
def test_derivative_matches_independent_reference(key):
    params, z = _params(key)
    _, expected = EVALUATION_REFERENCE[key]
    got = eval_derivative(params, z)
    assert abs(got - expected) <= 5e-13 * abs(expected)


def test_evaluate_exact_rational_case():
    # all inputs and intermediates are exact dyadic rationals
    assert evaluate(FamilyParams(2, 2.0 + 0j), 0.5 + 0j) == 1.109375 + 0j


# ---------------------------------------------------------------------------
# Form classification and degrees
# ---------------------------------------------------------------------------


def test_classify_form_special_values():
    assert classify_form(FamilyParams(3, 0.5)) is OperatorForm.HALLEY_DEGENERATE
    assert classify_form(FamilyParams(3, 1.25)) is OperatorForm.UPPER_DEGENERATE
    assert classify_form(FamilyParams(3, 1.5)) is OperatorForm.NEWTON_LIKE
    assert classify_form(FamilyParams(3, 0.2 + 1.4j)) is OperatorForm.GENERIC
    assert classify_form(FamilyParams(25, 49.0 / 48.0)) is OperatorForm.UPPER_DEGENERATE


def test_classify_form_tolerance_window():
    inside = FamilyParams(3, 0.5 + FORM_TOLERANCE / 2)
    outside = FamilyParams(3, 0.5 + FORM_TOLERANCE * 10)
    assert classify_form(inside) is OperatorForm.HALLEY_DEGENERATE
    assert classify_form(outside) is OperatorForm.GENERIC


@pytest.mark.parametrize(
    "alpha, degree",
    [(0.7 + 0j, 6), (0.5 + 0j, 4), (1.25 + 0j, 5), (1.5 + 0j, 6)],
)
def test_operator_degree_for_each_form_at_n3(alpha, degree):
    assert operator_degree(FamilyParams(3, alpha)) == degree


@pytest.mark.parametrize("n", [2, 5, 10, 100])
def test_operator_degree_generic_is_twice_n(n):
    assert operator_degree(FamilyParams(n, 0.3 + 0.9j)) == 2 * n


# ---------------------------------------------------------------------------
# Exact images of the origin and infinity
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "alpha, image_of_zero, image_of_inf",
    [
        (0.7 + 0j, INFINITY, INFINITY),
        (0.5 + 0j, 0j, INFINITY),
        (1.25 + 0j, INFINITY, 0j),
        (1.5 + 0j, INFINITY, INFINITY),
    ],
)
def test_images_of_origin_and_infinity(alpha, image_of_zero, image_of_inf):
    params = FamilyParams(3, alpha)
    assert evaluate(params, 0j) == image_of_zero
    assert evaluate(params, INFINITY) == image_of_inf


def test_evaluate_is_total_on_the_sphere():
    for alpha in (0.7 + 0j, 0.5 + 0j, 1.25 + 0j, 1.5 + 0j, 0.2 + 1.4j):
        params = FamilyParams(3, alpha)
        for z in (0j, INFINITY, 1e300 + 0j, 1e-300 + 0j, -2.0 + 0.5j, 1e155 - 1e154j):
            result = evaluate(params, z)
            assert is_infinity(result) or (
                math.isfinite(result.real) and math.isfinite(result.imag)
            )


# ---------------------------------------------------------------------------
# Fixed and critical structure
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 10])
def test_roots_of_unity_are_fixed(n):
    params = FamilyParams(n, 0.3 - 0.8j)
    for xi in roots_of_unity(n):
        assert evaluate(params, xi) == pytest.approx(xi, rel=1e-12)


def test_roots_are_critical_points():
    assert abs(eval_derivative(FamilyParams(3, 0.7), 1.0 + 0j)) < 1e-14
    for xi in roots_of_unity(2):
        assert abs(eval_derivative(FamilyParams(2, 0.5), xi)) < 1e-14


def test_derivative_domain_errors():
    with pytest.raises(DomainError):
        eval_derivative(FamilyParams(3, 0.7), 0j)  # pole of the generic derivative
    with pytest.raises(DomainError):
        eval_derivative(FamilyParams(3, 0.7), INFINITY)


def test_derivative_at_origin_for_collapsed_halley_form():
    n = 5
    got = eval_derivative(FamilyParams(n, 0.5), 0j)
    assert got == pytest.approx(complex((n + 1) / (n - 1)), rel=1e-14)


@pytest.mark.parametrize("key", sorted(FREE_CRITICAL_REFERENCE, key=repr))
def test_principal_free_critical_matches_reference(key):
    n, alpha = key
    c1 = principal_free_critical(FamilyParams(n, alpha))
    assert c1 == pytest.approx(FREE_CRITICAL_REFERENCE[key], rel=1e-12)
    assert abs(eval_derivative(FamilyParams(n, alpha), c1)) < 1e-10


@pytest.mark.parametrize("key", sorted(STRANGE_REFERENCE, key=repr))
def test_strange_fixed_point_location_and_multiplier(key):
    n, alpha = key
    z_star, lam = STRANGE_REFERENCE[key]
    params = FamilyParams(n, alpha)
    assert evaluate(params, z_star) == pytest.approx(z_star, rel=1e-12)
    assert eval_derivative(params, z_star) == pytest.approx(lam, rel=1e-10, abs=1e-10)


# ---------------------------------------------------------------------------
# Finite-difference consistency (second route to the derivative)
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "n, alpha",
    [(2, 0.7 + 0j), (3, 0.2 + 1.4j), (3, 0.5 + 0j), (3, 1.25 + 0j), (10, 1.5 + 0j)],
)
def test_derivative_agrees_with_central_differences(n, alpha):
    params = FamilyParams(n, alpha)
    step = 1e-6
    for z in (0.4 + 0.3j, -0.8 + 0.1j, 1.3 - 0.6j, 0.9 + 0.9j):
        numeric = (evaluate(params, z + step) - evaluate(params, z - step)) / (2 * step)
        exact = eval_derivative(params, z)
        assert numeric == pytest.approx(exact, rel=1e-4, abs=1e-8)


# ---------------------------------------------------------------------------
# Structural identities (property tests)
# ---------------------------------------------------------------------------

sample_alpha = st.builds(
    complex, st.floats(-1.5, 3.5, allow_nan=False), st.floats(-2.0, 2.0, allow_nan=False)
)
sample_z = st.builds(
    complex, st.floats(-2.5, 2.5, allow_nan=False), st.floats(-2.5, 2.5, allow_nan=False)
)


@given(st.sampled_from([2, 3, 5, 10, 25]), sample_alpha, sample_z, st.integers(0, 24))
def test_rotation_symmetry(n, alpha, z, k):
    params = FamilyParams(n, alpha)
    xi = roots_of_unity(n)[k % n]
    left = evaluate(params, xi * z)
    right_base = evaluate(params, z)
    if is_infinity(left) or is_infinity(right_base):
        assert is_infinity(left) and is_infinity(right_base)
        return
    right = xi * right_base
    assert abs(left - right) <= 1e-10 * max(1.0, abs(right))


@given(st.sampled_from([2, 3, 5, 10]), sample_alpha, sample_z)
def test_semiconjugacy_with_reduced_map(n, alpha, z):
    params = FamilyParams(n, alpha)
    image = evaluate(params, z)
    if is_infinity(image):
        return
    w = int_power(z, n)
    reduced = reduced_map(params, w)
    if is_infinity(reduced):
        return
    direct = int_power(image, n)
    assert abs(reduced - direct) <= 1e-9 * max(1.0, abs(direct))


def test_reduced_map_examples():
    params = FamilyParams(3, 0.7)
    assert reduced_map(params, 1.0 + 0j) == pytest.approx(1.0 + 0j, rel=1e-12)
    assert reduced_map(params, 0j) == INFINITY


def test_simplified_full_degree_form_matches_direct_formula():
    # at alpha = n/(n-1) the operator simplifies to
    # ((n+1) + 2(n^2-1) z^n - (n-1) z^(2n)) / (2 n^2 z^(n-1))
    n = 4
    params = FamilyParams(n, n / (n - 1))
    for z in (0.3 + 0.2j, -0.7 + 0.6j, 0.9 - 0.1j):
        zn = int_power(z, n)
        direct = ((n + 1) + 2 * (n * n - 1) * zn - (n - 1) * zn * zn) / (
            2 * n * n * int_power(z, n - 1)
        )
        assert evaluate(params, z) == pytest.approx(direct, rel=1e-12)
