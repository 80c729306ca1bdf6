"""Dense complex polynomials and a simultaneous root solver.

The solver is an Aberth–Ehrlich iteration seeded on a perturbed circle at
the Cauchy bound, followed by Newton polish and a cluster merge that
replaces mutually-close approximations by their centroid when the centroid
itself satisfies the residual contract (true multiple roots stall the
simultaneous iteration at ~eps^(1/m) radius, so the merge is what restores
full accuracy for them).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NoConvergence
from .operators import FamilyParams, _form_w_polynomials
from .sphere import SpherePoint, is_infinity

__all__ = ["ComplexPolynomial", "preimage_polynomial", "all_roots"]

_TRIM_REL = 1e-30
_MAX_SWEEPS = 500
_RESIDUAL_REL = 1e-10
_CLUSTER_REL = 1e-3
_CENTROID_TIGHTEN = 1e-2


@dataclass(frozen=True)
class ComplexPolynomial:
    """Polynomial with coefficients in ascending order of degree.

    Trailing coefficients tiny relative to the largest magnitude are
    trimmed on construction, so ``degree`` reflects the true leading term.
    """

    coefficients: tuple[complex, ...] = field(default=(0j,))

    def __post_init__(self) -> None:
        coeffs = [complex(c) for c in self.coefficients]
        if not coeffs:
            coeffs = [0j]
        top = max(abs(c) for c in coeffs)
        cut = _TRIM_REL * top
        while len(coeffs) > 1 and abs(coeffs[-1]) <= cut:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coefficients):
            acc = acc * z + c
        return acc

    def derivative(self) -> "ComplexPolynomial":
        if self.degree == 0:
            return ComplexPolynomial((0j,))
        return ComplexPolynomial(
            tuple(k * c for k, c in enumerate(self.coefficients) if k > 0)
        )


def _sparse_z_poly(size: int, entries: list[tuple[int, complex]]) -> np.ndarray:
    out = np.zeros(size, dtype=np.complex128)
    for idx, val in entries:
        out[idx] += val
    return out


def _operator_z_fraction(params: FamilyParams) -> tuple[np.ndarray, np.ndarray]:
    """Numerator/denominator of the operator as dense z-polynomials."""
    n = params.n
    s, t, num_w, den_w = _form_w_polynomials(params)
    size = max(
        s + n * (len(num_w) - 1),
        t + n * (len(den_w) - 1),
    ) + 1
    num = _sparse_z_poly(size, [(s + n * k, c) for k, c in enumerate(num_w)])
    den = _sparse_z_poly(size, [(t + n * k, c) for k, c in enumerate(den_w)])
    return num, den


def preimage_polynomial(params: FamilyParams, w_target: SpherePoint) -> ComplexPolynomial:
    """Polynomial whose roots are the finite preimages of ``w_target``."""
    num, den = _operator_z_fraction(params)
    if is_infinity(w_target):
        return ComplexPolynomial(tuple(den))
    w = complex(w_target)
    if not (np.isfinite(w.real) and np.isfinite(w.imag)):
        return ComplexPolynomial(tuple(den))
    return ComplexPolynomial(tuple(num - w * den))


def _strip_zero_roots(coeffs: np.ndarray) -> tuple[int, np.ndarray]:
    """Factor out exact z^k; returns (k, remaining ascending coefficients)."""
    k = 0
    while k < len(coeffs) - 1 and coeffs[k] == 0:
        k += 1
    return k, coeffs[k:]


def _cauchy_bound(coeffs: np.ndarray) -> float:
    lead = abs(coeffs[-1])
    return 1.0 + float(np.max(np.abs(coeffs[:-1]))) / lead


def _horner_pair(coeffs: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate p and p' simultaneously at an array of points."""
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for c in coeffs[::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _residual_thresholds(coeffs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    top = float(np.max(np.abs(coeffs)))
    deg = len(coeffs) - 1
    return _RESIDUAL_REL * top * np.maximum(1.0, np.abs(roots)) ** deg


def _aberth(coeffs: np.ndarray) -> np.ndarray:
    """Simultaneous root iteration for a squarefree-ish dense polynomial."""
    deg = len(coeffs) - 1
    radius = _cauchy_bound(coeffs)
    angles = 2.0 * np.pi * (np.arange(deg) + 0.5) / deg + 0.4
    z = radius * np.exp(1j * angles) * (1.0 + 1e-3 * np.cos(7.0 * angles))
    for _ in range(_MAX_SWEEPS):
        p, dp = _horner_pair(coeffs, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(dp != 0, p / np.where(dp != 0, dp, 1), 0j)
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv_sum = np.sum(1.0 / diff, axis=1) - 1.0
            denom = 1.0 - newton * inv_sum
            step = np.where(denom != 0, newton / np.where(denom != 0, denom, 1), newton)
        z_next = z - step
        if np.all(np.abs(step) <= 1e-15 * np.maximum(1.0, np.abs(z))):
            return z_next
        z = z_next
    return z


def _newton_polish(coeffs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    z = roots.copy()
    for _ in range(6):
        p, dp = _horner_pair(coeffs, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dp != 0, p / np.where(dp != 0, dp, 1), 0j)
        z = z - step
    return z


def _derivative_coeffs(coeffs: np.ndarray, order: int) -> np.ndarray:
    out = coeffs
    for _ in range(order):
        out = out[1:] * np.arange(1, len(out))
    return out


def _refine_cluster_center(
    coeffs: np.ndarray, centroid: complex, size: int, diameter: float
) -> complex:
    """Sharpen an m-cluster centroid on the (m-1)-th derivative.

    At a true m-fold root the (m-1)-th derivative has a simple,
    well-conditioned zero exactly there, so Newton recovers full double
    accuracy where direct evaluation of p drowns in rounding noise.  The
    locality bound keeps a faraway derivative zero from hijacking the
    cluster; the caller's residual gate still decides acceptance.
    """
    dcoeffs = _derivative_coeffs(coeffs, size - 1)
    if len(dcoeffs) < 2:
        return centroid
    c = complex(centroid)
    for _ in range(8):
        p, dp = _horner_pair(dcoeffs, np.array([c]))
        if dp[0] == 0 or not (np.isfinite(p[0]) and np.isfinite(dp[0])):
            return centroid
        step = complex(p[0] / dp[0])
        c = c - step
        if abs(step) <= 1e-16 * max(1.0, abs(c)):
            break
    if abs(c - centroid) > max(8.0 * diameter, 1e-7):
        return centroid
    return c


def _merge_clusters(coeffs: np.ndarray, roots: np.ndarray) -> np.ndarray:
    """Union-find clustering of nearby roots; centroids replace clusters
    only when they satisfy a tightened residual contract themselves."""
    m = len(roots)
    parent = list(range(m))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            scale = max(1.0, abs(roots[i]), abs(roots[j]))
            if abs(roots[i] - roots[j]) <= _CLUSTER_REL * scale:
                parent[find(i)] = find(j)

    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)

    out = roots.copy()
    for members in groups.values():
        if len(members) < 2:
            continue
        centroid = complex(np.mean(roots[members]))
        diameter = max(abs(roots[i] - roots[j]) for i in members for j in members)
        centroid = _refine_cluster_center(coeffs, centroid, len(members), diameter)
        p, _ = _horner_pair(coeffs, np.array([centroid]))
        threshold = _residual_thresholds(coeffs, np.array([centroid]))[0]
        if abs(p[0]) <= _CENTROID_TIGHTEN * threshold:
            out[members] = centroid
    return out


def all_roots(poly: ComplexPolynomial) -> list[complex]:
    """All roots of ``poly`` with multiplicity, verified against a residual
    contract; raises :class:`NoConvergence` when the contract fails."""
    coeffs = np.asarray(poly.coefficients, dtype=np.complex128)
    if len(coeffs) == 1:
        if coeffs[0] == 0:
            raise DomainError("the zero polynomial has every point as a root")
        return []
    zero_count, reduced = _strip_zero_roots(coeffs)
    roots: list[complex] = [0j] * zero_count
    if len(reduced) > 1:
        approx = _aberth(reduced)
        approx = _newton_polish(reduced, approx)
        approx = _merge_clusters(reduced, approx)
        residuals = np.abs(_horner_pair(reduced, approx)[0])
        thresholds = _residual_thresholds(reduced, approx)
        if np.any(residuals > thresholds):
            raise NoConvergence(
                "root refinement failed the residual contract",
                iterates=[complex(v) for v in approx],
                residuals=[float(r) for r in residuals],
            )
        roots.extend(complex(v) for v in approx)
    roots.sort(key=lambda z: (round(abs(z), 12), _angle_key(z)))
    return roots


def _angle_key(z: complex) -> float:
    return float(np.angle(z)) if z != 0 else 0.0
