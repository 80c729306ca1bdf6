"""Julia-set connectivity through the immediate-basin critical test.

The Julia set of a family member is disconnected exactly when the
immediate basin of a root contains a free critical point but no extra
preimage of that root.  This module decides that criterion with a labeled
basin grid, escalating resolution while any membership claim rests on a
pixel next to a basin boundary, and reports how confident the geometry is.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import ndimage

from .errors import DegenerateParameter
from .operators import (
    FamilyParams,
    OperatorForm,
    classify_form,
    principal_free_critical,
)
from .orbits import (
    ConvergedToRoot,
    IterationBudget,
    batch_orbit_roots,
    iterate_orbit,
)
from .polyroots import all_roots, preimage_polynomial
from .sphere import roots_of_unity

__all__ = [
    "Region",
    "BasinGrid",
    "Confidence",
    "ConnectivityVerdict",
    "label_basins",
    "classify_julia",
]

_SELF_PREIMAGE_RADIUS = 1e-6
_COINCIDENT_RADIUS = 1e-6
_MAX_DOUBLINGS = 3
_MIN_REGION_SIZE = 0.5
_MARGIN = 0.2


@dataclass(frozen=True)
class Region:
    """Axis-aligned rectangle given by its center and side lengths."""

    center: complex
    width: float
    height: float

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise ValueError("region sides must be positive")

    @property
    def x_min(self) -> float:
        return self.center.real - self.width / 2

    @property
    def y_min(self) -> float:
        return self.center.imag - self.height / 2


@dataclass(frozen=True)
class BasinGrid:
    """Root-basin labels on a pixel grid plus their connected components.

    ``labels[i, j]`` is the root index the pixel-center orbit converged to
    (-1 when it did not); ``components[i, j]`` numbers the 4-connected
    patches of equal root label from 1 upward, with 0 on non-converged
    pixels.  Row i runs along increasing imaginary part, column j along
    increasing real part.
    """

    region: Region
    resolution: int
    labels: np.ndarray
    components: np.ndarray

    def pixel_of(self, point: complex) -> tuple[int, int]:
        """(row, column) of the pixel containing ``point``, clamped to the grid."""
        res = self.resolution
        col = int(np.floor((point.real - self.region.x_min) / self.region.width * res))
        row = int(np.floor((point.imag - self.region.y_min) / self.region.height * res))
        return (min(max(row, 0), res - 1), min(max(col, 0), res - 1))


class Confidence(enum.Enum):
    RESOLVED = "Resolved"
    BOUNDARY_AMBIGUOUS = "BoundaryAmbiguous"


@dataclass(frozen=True)
class ConnectivityVerdict:
    julia_connected: bool
    critical_in_immediate_basin: bool
    extra_preimage_in_immediate_basin: bool
    resolution_used: int
    confidence: Confidence


def label_basins(
    params: FamilyParams,
    region: Region,
    resolution: int,
    budget: Optional[IterationBudget] = None,
) -> BasinGrid:
    """Label every pixel-center orbit by its root and connect the basins."""
    if resolution < 64:
        raise ValueError("resolution must be at least 64")
    if budget is None:
        budget = IterationBudget(max_iterations=300)
    res = resolution
    xs = region.x_min + region.width * (np.arange(res) + 0.5) / res
    ys = region.y_min + region.height * (np.arange(res) + 0.5) / res
    seeds = xs[None, :] + 1j * ys[:, None]
    labels, _ = batch_orbit_roots(params.n, params.alpha, seeds, budget)
    components = np.zeros_like(labels)
    next_id = 1
    for root in range(params.n):
        mask = labels == root
        if not mask.any():
            continue
        comp, count = ndimage.label(mask)
        components[mask] = comp[mask] + (next_id - 1)
        next_id += count
    return BasinGrid(region, res, labels, components)


def _neighborhood_stable(grid: BasinGrid, pixel: tuple[int, int]) -> bool:
    """True when the 5x5 patch around ``pixel`` carries one root label."""
    row, col = pixel
    res = grid.resolution
    r0, r1 = max(row - 2, 0), min(row + 3, res)
    c0, c1 = max(col - 2, 0), min(col + 3, res)
    patch = grid.labels[r0:r1, c0:c1]
    return bool(np.all(patch == grid.labels[row, col]) and grid.labels[row, col] >= 0)


def _bounding_region(points: list[complex]) -> Region:
    xs = [p.real for p in points]
    ys = [p.imag for p in points]
    cx = (min(xs) + max(xs)) / 2
    cy = (min(ys) + max(ys)) / 2
    width = max((max(xs) - min(xs)) * (1 + 2 * _MARGIN), _MIN_REGION_SIZE)
    height = max((max(ys) - min(ys)) * (1 + 2 * _MARGIN), _MIN_REGION_SIZE)
    return Region(complex(cx, cy), width, height)


def _connected_verdict(resolution: int = 0) -> ConnectivityVerdict:
    return ConnectivityVerdict(
        julia_connected=True,
        critical_in_immediate_basin=False,
        extra_preimage_in_immediate_basin=False,
        resolution_used=resolution,
        confidence=Confidence.RESOLVED,
    )


def classify_julia(
    params: FamilyParams,
    base_resolution: int = 512,
    budget: Optional[IterationBudget] = None,
) -> ConnectivityVerdict:
    """Decide whether the Julia set is connected.

    Structural short-circuits settle the cases with no usable free
    critical orbit; otherwise the free critical point is rotated onto the
    basin of the root at 1 and tested for membership in that root's
    immediate basin alongside the extra preimages of 1.
    """
    form = classify_form(params)
    if form in (OperatorForm.HALLEY_DEGENERATE, OperatorForm.UPPER_DEGENERATE):
        raise DegenerateParameter(
            "connectivity classification needs the full-degree operator; "
            "this parameter collapses it"
        )
    if budget is None:
        budget = IterationBudget(max_iterations=300)
    if form is OperatorForm.NEWTON_LIKE:
        # Free critical points sit at superattracting infinity: they can
        # never enter a root basin, so the criterion is vacuously met.
        return _connected_verdict()

    fate = iterate_orbit(params, principal_free_critical(params), budget)
    if not isinstance(fate, ConvergedToRoot):
        # The free critical orbit is captured by something other than a
        # root (a strange fixed point, a cycle, or no limit at all), so no
        # root's immediate basin contains a free critical point.
        return _connected_verdict()

    roots = roots_of_unity(params.n)
    c_star = principal_free_critical(params) * roots[(params.n - fate.root_index) % params.n]
    if abs(c_star - 1.0) <= _COINCIDENT_RADIUS:
        # The free critical point coincides with the root itself; no
        # critical point lies properly inside the basin.
        return _connected_verdict()

    extras = [
        r
        for r in all_roots(preimage_polynomial(params, complex(1.0)))
        if abs(r - 1.0) > _SELF_PREIMAGE_RADIUS
    ]

    resolution = base_resolution
    grid: Optional[BasinGrid] = None
    critical_in = False
    extra_in = False
    for _ in range(_MAX_DOUBLINGS + 1):
        grid = label_basins(
            params,
            _bounding_region([complex(1.0), c_star, *extras]),
            resolution,
            budget,
        )
        root_pixel = grid.pixel_of(complex(1.0))
        crit_pixel = grid.pixel_of(c_star)
        home = grid.components[root_pixel]
        critical_in = bool(
            grid.labels[crit_pixel] == 0 and grid.components[crit_pixel] == home
        )
        extra_pixels = [grid.pixel_of(w) for w in extras]
        memberships = [
            bool(grid.labels[px] == 0 and grid.components[px] == home)
            for px in extra_pixels
        ]
        extra_in = any(memberships)
        # The reference and critical pixels must sit in settled territory;
        # an extra preimage matters only when it claims membership, and then
        # a claim made next to a basin boundary is what escalation retests.
        # (Preimage components shrink below pixel size as the degree grows,
        # so a non-member surrounded by fractal dust is expected and safe.)
        stable = (
            grid.labels[root_pixel] == 0
            and _neighborhood_stable(grid, root_pixel)
            and _neighborhood_stable(grid, crit_pixel)
            and all(
                _neighborhood_stable(grid, px)
                for px, member in zip(extra_pixels, memberships)
                if member
            )
        )
        if stable:
            return ConnectivityVerdict(
                julia_connected=not (critical_in and not extra_in),
                critical_in_immediate_basin=critical_in,
                extra_preimage_in_immediate_basin=extra_in,
                resolution_used=resolution,
                confidence=Confidence.RESOLVED,
            )
        if resolution >= base_resolution * (1 << _MAX_DOUBLINGS):
            break
        resolution *= 2

    assert grid is not None
    return ConnectivityVerdict(
        julia_connected=not (critical_in and not extra_in),
        critical_in_immediate_basin=critical_in,
        extra_preimage_in_immediate_basin=extra_in,
        resolution_used=resolution,
        confidence=Confidence.BOUNDARY_AMBIGUOUS,
    )
