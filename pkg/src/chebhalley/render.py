"""Parameter-plane and dynamical-plane rasterization.

Pixel centers sample the plane; work is split into fixed 16-row bands
handed to a thread pool, with every band writing into disjoint slices of
preallocated arrays, so the output bytes never depend on the worker count
or scheduling order.  Colors come from a piecewise-linear palette over
iteration counts with half-up rounding, making renders bit-reproducible.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from PIL import Image

from .errors import DomainError, IoError
from .orbits import IterationBudget, batch_orbit_roots

__all__ = [
    "PlaneMode",
    "PlaneSpec",
    "PlaneImage",
    "Palette",
    "DEFAULT_PALETTE",
    "color_for_fraction",
    "parameter_plane_spec",
    "dynamical_plane_spec",
    "render_parameter_plane",
    "render_dynamical_plane",
    "write_image",
    "draw_markers",
    "format_complex",
    "FigurePreset",
    "FIGURE_PRESETS",
    "sidecar_text",
]

_BAND_ROWS = 16


class PlaneMode(enum.Enum):
    PARAMETER_PLANE = "ParameterPlane"
    DYNAMICAL_PLANE = "DynamicalPlane"


@dataclass(frozen=True)
class PlaneSpec:
    """Geometry, sampling, and iteration budget of one rendered plane."""

    mode: PlaneMode
    n: int
    fixed_alpha: Optional[complex]
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    width: int
    height: int
    budget: IterationBudget

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise DomainError("image size must be at least 1x1")
        if not (self.x_range[0] < self.x_range[1] and self.y_range[0] < self.y_range[1]):
            raise DomainError("plane ranges must be non-degenerate")
        if self.mode is PlaneMode.DYNAMICAL_PLANE and self.fixed_alpha is None:
            raise DomainError("a dynamical plane needs a fixed alpha")
        if self.mode is PlaneMode.PARAMETER_PLANE and self.fixed_alpha is not None:
            raise DomainError("a parameter plane has no fixed alpha")


def parameter_plane_spec(
    n: int,
    x_range: tuple[float, float] = (-1.4, 4.6),
    y_range: tuple[float, float] = (-2.0, 2.0),
    width: int = 1500,
    height: int = 1000,
    max_iterations: int = 150,
) -> PlaneSpec:
    return PlaneSpec(
        PlaneMode.PARAMETER_PLANE,
        n,
        None,
        x_range,
        y_range,
        width,
        height,
        IterationBudget(max_iterations=max_iterations),
    )


def dynamical_plane_spec(
    n: int,
    alpha: complex,
    x_range: tuple[float, float] = (-3.0, 3.0),
    y_range: tuple[float, float] = (-3.0, 3.0),
    width: int = 1500,
    height: int = 1500,
    max_iterations: int = 75,
) -> PlaneSpec:
    return PlaneSpec(
        PlaneMode.DYNAMICAL_PLANE,
        n,
        complex(alpha),
        x_range,
        y_range,
        width,
        height,
        IterationBudget(max_iterations=max_iterations),
    )


@dataclass(frozen=True)
class Palette:
    """Anchor colors at increasing fractions; linear in between."""

    anchors: tuple[tuple[float, tuple[int, int, int]], ...]
    non_converged: tuple[int, int, int] = (0, 0, 0)

    def __post_init__(self):
        fracs = [f for f, _ in self.anchors]
        if fracs[0] != 0.0 or fracs[-1] != 1.0 or any(
            b <= a for a, b in zip(fracs, fracs[1:])
        ):
            raise DomainError(
                "palette anchors must strictly increase from 0.0 to 1.0"
            )


DEFAULT_PALETTE = Palette(
    anchors=(
        (0.0, (255, 0, 0)),
        (0.2, (255, 255, 0)),
        (0.4, (0, 200, 0)),
        (0.6, (0, 64, 255)),
        (0.8, (160, 32, 240)),
        (1.0, (128, 128, 128)),
    )
)


def color_for_fraction(palette: Palette, fraction: float) -> tuple[int, int, int]:
    """Interpolated color with each channel rounded half-up."""
    f = min(max(float(fraction), 0.0), 1.0)
    xs = [a for a, _ in palette.anchors]
    out = []
    for channel in range(3):
        ys = [rgb[channel] for _, rgb in palette.anchors]
        value = float(np.interp(f, xs, ys))
        out.append(int(np.floor(value + 0.5)))
    return (out[0], out[1], out[2])


@dataclass(frozen=True)
class PlaneImage:
    """Rendered plane: per-pixel outcomes plus the derived RGB raster."""

    spec: PlaneSpec
    root_index: np.ndarray
    iterations: np.ndarray
    raster: np.ndarray


def _pixel_axes(spec: PlaneSpec) -> tuple[np.ndarray, np.ndarray]:
    """Pixel-center coordinates: x left-to-right, y top-to-bottom."""
    x0, x1 = spec.x_range
    y0, y1 = spec.y_range
    xs = x0 + (x1 - x0) * (np.arange(spec.width) + 0.5) / spec.width
    ys = y1 - (y1 - y0) * (np.arange(spec.height) + 0.5) / spec.height
    return xs, ys


def _free_critical_seeds(n: int, alphas: np.ndarray) -> np.ndarray:
    """Principal free critical point per parameter, vectorized with the
    same arithmetic as the scalar path."""
    a = alphas
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        num = a * (2 * a - 1) * (n - 1) ** 2
        den = (
            n * (2 * n - 1)
            - a * (4 * n - 1) * (n - 1)
            + 2 * a * a * (n - 1) ** 2
        )
        target = num / den
        rho = np.abs(target) ** (1.0 / n)
        theta = np.arctan2(target.imag, target.real) / n
        return rho * np.cos(theta) + 1j * rho * np.sin(theta)


def _render(spec: PlaneSpec, workers: Optional[int]) -> PlaneImage:
    xs, ys = _pixel_axes(spec)
    root_index = np.empty((spec.height, spec.width), dtype=np.int32)
    iterations = np.empty((spec.height, spec.width), dtype=np.int32)

    def run_band(row0: int) -> None:
        row1 = min(row0 + _BAND_ROWS, spec.height)
        grid = xs[None, :] + 1j * ys[row0:row1, None]
        if spec.mode is PlaneMode.PARAMETER_PLANE:
            seeds = _free_critical_seeds(spec.n, grid)
            ridx, iters = batch_orbit_roots(spec.n, grid, seeds, spec.budget)
        else:
            ridx, iters = batch_orbit_roots(
                spec.n, spec.fixed_alpha, grid, spec.budget
            )
        root_index[row0:row1] = ridx
        iterations[row0:row1] = iters

    bands = range(0, spec.height, _BAND_ROWS)
    max_workers = workers if workers else min(8, os.cpu_count() or 1)
    if max_workers <= 1:
        for row0 in bands:
            run_band(row0)
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            list(pool.map(run_band, bands))

    raster = _rasterize(spec, root_index, iterations, DEFAULT_PALETTE)
    return PlaneImage(spec, root_index, iterations, raster)


def _rasterize(
    spec: PlaneSpec,
    root_index: np.ndarray,
    iterations: np.ndarray,
    palette: Palette,
) -> np.ndarray:
    fractions = np.clip(iterations / spec.budget.max_iterations, 0.0, 1.0)
    xs = np.array([a for a, _ in palette.anchors])
    raster = np.zeros((spec.height, spec.width, 3), dtype=np.uint8)
    converged = root_index >= 0
    for channel in range(3):
        ys = np.array([rgb[channel] for _, rgb in palette.anchors], dtype=float)
        values = np.interp(fractions, xs, ys)
        raster[..., channel] = np.where(
            converged,
            np.floor(values + 0.5).astype(np.uint8),
            np.uint8(palette.non_converged[channel]),
        )
    return raster


def render_parameter_plane(spec: PlaneSpec, workers: Optional[int] = None) -> PlaneImage:
    """Color every parameter by the fate of its free critical orbit."""
    if spec.mode is not PlaneMode.PARAMETER_PLANE:
        raise DomainError("spec is not a parameter-plane spec")
    return _render(spec, workers)


def render_dynamical_plane(spec: PlaneSpec, workers: Optional[int] = None) -> PlaneImage:
    """Color every starting point by the root its orbit reaches."""
    if spec.mode is not PlaneMode.DYNAMICAL_PLANE:
        raise DomainError("spec is not a dynamical-plane spec")
    return _render(spec, workers)


def ppm_bytes(image: PlaneImage) -> bytes:
    header = f"P6\n{image.spec.width} {image.spec.height}\n255\n".encode("ascii")
    return header + image.raster.tobytes()


def write_image(image: PlaneImage, path: str, format: Optional[str] = None) -> None:
    """Write PPM (binary P6, bit-exact) or PNG (lossless RGB8)."""
    fmt = (format or os.path.splitext(path)[1].lstrip(".")).lower()
    try:
        if fmt == "ppm":
            with open(path, "wb") as fh:
                fh.write(ppm_bytes(image))
        elif fmt == "png":
            Image.fromarray(image.raster, "RGB").save(path, format="PNG")
        else:
            raise IoError(f"unsupported image format: {fmt!r} (use ppm or png)")
    except OSError as exc:
        raise IoError(f"cannot write image to {path}: {exc}") from exc


def pixel_of(spec: PlaneSpec, point: complex) -> tuple[int, int]:
    """(row, column) of the pixel whose cell contains ``point``."""
    x0, x1 = spec.x_range
    y0, y1 = spec.y_range
    col = int(np.floor((point.real - x0) / (x1 - x0) * spec.width))
    row = int(np.floor((y1 - point.imag) / (y1 - y0) * spec.height))
    return row, col


def draw_markers(
    image: PlaneImage,
    points: list[complex],
    color: tuple[int, int, int],
    radius: int = 3,
) -> None:
    """Stamp filled disks onto the raster at the given plane points."""
    h, w = image.raster.shape[:2]
    for p in points:
        row, col = pixel_of(image.spec, p)
        for dr in range(-radius, radius + 1):
            for dc in range(-radius, radius + 1):
                if dr * dr + dc * dc > radius * radius:
                    continue
                r, c = row + dr, col + dc
                if 0 <= r < h and 0 <= c < w:
                    image.raster[r, c] = color


# ---------------------------------------------------------------------------
# Figure presets
# ---------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    return repr(float(x))


def format_complex(z: complex) -> str:
    """Canonical complex formatting, re-parseable by the CLI flag syntax."""
    z = complex(z)
    if z.imag == 0:
        return _fmt_float(z.real)
    if z.real == 0:
        return f"{_fmt_float(z.imag)}i"
    sign = "+" if z.imag >= 0 else "-"
    return f"{_fmt_float(z.real)}{sign}{_fmt_float(abs(z.imag))}i"


@dataclass(frozen=True)
class FigurePreset:
    """A named, fully-pinned render configuration."""

    name: str
    spec: PlaneSpec
    markers: bool = False

    def row(self) -> str:
        s = self.spec
        mode = "parameter" if s.mode is PlaneMode.PARAMETER_PLANE else "dynamical"
        alpha = "-" if s.fixed_alpha is None else format_complex(s.fixed_alpha)
        return (
            f"{self.name} | {mode} | n={s.n} | alpha={alpha}"
            f" | x=[{_fmt_float(s.x_range[0])},{_fmt_float(s.x_range[1])}]"
            f" | y=[{_fmt_float(s.y_range[0])},{_fmt_float(s.y_range[1])}]"
            f" | {s.width}x{s.height} | iters={s.budget.max_iterations}"
            f" | markers={'yes' if self.markers else 'no'}"
        )


def _order4(n: int) -> complex:
    return complex((2 * n - 1) / (3 * n - 3))


def _precrit_plus(n: int) -> complex:
    return complex(1.0 / (n - 1), math.sqrt(2.0 * (n - 1)) / (n - 1))


def _build_presets() -> dict[str, FigurePreset]:
    presets: list[FigurePreset] = []
    for n in (2, 3, 5, 10, 25, 100):
        presets.append(FigurePreset(f"param-n{n}", parameter_plane_spec(n)))
    for n in (10, 25, 100):
        presets.append(
            FigurePreset(
                f"param-bif-n{n}",
                parameter_plane_spec(
                    n, x_range=(-0.5, 0.7), y_range=(-1.0, 1.0), width=1200, height=2000
                ),
            )
        )
    presets.append(
        FigurePreset(
            "param-sing-n10",
            parameter_plane_spec(
                10, x_range=(1.0, 1.1), y_range=(-0.05, 0.05), width=1500, height=1500
            ),
        )
    )
    presets.append(
        FigurePreset(
            "param-sing-n25",
            parameter_plane_spec(
                25, x_range=(0.95, 1.05), y_range=(-0.05, 0.05), width=1500, height=1500
            ),
        )
    )
    presets.append(
        FigurePreset("dynam-n3-a2.5", dynamical_plane_spec(3, 2.5))
    )
    presets.append(
        FigurePreset(
            "dynam-n10-strange",
            dynamical_plane_spec(
                10, complex(19.0 / 9.0), x_range=(0.0, 2.0), y_range=(-1.0, 1.0)
            ),
        )
    )
    presets.append(
        FigurePreset(
            "dynam-n3-marked",
            dynamical_plane_spec(
                3,
                complex(0.2, 1.592),
                x_range=(-1.0, 1.5),
                y_range=(-1.25, 1.25),
            ),
            markers=True,
        )
    )
    for n, alpha in ((3, complex(0, 2)), (3, complex(0.2, 1.4)),
                     (25, complex(0, 2)), (25, complex(0.2, 1.4))):
        presets.append(
            FigurePreset(
                f"dynam-n{n}-a{format_complex(alpha)}",
                dynamical_plane_spec(n, alpha),
            )
        )
    for n in (3, 10, 25):
        for tag, alpha in (
            ("order4", _order4(n)),
            ("halley", complex(0.5)),
            ("chebyshev", complex(0.0)),
            ("superhalley", complex(1.0)),
            ("precrit", _precrit_plus(n)),
            ("a4i", complex(0, 4)),
        ):
            presets.append(
                FigurePreset(f"panel-n{n}-{tag}", dynamical_plane_spec(n, alpha))
            )
    return {p.name: p for p in presets}


FIGURE_PRESETS: dict[str, FigurePreset] = _build_presets()


def sidecar_text(preset_or_spec, markers: bool = False, name: str = "-") -> str:
    """Reproducibility sidecar: the preset's table row plus key = value lines."""
    if isinstance(preset_or_spec, FigurePreset):
        preset = preset_or_spec
    else:
        preset = FigurePreset(name, preset_or_spec, markers)
    s = preset.spec
    mode = "parameter" if s.mode is PlaneMode.PARAMETER_PLANE else "dynamical"
    lines = [
        preset.row(),
        f"figure = {preset.name}",
        f"mode = {mode}",
        f"n = {s.n}",
        f"alpha = {'-' if s.fixed_alpha is None else format_complex(s.fixed_alpha)}",
        f"x_range = [{_fmt_float(s.x_range[0])}, {_fmt_float(s.x_range[1])}]",
        f"y_range = [{_fmt_float(s.y_range[0])}, {_fmt_float(s.y_range[1])}]",
        f"width = {s.width}",
        f"height = {s.height}",
        f"max_iterations = {s.budget.max_iterations}",
        f"root_tolerance = {_fmt_float(s.budget.root_tolerance)}",
        f"markers = {'yes' if preset.markers else 'no'}",
    ]
    return "\n".join(lines) + "\n"
