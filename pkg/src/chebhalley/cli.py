"""Command-line surface: landmark queries, catalogs, orbit probes,
connectivity verdicts, plane rendering, and parameter surveys.

Every run echoes its fully-resolved configuration to standard error so a
result can be reproduced from its logs alone.  Exit codes: 0 success,
2 degenerate/invalid parameter, 3 non-convergence, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .errors import BasinEscape, DegenerateParameter, DomainError, IoError, NoConvergence
from .landmarks import (
    CriticalPointKind,
    bifurcation_catalog,
    critical_points,
    fixed_points,
    stability_disks,
)
from .operators import FamilyParams, classify_form, operator_degree, principal_free_critical
from .orbits import IterationBudget, estimate_convergence_order
from .connectivity import classify_julia
from .polyroots import all_roots, preimage_polynomial
from .render import (
    FIGURE_PRESETS,
    PlaneMode,
    dynamical_plane_spec,
    draw_markers,
    format_complex,
    parameter_plane_spec,
    render_dynamical_plane,
    render_parameter_plane,
    sidecar_text,
    write_image,
)
from .sphere import is_infinity, roots_of_unity

__all__ = ["main", "parse_complex"]


def _parse_number(token: str) -> float:
    token = token.strip()
    if not token:
        raise ValueError("empty number")
    if "/" in token:
        return float(Fraction(token))
    return float(token)


def parse_complex(text: str) -> complex:
    """Parse 'a+bi', 'a-bi', 'bi', 'a', with rational parts like '5/6'."""
    t = text.strip().replace(" ", "")
    if not t:
        raise ValueError("empty complex literal")
    if t[-1] in "ij":
        body = t[:-1]
        split = 0
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "eE":
                split = k
                break
        real_part, imag_part = body[:split], body[split:]
        if imag_part in ("", "+"):
            imag = 1.0
        elif imag_part == "-":
            imag = -1.0
        else:
            imag = _parse_number(imag_part)
        real = _parse_number(real_part) if real_part else 0.0
        return complex(real, imag)
    return complex(_parse_number(t), 0.0)


def _complex_flag(text: str) -> complex:
    try:
        return parse_complex(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"cannot parse complex value {text!r}: {exc}")


def _echo_config(args: argparse.Namespace) -> None:
    print("# resolved configuration", file=sys.stderr)
    for key in sorted(vars(args)):
        if key in ("func", "config"):
            continue
        value = getattr(args, key)
        if isinstance(value, complex):
            value = format_complex(value)
        elif value is None:
            value = "-"
        print(f"{key} = {value}", file=sys.stderr)


def _read_config_tokens(path: str, valid_flags: set[str]) -> list[str]:
    tokens: list[str] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise DomainError(
                        f"{path}:{lineno}: expected 'key = value', got {raw!r}"
                    )
                key, value = (part.strip() for part in line.split("=", 1))
                flag = "--" + key.replace("_", "-")
                if flag not in valid_flags:
                    raise DomainError(f"{path}:{lineno}: unknown config key {key!r}")
                if value.lower() in ("true", "yes", "on"):
                    tokens.append(flag)
                elif value.lower() in ("false", "no", "off"):
                    pass
                else:
                    tokens.extend([flag, value])
    except OSError as exc:
        raise IoError(f"cannot read config file {path}: {exc}") from exc
    return tokens


def _point_text(p) -> str:
    return "infinity" if is_infinity(p) else format_complex(complex(p))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_landmarks(args) -> int:
    params = FamilyParams(args.n, args.alpha)
    form = classify_form(params)
    print(f"family member: n={params.n}, alpha={format_complex(params.alpha)}")
    print(f"operator form: {form.value} (degree {operator_degree(params)})")
    fixed = fixed_points(params)
    print()
    print("fixed points:")
    print(f"  {'location':<28} {'kind':<14} {'multiplier':<24} stability")
    for fp in fixed:
        print(
            f"  {_point_text(fp.location):<28} {fp.kind.value:<14} "
            f"{format_complex(fp.multiplier):<24} {fp.stability.value}"
        )
    crits = critical_points(params)
    print()
    print("critical points:")
    print(f"  {'location':<28} {'kind':<16} multiplicity")
    for cp in crits:
        print(
            f"  {_point_text(cp.location):<28} {cp.kind.value:<16} {cp.multiplicity}"
        )
    root_mult = max(
        cp.multiplicity for cp in crits if cp.kind is CriticalPointKind.ROOT_CRITICAL
    )
    if root_mult == 3:
        print()
        print(
            "note: roots have local degree 4 here; the iteration converges "
            "with fourth order"
        )
    disks = stability_disks(params.n)
    print()
    print("parameter stability disks:")
    for disk in disks:
        print(
            f"  {disk.subject.value}: center {format_complex(disk.center)}, "
            f"radius {disk.radius!r}"
        )
    if args.csv:
        _write_landmarks_csv(args.csv, params)
    if args.plot:
        _plot_landmarks(args.plot, params)
    return 0


def _write_landmarks_csv(path: str, params: FamilyParams) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                [
                    "record",
                    "kind",
                    "location_re",
                    "location_im",
                    "multiplier_re",
                    "multiplier_im",
                    "stability",
                    "multiplicity",
                ]
            )
            for fp in fixed_points(params):
                loc = ("inf", "inf") if is_infinity(fp.location) else (
                    repr(complex(fp.location).real),
                    repr(complex(fp.location).imag),
                )
                writer.writerow(
                    [
                        "fixed",
                        fp.kind.value,
                        loc[0],
                        loc[1],
                        repr(fp.multiplier.real),
                        repr(fp.multiplier.imag),
                        fp.stability.value,
                        "",
                    ]
                )
            for cp in critical_points(params):
                loc = ("inf", "inf") if is_infinity(cp.location) else (
                    repr(complex(cp.location).real),
                    repr(complex(cp.location).imag),
                )
                writer.writerow(
                    ["critical", cp.kind.value, loc[0], loc[1], "", "", "", cp.multiplicity]
                )
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _plot_landmarks(path: str, params: FamilyParams) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    for fp in fixed_points(params):
        if is_infinity(fp.location):
            continue
        z = complex(fp.location)
        ax.plot(z.real, z.imag, "o", color="tab:red", markersize=6)
    for cp in critical_points(params):
        if is_infinity(cp.location):
            continue
        z = complex(cp.location)
        ax.plot(z.real, z.imag, "x", color="black", markersize=6)
    ax.set_title(
        f"fixed (o) and critical (x) points, n={params.n}, "
        f"alpha={format_complex(params.alpha)}"
    )
    ax.set_aspect("equal")
    ax.grid(True, alpha=0.3)
    try:
        fig.savefig(path, dpi=120)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    finally:
        plt.close(fig)


def _cmd_catalog(args) -> int:
    entries = bifurcation_catalog(args.n)
    print(f"structurally special parameters for n={args.n}:")
    print(f"  {'label':<24} {'alpha':<28} description")
    for entry in entries:
        print(
            f"  {entry.label.value:<24} {format_complex(entry.alpha):<28} "
            f"{entry.description}"
        )
    if args.n > 2:
        print()
        print(
            f"note: the origin is a critical point of multiplicity "
            f"{args.n - 2} at every parameter"
        )
    if args.csv:
        try:
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["label", "alpha_re", "alpha_im", "description"])
                for entry in entries:
                    writer.writerow(
                        [
                            entry.label.value,
                            repr(entry.alpha.real),
                            repr(entry.alpha.imag),
                            entry.description,
                        ]
                    )
        except OSError as exc:
            raise IoError(f"cannot write {args.csv}: {exc}") from exc
    if args.plot:
        _plot_catalog(args.plot, args.n, entries)
    return 0


def _plot_catalog(path: str, n: int, entries) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 6))
    for disk, color in zip(stability_disks(n), ("tab:purple", "tab:orange")):
        circle = plt.Circle(
            (disk.center.real, disk.center.imag),
            disk.radius,
            fill=False,
            color=color,
            label=disk.subject.value,
        )
        ax.add_patch(circle)
    for entry in entries:
        ax.plot(entry.alpha.real, entry.alpha.imag, "o", markersize=5)
        ax.annotate(
            entry.label.value,
            (entry.alpha.real, entry.alpha.imag),
            fontsize=7,
            xytext=(3, 3),
            textcoords="offset points",
        )
    ax.set_title(f"special parameters and stability disks, n={n}")
    ax.set_aspect("equal")
    ax.autoscale_view()
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=8)
    try:
        fig.savefig(path, dpi=120)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    finally:
        plt.close(fig)


def _cmd_classify(args) -> int:
    params = FamilyParams(args.n, args.alpha)
    budget = IterationBudget(max_iterations=args.iters)
    verdict = classify_julia(params, base_resolution=args.resolution, budget=budget)
    writer = csv.writer(sys.stdout)
    writer.writerow(
        [
            "n",
            "alpha",
            "julia_connected",
            "critical_in_immediate_basin",
            "extra_preimage_in_immediate_basin",
            "confidence",
            "resolution_used",
        ]
    )
    writer.writerow(
        [
            params.n,
            format_complex(params.alpha),
            verdict.julia_connected,
            verdict.critical_in_immediate_basin,
            verdict.extra_preimage_in_immediate_basin,
            verdict.confidence.value,
            verdict.resolution_used,
        ]
    )
    return 0


def _render_markers(image, params: FamilyParams) -> None:
    crit = principal_free_critical(params)
    criticals = [crit * xi for xi in roots_of_unity(params.n)]
    preimages = [
        r
        for r in all_roots(preimage_polynomial(params, complex(1.0)))
        if abs(r - 1.0) > 1e-6
    ]
    draw_markers(image, criticals, (0, 0, 0))
    draw_markers(image, [complex(1.0)], (0, 0, 255))
    draw_markers(image, preimages, (255, 255, 255))


def _cmd_render(args) -> int:
    markers = bool(args.markers)
    if args.figure:
        preset = FIGURE_PRESETS.get(args.figure)
        if preset is None:
            known = ", ".join(sorted(FIGURE_PRESETS))
            raise DomainError(f"unknown figure preset {args.figure!r}; known: {known}")
        spec = preset.spec
        markers = markers or preset.markers
        name = preset.name
        out = args.out or f"{preset.name}.png"
    else:
        if args.mode is None or args.n is None:
            raise DomainError("render needs --figure or --mode with --n")
        if args.mode == "parameter":
            spec = parameter_plane_spec(
                args.n,
                x_range=(args.xmin, args.xmax),
                y_range=(args.ymin, args.ymax),
                width=args.width,
                height=args.height,
                max_iterations=args.iters if args.iters else 150,
            )
        else:
            if args.alpha is None:
                raise DomainError("a dynamical render needs --alpha")
            spec = dynamical_plane_spec(
                args.n,
                args.alpha,
                x_range=(args.xmin, args.xmax),
                y_range=(args.ymin, args.ymax),
                width=args.width,
                height=args.height,
                max_iterations=args.iters if args.iters else 75,
            )
        name = "-"
        out = args.out or "plane.png"
    if spec.mode is PlaneMode.PARAMETER_PLANE:
        if markers:
            raise DomainError("markers are drawn on dynamical planes only")
        image = render_parameter_plane(spec, workers=args.workers)
    else:
        image = render_dynamical_plane(spec, workers=args.workers)
        if markers:
            _render_markers(image, FamilyParams(spec.n, spec.fixed_alpha))
    write_image(image, out, format=args.format)
    sidecar = out + ".spec.txt"
    try:
        with open(sidecar, "w", encoding="utf-8") as fh:
            fh.write(sidecar_text(spec if name == "-" else FIGURE_PRESETS[name],
                                  markers=markers, name=name))
    except OSError as exc:
        raise IoError(f"cannot write {sidecar}: {exc}") from exc
    print(f"wrote {out} and {sidecar}")
    return 0


def _cmd_order(args) -> int:
    params = FamilyParams(args.n, args.alpha)
    result = estimate_convergence_order(
        params,
        root_index=args.root_index,
        offset=args.offset,
        max_steps=args.max_steps,
        window=args.window,
    )
    print(f"estimated_order = {result.estimate!r}")
    print("step_estimates = " + ", ".join(repr(v) for v in result.step_estimates))
    print("errors = " + ", ".join(repr(v) for v in result.errors))
    return 0


def _cmd_survey(args) -> int:
    import numpy as np

    from .orbits import batch_orbit_roots
    from .render import _free_critical_seeds

    if args.grid_width < 0 or args.grid_height < 0:
        raise DomainError("grid sizes must be non-negative")
    budget = IterationBudget(max_iterations=args.iters)
    gw, gh = args.grid_width, args.grid_height
    xs = args.xmin + (args.xmax - args.xmin) * (np.arange(gw) + 0.5) / max(gw, 1)
    ys = args.ymax - (args.ymax - args.ymin) * (np.arange(gh) + 0.5) / max(gh, 1)
    alphas = xs[None, :] + 1j * ys[:, None]
    if alphas.size:
        seeds = _free_critical_seeds(args.n, alphas)
        root_idx, iters = batch_orbit_roots(args.n, alphas, seeds, budget)
    else:
        root_idx = np.empty((gh, gw), dtype=np.int32)
        iters = np.empty((gh, gw), dtype=np.int32)
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["alpha_re", "alpha_im", "cat_set", "iterations", "verdict"])
            for row in range(gh):
                for col in range(gw):
                    a = alphas[row, col]
                    member = bool(root_idx[row, col] < 0)
                    verdict = ""
                    if args.with_verdict:
                        verdict = _sample_verdict(args.n, complex(a))
                    writer.writerow(
                        [
                            repr(float(a.real)),
                            repr(float(a.imag)),
                            member,
                            int(iters[row, col]),
                            verdict,
                        ]
                    )
    except OSError as exc:
        raise IoError(f"cannot write {args.out}: {exc}") from exc
    written = [args.out]
    if not args.no_plot and alphas.size:
        plot_path = args.out.rsplit(".", 1)[0] + ".png"
        _plot_survey(plot_path, args, root_idx)
        written.append(plot_path)
    print("wrote " + " and ".join(written))
    return 0


def _sample_verdict(n: int, alpha: complex) -> str:
    try:
        verdict = classify_julia(FamilyParams(n, alpha))
    except DegenerateParameter:
        return "Degenerate"
    return "Connected" if verdict.julia_connected else "Disconnected"


def _plot_survey(path: str, args, root_idx) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 6))
    member = (root_idx < 0).astype(float)
    ax.imshow(
        member,
        extent=(args.xmin, args.xmax, args.ymin, args.ymax),
        origin="upper",
        cmap="cividis",
        interpolation="nearest",
        vmin=0.0,
        vmax=1.0,
    )
    ax.set_title(
        f"free critical orbit avoids the roots (bright), n={args.n}, "
        f"{args.grid_width}x{args.grid_height} samples"
    )
    ax.set_xlabel("Re alpha")
    ax.set_ylabel("Im alpha")
    try:
        fig.savefig(path, dpi=120)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
    finally:
        plt.close(fig)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chebhalley",
        description=(
            "Numerical laboratory for a one-parameter family of "
            "root-finding iterations on z^n - 1"
        ),
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument("--config", help="key = value config file; flags override it")

    p = sub.add_parser("landmarks", help="fixed/critical points and stability")
    add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=_complex_flag, required=True)
    p.add_argument("--csv", help="also write a delimited report to this path")
    p.add_argument("--plot", help="also write an annotated figure to this path")
    p.set_defaults(func=_cmd_landmarks)

    p = sub.add_parser("catalog", help="the nine structurally special parameters")
    add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--csv", help="also write a delimited report to this path")
    p.add_argument("--plot", help="also write an annotated figure to this path")
    p.set_defaults(func=_cmd_catalog)

    p = sub.add_parser("classify", help="Julia-set connectivity verdict")
    add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=_complex_flag, required=True)
    p.add_argument("--resolution", type=int, default=512)
    p.add_argument("--iters", type=int, default=300)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("render", help="parameter/dynamical plane image")
    add_common(p)
    p.add_argument("--figure", help="named preset from the built-in figure table")
    p.add_argument("--mode", choices=["parameter", "dynamical"])
    p.add_argument("--n", type=int)
    p.add_argument("--alpha", type=_complex_flag)
    p.add_argument("--xmin", type=float, default=-3.0)
    p.add_argument("--xmax", type=float, default=3.0)
    p.add_argument("--ymin", type=float, default=-3.0)
    p.add_argument("--ymax", type=float, default=3.0)
    p.add_argument("--width", type=int, default=1500)
    p.add_argument("--height", type=int, default=1500)
    p.add_argument("--iters", type=int, default=0, help="0 = mode default")
    p.add_argument("--out", help="output image path (.ppm or .png)")
    p.add_argument("--format", choices=["ppm", "png"])
    p.add_argument("--markers", action="store_true",
                   help="overlay critical points, the root at 1, and its extra preimages")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("order", help="empirical convergence order toward a root")
    add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=_complex_flag, required=True)
    p.add_argument("--root-index", type=int, default=0)
    p.add_argument("--offset", type=_complex_flag, default=complex(0.35))
    p.add_argument("--max-steps", type=int, default=200)
    p.add_argument("--window", type=int, default=1)
    p.set_defaults(func=_cmd_order)

    p = sub.add_parser("survey", help="free-critical-orbit census over a parameter grid")
    add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--xmin", type=float, default=-1.4)
    p.add_argument("--xmax", type=float, default=4.6)
    p.add_argument("--ymin", type=float, default=-2.0)
    p.add_argument("--ymax", type=float, default=2.0)
    p.add_argument("--grid-width", type=int, default=200)
    p.add_argument("--grid-height", type=int, default=200)
    p.add_argument("--iters", type=int, default=150)
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--with-verdict", action="store_true",
                   help="also classify each sample's Julia set (slow)")
    p.add_argument("--no-plot", action="store_true",
                   help="skip the PNG figure next to the CSV")
    p.set_defaults(func=_cmd_survey)

    return parser


def _flags_of(parser: argparse.ArgumentParser) -> set[str]:
    flags: set[str] = set()
    for action in parser._actions:  # noqa: SLF001 - argparse offers no public walk
        flags.update(opt for opt in action.option_strings if opt.startswith("--"))
    return flags


def _config_path_from(argv: list[str]) -> Optional[str]:
    """Find --config before argparse runs, so a config file can satisfy
    flags argparse would otherwise reject as missing."""
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if token.startswith("--config="):
            return token.split("=", 1)[1]
    return None


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        config_path = _config_path_from(argv)
        if config_path and argv and not argv[0].startswith("-"):
            sub_parser = None
            for action in parser._actions:  # noqa: SLF001
                if isinstance(action, argparse._SubParsersAction):
                    sub_parser = action.choices.get(argv[0])
            if sub_parser is not None:
                config_tokens = _read_config_tokens(config_path, _flags_of(sub_parser))
                argv = [argv[0]] + config_tokens + argv[1:]
        args = parser.parse_args(argv)
        _echo_config(args)
        return args.func(args)
    except DegenerateParameter as exc:
        print(f"degenerate parameter: {exc}", file=sys.stderr)
        return 2
    except DomainError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except (NoConvergence, BasinEscape) as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return 3
    except IoError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
