"""Numerical laboratory for a one-parameter family of root-finding
iterations applied to z^n - 1: closed-form landmarks, an orbit engine, a
Julia-set connectivity classifier, and deterministic plane renderers."""

from .errors import (
    BasinEscape,
    DegenerateParameter,
    DomainError,
    IoError,
    NoConvergence,
)
from .sphere import (
    INFINITY,
    Infinity,
    SpherePoint,
    as_sphere,
    chordal_distance,
    int_power,
    is_finite,
    is_infinity,
    nth_roots,
    principal_nth_root,
    roots_of_unity,
)
from .operators import (
    FORM_TOLERANCE,
    FamilyParams,
    OperatorForm,
    classify_form,
    eval_derivative,
    evaluate,
    halley_alpha,
    newton_like_alpha,
    operator_degree,
    principal_free_critical,
    principal_free_critical_target,
    reduced_map,
    upper_degenerate_alpha,
)
from .landmarks import (
    BifurcationCatalogEntry,
    CatalogLabel,
    CriticalPointInfo,
    CriticalPointKind,
    DiskSubject,
    FixedPointInfo,
    FixedPointKind,
    StabilityClass,
    StabilityDisk,
    bifurcation_catalog,
    critical_points,
    fixed_points,
    multiplier_at_infinity,
    order4_alpha,
    precritical_alphas,
    stability_class,
    stability_disks,
    strange_fixed_multiplier,
    superattracting_strange_alpha,
)
from .polyroots import ComplexPolynomial, all_roots, preimage_polynomial
from .orbits import (
    ConvergedToPoint,
    ConvergedToRoot,
    CycleDetected,
    IterationBudget,
    MaxIterations,
    OrbitOutcome,
    OrderEstimate,
    batch_orbit_roots,
    cat_set_membership,
    critical_orbit_fate,
    estimate_convergence_order,
    iterate_orbit,
)
from .connectivity import (
    BasinGrid,
    Confidence,
    ConnectivityVerdict,
    Region,
    classify_julia,
    label_basins,
)
from .render import (
    DEFAULT_PALETTE,
    FIGURE_PRESETS,
    FigurePreset,
    Palette,
    PlaneImage,
    PlaneMode,
    PlaneSpec,
    color_for_fraction,
    draw_markers,
    dynamical_plane_spec,
    format_complex,
    parameter_plane_spec,
    ppm_bytes,
    render_dynamical_plane,
    render_parameter_plane,
    sidecar_text,
    write_image,
)

__version__ = "1.0.0"

__all__ = [
    "BasinEscape",
    "DegenerateParameter",
    "DomainError",
    "IoError",
    "NoConvergence",
    "INFINITY",
    "Infinity",
    "SpherePoint",
    "as_sphere",
    "chordal_distance",
    "int_power",
    "is_finite",
    "is_infinity",
    "nth_roots",
    "principal_nth_root",
    "roots_of_unity",
    "FORM_TOLERANCE",
    "FamilyParams",
    "OperatorForm",
    "classify_form",
    "eval_derivative",
    "evaluate",
    "halley_alpha",
    "newton_like_alpha",
    "operator_degree",
    "principal_free_critical",
    "principal_free_critical_target",
    "reduced_map",
    "upper_degenerate_alpha",
    "BifurcationCatalogEntry",
    "CatalogLabel",
    "CriticalPointInfo",
    "CriticalPointKind",
    "DiskSubject",
    "FixedPointInfo",
    "FixedPointKind",
    "StabilityClass",
    "StabilityDisk",
    "bifurcation_catalog",
    "critical_points",
    "fixed_points",
    "multiplier_at_infinity",
    "order4_alpha",
    "precritical_alphas",
    "stability_class",
    "stability_disks",
    "strange_fixed_multiplier",
    "superattracting_strange_alpha",
    "ComplexPolynomial",
    "all_roots",
    "preimage_polynomial",
    "ConvergedToPoint",
    "ConvergedToRoot",
    "CycleDetected",
    "IterationBudget",
    "MaxIterations",
    "OrbitOutcome",
    "OrderEstimate",
    "batch_orbit_roots",
    "cat_set_membership",
    "critical_orbit_fate",
    "estimate_convergence_order",
    "iterate_orbit",
    "BasinGrid",
    "Confidence",
    "ConnectivityVerdict",
    "Region",
    "classify_julia",
    "label_basins",
    "DEFAULT_PALETTE",
    "FIGURE_PRESETS",
    "FigurePreset",
    "Palette",
    "PlaneImage",
    "PlaneMode",
    "PlaneSpec",
    "color_for_fraction",
    "draw_markers",
    "dynamical_plane_spec",
    "format_complex",
    "parameter_plane_spec",
    "ppm_bytes",
    "render_dynamical_plane",
    "render_parameter_plane",
    "sidecar_text",
    "write_image",
    "__version__",
]
