"""Gabor frame theory on R, R x Q_p and the adeles A_Q.

Exact p-adic/adelic arithmetic, Wexler-Raz duality across the three settings,
canonical dual and tight windows with certified accuracy, an l^1
Heisenberg-module layer, and deterministic JSON/CSV reporting.
"""

from .exact import (
    Phase,
    PrueferElement,
    crt_congruence_solve,
    padic_abs,
    padic_fractional_part,
    padic_valuation,
    product_formula_defect,
    pruefer_char_eval,
)
from .cyclotomic import ExactComplex
from .padic import (
    PAdicBall,
    PAdicTestFunction,
    S0ZpSeries,
    char_ball_integral,
    inner_product_padic,
    s0_norm,
    s0_norm_qp,
    tf_shift_padic,
)
from .windows import (
    AccuracyError,
    BSplineWindow,
    Box,
    CoefficientSequence,
    FiniteCombo,
    Gaussian,
    RectLattice,
    Window,
    janssen_coefficients,
    parse_window,
    tf_inner_product_real,
)
from .frames import (
    FrameBounds,
    NotAFrameError,
    canonical_dual,
    frame_bounds_rational,
    tight_window,
)
from .adelic import (
    AdelicPoint,
    AdelicTFLattice,
    BalianLowRow,
    EquivalenceReport,
    GroupSelector,
    SeparableWindow,
    WexlerRazReport,
    WexlerRazRow,
    balian_low_scan,
    character_pair,
    fundamental_domain_reduce,
    lattice_embed,
    modulation_norm,
    promote_rational,
    theorem_equivalence_suite,
    tf_inner_product_group,
    wexler_raz_check,
)
from .module_algebra import (
    ModuleAlgebraTag,
    ModuleAxiomReport,
    ModuleElement,
    ProjectionReport,
    cocycle,
    module_action,
    module_axiom_check,
    module_inner,
    projection_check,
    twisted_convolve,
    twisted_involution,
)
from .reports import SCHEMA, Report, RunConfig, canonical_json, emit

__version__ = "1.0.0"

__all__ = [
    "AccuracyError",
    "AdelicPoint",
    "AdelicTFLattice",
    "BSplineWindow",
    "BalianLowRow",
    "Box",
    "CoefficientSequence",
    "EquivalenceReport",
    "ExactComplex",
    "FiniteCombo",
    "FrameBounds",
    "Gaussian",
    "GroupSelector",
    "ModuleAlgebraTag",
    "ModuleAxiomReport",
    "ModuleElement",
    "NotAFrameError",
    "PAdicBall",
    "PAdicTestFunction",
    "Phase",
    "ProjectionReport",
    "PrueferElement",
    "RectLattice",
    "Report",
    "RunConfig",
    "S0ZpSeries",
    "SCHEMA",
    "SeparableWindow",
    "WexlerRazReport",
    "WexlerRazRow",
    "Window",
    "balian_low_scan",
    "canonical_dual",
    "canonical_json",
    "char_ball_integral",
    "character_pair",
    "cocycle",
    "crt_congruence_solve",
    "emit",
    "frame_bounds_rational",
    "fundamental_domain_reduce",
    "inner_product_padic",
    "janssen_coefficients",
    "lattice_embed",
    "modulation_norm",
    "module_action",
    "module_axiom_check",
    "module_inner",
    "padic_abs",
    "padic_fractional_part",
    "padic_valuation",
    "parse_window",
    "product_formula_defect",
    "projection_check",
    "promote_rational",
    "s0_norm",
    "s0_norm_qp",
    "theorem_equivalence_suite",
    "tf_inner_product_group",
    "tf_inner_product_real",
    "tf_shift_padic",
    "tight_window",
    "tight_window",
    "twisted_convolve",
    "twisted_involution",
    "wexler_raz_check",
]
