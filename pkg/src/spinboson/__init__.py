"""Bound states of a two-photon spin-boson model, counted two ways.

The package computes the bottom of the essential spectrum for both spin
branches of a truncated two-photon spin-boson Hamiltonian, then counts the
discrete eigenvalues below it. The count is produced twice from independent
routes: a Schur-complement pencil acting on one-photon amplitudes, and a
direct dense diagonalization of the full three-block operator in weighted
coordinates. The two must agree exactly; the verification suite in
spinboson.verify turns that agreement, and every inequality the analysis
leans on, into machine checks.

Modules
-------
quadrature  radial Gauss-Legendre grids with panel splits and refinement
model       dispersion and coupling profiles, branch constants, diagnostics
essspec     branch functions, their roots, the essential spectrum bottom
pencil      the z-dependent pencil, kernel split, inertia counting
oracle      the dense block operator and its direct eigenvalue counts
verify      the machine verification suite (quick and full levels)
cli         the spinboson command line tool
"""

from .errors import (
    ConfigurationError,
    DomainError,
    ModelError,
    NumericalError,
    SpinBosonError,
    UsageError,
)
from .quadrature import (
    GAUSS_LEGENDRE,
    Quadrature,
    build_radial_grid,
    integrate,
    refine,
    sphere_area,
)
from .model import (
    ABS_K,
    BRANCHES,
    COUPLING_FAMILIES,
    DISPERSION_FAMILIES,
    MINUS,
    PLUS,
    SQRT_CUTOFF,
    SQRT_GAUSSIAN,
    TABLE,
    Coupling,
    Dispersion,
    IRDiagnostics,
    ModelSpec,
    check_branch,
    default_grid,
    ir_diagnostics,
    lambda_norm,
    sample,
)
from .essspec import (
    CONVENTION,
    ROOT,
    AsymptoticRow,
    EssSpecBottom,
    EssSpecResult,
    asymptotic_report,
    bottom_ess_spectrum,
    eval_phi,
    find_phi_root,
    phi_derivative,
)
from .pencil import (
    CountReport,
    PencilAssembly,
    RankTwoMatrix,
    assemble_k1,
    assemble_k2,
    assemble_r,
    count_negative_eigs,
    delta_values,
    elementary_inequality_gap,
    kernel_psi1,
    kernel_psi2,
    pencil_slope_check,
    positivity_margin,
    rank_two_matrix,
)
from .oracle import (
    MAX_DIRECT_NODES,
    BlockOperator,
    TotalCount,
    assemble_block,
    eig_below,
    pair_order,
    schur_complement,
    total_count,
)
from .verify import CheckResult, FULL_NAMES, QUICK_NAMES, run_named, run_suite

__version__ = "0.1.0"

__all__ = [
    "ABS_K",
    "BRANCHES",
    "CONVENTION",
    "COUPLING_FAMILIES",
    "CheckResult",
    "ConfigurationError",
    "Coupling",
    "CountReport",
    "DISPERSION_FAMILIES",
    "Dispersion",
    "DomainError",
    "EssSpecBottom",
    "EssSpecResult",
    "AsymptoticRow",
    "FULL_NAMES",
    "GAUSS_LEGENDRE",
    "IRDiagnostics",
    "MAX_DIRECT_NODES",
    "MINUS",
    "ModelError",
    "ModelSpec",
    "NumericalError",
    "PLUS",
    "PencilAssembly",
    "QUICK_NAMES",
    "Quadrature",
    "ROOT",
    "RankTwoMatrix",
    "SQRT_CUTOFF",
    "SQRT_GAUSSIAN",
    "SpinBosonError",
    "TABLE",
    "TotalCount",
    "BlockOperator",
    "UsageError",
    "assemble_block",
    "assemble_k1",
    "assemble_k2",
    "assemble_r",
    "asymptotic_report",
    "bottom_ess_spectrum",
    "build_radial_grid",
    "check_branch",
    "count_negative_eigs",
    "default_grid",
    "delta_values",
    "eig_below",
    "elementary_inequality_gap",
    "eval_phi",
    "find_phi_root",
    "integrate",
    "ir_diagnostics",
    "kernel_psi1",
    "kernel_psi2",
    "lambda_norm",
    "pair_order",
    "pencil_slope_check",
    "phi_derivative",
    "positivity_margin",
    "rank_two_matrix",
    "refine",
    "run_named",
    "run_suite",
    "sample",
    "schur_complement",
    "sphere_area",
    "total_count",
    "__version__",
]
