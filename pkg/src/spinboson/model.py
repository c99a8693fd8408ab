"""Model data: atomic gap, coupling strength, and the dispersion/coupling profiles.

Built-in profiles are rotationally invariant. The dispersion defaults to the
massless omega(r) = r. Couplings are sqrt(omega)-shaped with a large-momentum
cutoff, either sharp, lambda(r) = sqrt(r) for r <= cutoff, or a Gaussian
roll-off lambda(r) = sqrt(r) exp(-r^2/cutoff^2). Per-node tables are accepted
for both profiles; coupling tables may be complex.

Two derived numbers drive the spectral analysis: ||lambda|| sets the strong
coupling scale, and ||lambda/sqrt(omega)|| decides whether the spin-down
branch function has a zero at all. The weak-coupling threshold for that zero
is sqrt(2 eps) / ||lambda/sqrt(omega)||.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ConfigurationError, ModelError, UsageError
from .quadrature import GAUSS_LEGENDRE, build_radial_grid, integrate, refine

PLUS = +1
MINUS = -1
BRANCHES = (PLUS, MINUS)

ABS_K = "abs-k"
SQRT_CUTOFF = "sqrt-cutoff"
SQRT_GAUSSIAN = "sqrt-gaussian"
TABLE = "table"

DISPERSION_FAMILIES = (ABS_K, TABLE)
COUPLING_FAMILIES = (SQRT_CUTOFF, SQRT_GAUSSIAN, TABLE)


def check_branch(sigma):
    """Reject anything that is not one of the two spin branches."""
    if sigma not in BRANCHES:
        raise UsageError(f"spin branch must be +1 or -1, got {sigma!r}")


@dataclass(frozen=True)
class Dispersion:
    family: str = ABS_K
    table: tuple = None

    def __post_init__(self):
        if self.family not in DISPERSION_FAMILIES:
            raise ConfigurationError(f"unknown dispersion family {self.family!r}")
        if self.family == TABLE:
            if self.table is None:
                raise ConfigurationError("tabulated dispersion needs a table")
            object.__setattr__(self, "table", tuple(float(v) for v in self.table))
        elif self.table is not None:
            raise ConfigurationError(f"dispersion family {self.family!r} takes no table")


@dataclass(frozen=True)
class Coupling:
    family: str = SQRT_CUTOFF
    lambda_cutoff: float = 1.0
    table: tuple = None

    def __post_init__(self):
        if self.family not in COUPLING_FAMILIES:
            raise ConfigurationError(f"unknown coupling family {self.family!r}")
        if not (self.lambda_cutoff > 0.0):
            raise ConfigurationError(
                f"coupling cutoff must be positive, got {self.lambda_cutoff!r}"
            )
        if self.family == TABLE:
            if self.table is None:
                raise ConfigurationError("tabulated coupling needs a table")
            object.__setattr__(self, "table", tuple(complex(v) for v in self.table))
        elif self.table is not None:
            raise ConfigurationError(f"coupling family {self.family!r} takes no table")


@dataclass(frozen=True)
class ModelSpec:
    """Full model: gap eps > 0, coupling strength alpha >= 0, profiles, dimension."""

    eps: float = 1.0
    alpha: float = 1.0
    dimension: int = 1
    dispersion: Dispersion = field(default_factory=Dispersion)
    coupling: Coupling = field(default_factory=Coupling)
    allow_decoupled: bool = False

    def __post_init__(self):
        if not (self.eps > 0.0) or not math.isfinite(self.eps):
            raise ConfigurationError(f"eps must be positive and finite, got {self.eps!r}")
        if not (self.alpha >= 0.0) or not math.isfinite(self.alpha):
            raise ConfigurationError(f"alpha must be nonnegative, got {self.alpha!r}")
        if not isinstance(self.dimension, int) or self.dimension < 1:
            raise ConfigurationError(
                f"dimension must be a positive integer, got {self.dimension!r}"
            )

    def with_alpha(self, alpha):
        return replace(self, alpha=float(alpha))


def default_grid(spec, n, r_max, rule_id=GAUSS_LEGENDRE):
    """Radial grid suited to the model's coupling profile.

    For the sharp cutoff the rule is made composite with a panel boundary at
    the cutoff radius, so the jump in lambda never sits inside a panel and
    the panel rule keeps its full accuracy.
    """
    breakpoints = ()
    if spec.coupling.family == SQRT_CUTOFF:
        cut = spec.coupling.lambda_cutoff
        if cut > r_max:
            raise ConfigurationError(
                f"coupling cutoff {cut} exceeds r_max {r_max}; truncation would clip it"
            )
        if cut < r_max:
            breakpoints = (cut,)
    return build_radial_grid(spec.dimension, n, r_max, rule_id, breakpoints=breakpoints)


def sample(spec, q):
    """Evaluate (omega_i, lambda_i) at the grid nodes.

    Returns
    -------
    (ndarray, ndarray)
        Dispersion values (float) and coupling values (float or complex).
    """
    if spec.dimension != q.dimension:
        raise UsageError(
            f"model dimension {spec.dimension} != grid dimension {q.dimension}"
        )
    r = q.nodes

    disp = spec.dispersion
    if disp.family == ABS_K:
        omega = r.copy()
    else:
        if len(disp.table) != q.n:
            raise UsageError(
                f"dispersion table has {len(disp.table)} entries, grid has {q.n} nodes"
            )
        omega = np.asarray(disp.table, dtype=float)
    if np.any(omega < 0.0):
        raise ModelError("dispersion must be nonnegative at every node")

    coup = spec.coupling
    if coup.family == SQRT_CUTOFF:
        if coup.lambda_cutoff > q.r_max:
            raise ConfigurationError(
                f"coupling cutoff {coup.lambda_cutoff} exceeds r_max {q.r_max}"
            )
        lam = np.sqrt(r) * (r <= coup.lambda_cutoff)
    elif coup.family == SQRT_GAUSSIAN:
        lam = np.sqrt(r) * np.exp(-((r / coup.lambda_cutoff) ** 2))
    else:
        if len(coup.table) != q.n:
            raise UsageError(
                f"coupling table has {len(coup.table)} entries, grid has {q.n} nodes"
            )
        lam = np.asarray(coup.table)
        if np.all(lam.imag == 0.0):
            lam = lam.real.copy()

    if not spec.allow_decoupled and not np.any(np.abs(lam) > 0.0):
        raise ModelError(
            "coupling vanishes at every node; set allow_decoupled for a free model"
        )
    return omega, lam


def lambda_norm(spec, q):
    """Grid value of ||lambda|| = (int |lambda|^2)^(1/2)."""
    _, lam = sample(spec, q)
    return math.sqrt(integrate(q, np.abs(lam) ** 2))


@dataclass(frozen=True)
class IRDiagnostics:
    ir_norm: float
    small_alpha_threshold: float
    ir_singular: bool


def ir_diagnostics(spec, q):
    """Infrared norm ||lambda/sqrt(omega)|| and the weak-coupling threshold.

    The threshold sqrt(2 eps)/ir_norm separates, for the spin-down branch, the
    regime where the branch function keeps a zero from the conventional one.
    A zero coupling gives threshold +inf. The singular flag is heuristic: the
    grid value is recomputed on a doubly refined grid, and growth beyond 10%
    marks a family whose low-momentum integral is diverging (for tabulated
    profiles no refinement is possible and the flag relies on the node values
    alone).
    """
    ir_sq = _ir_norm_sq(spec, q)
    singular = not math.isfinite(ir_sq)
    if (
        not singular
        and ir_sq > 0.0
        and spec.dispersion.family != TABLE
        and spec.coupling.family != TABLE
    ):
        refined = _ir_norm_sq(spec, refine(q, 2))
        if not math.isfinite(refined) or refined > 1.1 * ir_sq:
            singular = True

    ir_norm = math.sqrt(ir_sq) if math.isfinite(ir_sq) else math.inf
    if ir_norm == 0.0:
        threshold = math.inf
    elif math.isinf(ir_norm):
        threshold = 0.0
    else:
        threshold = math.sqrt(2.0 * spec.eps) / ir_norm
    return IRDiagnostics(ir_norm, threshold, singular)


def _ir_norm_sq(spec, q):
    omega, lam = sample(spec, q)
    lam2 = np.abs(lam) ** 2
    if np.any((omega == 0.0) & (lam2 > 0.0)):
        return math.inf
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(lam2 > 0.0, lam2 / omega, 0.0)
    return integrate(q, ratio)
