"""Schur-complement pencil on the one-photon sector, in weighted coordinates.

Eliminating the vacuum and the two-photon sector from the block Hamiltonian
leaves, for z < sigma*eps, the Hermitian pencil

    R(z) = diag(Delta(r_i; z)) - alpha^2 (K1 + K2),

where Delta(k; z) = omega(k) - sigma*eps - z
                    - alpha^2 int |lambda(q)|^2 / (omega(k) + omega(q) + sigma*eps - z) dq
and the combined integral kernel is lambda(k1)~ lambda(k2) times
1/(omega1 + omega2 + c) + 1/c with the gap c = sigma*eps - z. Writing

    Psi1 = 1/(omega1 + c) + 1/(omega2 + c) - 1/c,
    Psi2 = 1/(omega1 + omega2 + c) - Psi1,

splits the kernel into K1 (kernel lambda~ lambda [1/(omega1+c) + 1/(omega2+c)],
rank at most two) and K2 (kernel lambda~ lambda Psi2). The elementary bound

    0 <= 1/(a+b+c) - 1/(a+c) - 1/(b+c) + 1/c <= sqrt(a b) / (2 c^2)

controls Psi2 pointwise, and Delta(k; E) >= omega(k) at any point where Phi is
nonnegative; together they bound the number of negative eigenvalues of R.

Weighted coordinates u_i = sqrt(w_i) f(r_i) make multiplication operators
diagonal and kernel operators plain Hermitian matrices with entries
sqrt(w_m w_n) * kernel(r_m, r_n), so matrix inertia is the bound-state count.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import essspec, model
from .errors import DomainError, NumericalError, UsageError

_CROSSCHECK_RTOL = 1e-12


def _gap(sigma, z, eps):
    c = sigma * eps - z
    if not (c > 0.0):
        raise DomainError(f"z must lie strictly below sigma*eps, got gap {c}")
    return c


def kernel_psi1(sigma, z, w1, w2, eps=1.0):
    """First kernel split 1/(w1+c) + 1/(w2+c) - 1/c at the gap c = sigma*eps - z."""
    model.check_branch(sigma)
    if w1 < 0.0 or w2 < 0.0:
        raise UsageError("dispersion arguments must be nonnegative")
    c = _gap(sigma, z, eps)
    return 1.0 / (w1 + c) + 1.0 / (w2 + c) - 1.0 / c


def kernel_psi2(sigma, z, w1, w2, eps=1.0):
    """Remainder kernel 1/(w1+w2+c) - Psi1; obeys 0 <= Psi2 <= sqrt(w1 w2)/(2 c^2)."""
    model.check_branch(sigma)
    if w1 < 0.0 or w2 < 0.0:
        raise UsageError("dispersion arguments must be nonnegative")
    c = _gap(sigma, z, eps)
    value = 1.0 / (w1 + w2 + c) - (1.0 / (w1 + c) + 1.0 / (w2 + c) - 1.0 / c)
    slack = 1e-12 * max(1.0, 1.0 / c)
    assert value >= -slack, f"Psi2 lower bound violated: {value}"
    assert value <= math.sqrt(w1 * w2) / (2.0 * c * c) + slack, (
        f"Psi2 upper bound violated: {value}"
    )
    return value


def elementary_inequality_gap(a, b, c):
    """Both slacks in 0 <= 1/(a+b+c) - 1/(a+c) - 1/(b+c) + 1/c <= sqrt(ab)/(2c^2).

    Returns (lower_gap, upper_gap): middle minus lower bound, and upper bound
    minus middle. Nonnegative up to roundoff for a, b >= 0 and c > 0.
    """
    if a < 0.0 or b < 0.0:
        raise UsageError("a and b must be nonnegative")
    if not (c > 0.0):
        raise DomainError(f"c must be positive, got {c}")
    middle = 1.0 / (a + b + c) - 1.0 / (a + c) - 1.0 / (b + c) + 1.0 / c
    return middle, math.sqrt(a * b) / (2.0 * c * c) - middle


def delta_values(spec, q, sigma, z):
    """Diagonal part Delta(r_i; z) of the pencil.

    Computed from the defining integral and cross-checked against the shift
    identity Delta(k; z) = Phi(z - omega(k)); disagreement beyond 1e-12
    (relative to the vector scale) aborts, because it means the two code
    paths no longer implement the same function.
    """
    model.check_branch(sigma)
    c = _gap(sigma, z, spec.eps)
    omega, lam = model.sample(spec, q)
    wl2 = q.weights * np.abs(lam) ** 2
    denom = omega[:, None] + omega[None, :] + c
    direct = omega - sigma * spec.eps - z - spec.alpha**2 * (wl2[None, :] / denom).sum(axis=1)

    via_phi = np.array([essspec.eval_phi(spec, q, sigma, z - w) for w in omega])
    scale = 1.0 + float(np.max(np.abs(direct)))
    if float(np.max(np.abs(direct - via_phi))) > _CROSSCHECK_RTOL * scale:
        raise NumericalError(
            "Delta mismatch between integral form and shifted Phi "
            f"(sigma={sigma}, z={z})"
        )
    return direct


def _weighted_factors(q, lam):
    s = np.sqrt(q.weights)
    return s * np.conj(lam), s * lam


def assemble_k1(spec, q, sigma, z):
    """Rank-two kernel matrix: entries sqrt(w_m w_n) lam_m~ lam_n (1/(w_m+c) + 1/(w_n+c))."""
    model.check_branch(sigma)
    c = _gap(sigma, z, spec.eps)
    omega, lam = model.sample(spec, q)
    row, col = _weighted_factors(q, lam)
    a = 1.0 / (omega + c)
    return np.outer(row * a, col) + np.outer(row, col * a)


def assemble_k2(spec, q, sigma, z):
    """Remainder kernel matrix with entries sqrt(w_m w_n) lam_m~ lam_n Psi2(w_m, w_n; z)."""
    model.check_branch(sigma)
    c = _gap(sigma, z, spec.eps)
    omega, lam = model.sample(spec, q)
    row, col = _weighted_factors(q, lam)
    o1 = omega[:, None]
    o2 = omega[None, :]
    psi2 = 1.0 / (o1 + o2 + c) - (1.0 / (o1 + c) + 1.0 / (o2 + c) - 1.0 / c)
    return np.outer(row, col) * psi2


@dataclass(frozen=True, eq=False)
class PencilAssembly:
    """One evaluation of the pencil: diagonal, both kernel parts, and their sum."""

    sigma: int
    z: float
    delta: np.ndarray
    k1: np.ndarray
    k2: np.ndarray
    r: np.ndarray


def assemble_r(spec, q, sigma, z):
    """Assemble R(z) = diag(Delta) - alpha^2 (K1 + K2).

    The split K1 + K2 is rebuilt against the unsplit kernel
    lambda~ lambda [1/(omega1 + omega2 + c) + 1/c] entry by entry; the two
    must agree to 1e-12 relative, otherwise the decomposition identity has
    been broken and assembly aborts.
    """
    model.check_branch(sigma)
    c = _gap(sigma, z, spec.eps)
    delta = delta_values(spec, q, sigma, z)
    k1 = assemble_k1(spec, q, sigma, z)
    k2 = assemble_k2(spec, q, sigma, z)

    omega, lam = model.sample(spec, q)
    row, col = _weighted_factors(q, lam)
    unsplit = np.outer(row, col) * (
        1.0 / (omega[:, None] + omega[None, :] + c) + 1.0 / c
    )
    a2 = spec.alpha**2
    scale = 1.0 + a2 * float(np.max(np.abs(unsplit)))
    if float(np.max(np.abs(a2 * (k1 + k2) - a2 * unsplit))) > _CROSSCHECK_RTOL * scale:
        raise NumericalError(
            f"kernel split K1 + K2 disagrees with the unsplit kernel (sigma={sigma}, z={z})"
        )

    r = np.diag(delta).astype(unsplit.dtype) - a2 * (k1 + k2)
    return PencilAssembly(sigma, float(z), delta, k1, k2, r)


@dataclass(frozen=True)
class RankTwoMatrix:
    """2x2 representation of K1 on its range, basis {lambda~, lambda~/(omega+c)}.

    m11 = int |lambda|^2/(omega+c), m12 = int |lambda|^2/(omega+c)^2,
    m21 = int |lambda|^2, m22 = m11. The determinant is <= 0 by the
    Cauchy-Schwarz inequality, strictly negative when at least two nodes
    carry distinct dispersion and nonzero coupling, so K1 contributes exactly
    one negative direction.
    """

    m11: float
    m12: float
    m21: float
    m22: float

    @property
    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    def eigenvalues(self):
        spread = math.sqrt(self.m12 * self.m21)
        return self.m11 - spread, self.m11 + spread


def rank_two_matrix(spec, q, sigma, z):
    model.check_branch(sigma)
    c = _gap(sigma, z, spec.eps)
    omega, lam = model.sample(spec, q)
    wl2 = q.weights * np.abs(lam) ** 2
    m11 = float(np.sum(wl2 / (omega + c)))
    m12 = float(np.sum(wl2 / (omega + c) ** 2))
    m21 = float(np.sum(wl2))
    return RankTwoMatrix(m11, m12, m21, m11)


@dataclass(frozen=True, eq=False)
class CountReport:
    """Eigenvalue count below zero with the ambiguity band made explicit.

    count is the number of eigenvalues below -tol; flagged is the number
    inside (-tol, +tol). A nonzero flagged count means the answer depends on
    the tolerance and must be treated as ambiguous, never silently resolved.
    """

    sigma: object
    z: object
    count: int
    eigenvalues: np.ndarray
    tolerance_band: tuple
    flagged: int
    method: str = "schur"


def count_negative_eigs(matrix, tol=None, *, sigma=None, z=None, method="schur"):
    """Count eigenvalues of a Hermitian matrix below -tol.

    tol defaults to 1e-9 * (1 + max|entry|). Eigenvalues inside the band
    (-tol, tol) are reported in ``flagged``.
    """
    m = np.asarray(matrix)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {m.shape}")
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    if float(np.max(np.abs(m - m.conj().T))) > 1e-13 * (1.0 + scale):
        raise UsageError("matrix is not Hermitian")
    if tol is None:
        tol = 1e-9 * (1.0 + scale)
    try:
        eigs = np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    count = int(np.sum(eigs < -tol))
    flagged = int(np.sum((eigs > -tol) & (eigs < tol)))
    return CountReport(sigma, z, count, eigs, (-float(tol), float(tol)), flagged, method)


def positivity_margin(spec, q, sigma, z):
    """Smallest eigenvalue of diag(Delta) - alpha^2 K2.

    Nonnegative margin certifies that every negative direction of the pencil
    comes from the rank-two part alone, which caps the bound-state count at
    two overall.
    """
    delta = delta_values(spec, q, sigma, z)
    k2 = assemble_k2(spec, q, sigma, z)
    m = np.diag(delta).astype(k2.dtype) - spec.alpha**2 * k2
    return float(np.linalg.eigvalsh(m)[0])


def pencil_slope_check(spec, q, sigma, z, probe, h=None):
    """Finite-difference slope of z -> <R(z) phi, phi> at a probe vector.

    The analytic slope is -||phi||^2 - alpha^2 (nonnegative terms), so the
    returned value should not exceed -||phi||^2 up to roundoff. The central
    difference errs on the negative side here (the form is concave in z),
    which keeps the check one-sided.
    """
    phi = np.asarray(probe)
    if phi.shape != q.nodes.shape:
        raise UsageError(f"probe has shape {phi.shape}, grid has {q.nodes.shape}")
    c = _gap(sigma, z, spec.eps)
    if h is None:
        h = min(1e-5 * max(1.0, c), 0.45 * c)
    if not (0.0 < h < c):
        raise UsageError(f"step h={h} must keep z + h below sigma*eps")

    def form(zz):
        r = assemble_r(spec, q, sigma, zz).r
        return float(np.real(np.vdot(phi, r @ phi)))

    return (form(z + h) - form(z - h)) / (2.0 * h)
