"""Bottom of the essential spectrum, one value per spin branch.

Each branch sigma in {+1, -1} carries the function

    Phi_sigma(z) = -sigma*eps - z - alpha^2 int |lambda(q)|^2 / (omega(q) + sigma*eps - z) dq

on the half-line z < sigma*eps. Phi_sigma is strictly decreasing there and
grows without bound as z -> -inf, so it has a zero exactly when its value at
the right end of the half-line is negative, and that zero is unique. The zero
is the branch bottom E_sigma(alpha). For sigma = -1 the right-end value is
2 eps - alpha^2 ||lambda/sqrt(omega)||^2; below the weak-coupling threshold it
stays positive, Phi has no zero, and the bottom is -eps by convention.

Root finding is bracketing plus bisection with a Newton polish. The bracket
expands downward geometrically from just below sigma*eps, which is cheap
because Phi is monotone: one sign change, found once, is the whole story.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import model
from .errors import DomainError, NumericalError, UsageError
from .quadrature import integrate

ROOT = "root"
CONVENTION = "convention"


@dataclass(frozen=True)
class EssSpecResult:
    """One branch bottom: its value, how it was obtained, and solver telemetry.

    residual is |Phi(value)| and is meaningful only for kind="root"; the
    conventional value -eps lies outside Phi's domain, so residual is NaN
    there. iterations counts Phi evaluations.
    """

    sigma: int
    value: float
    kind: str
    residual: float
    iterations: int


@dataclass(frozen=True)
class EssSpecBottom:
    e_plus: EssSpecResult
    e_minus: EssSpecResult
    e_min: float


def _phi_terms(spec, q):
    omega, lam = model.sample(spec, q)
    return omega, q.weights * np.abs(lam) ** 2


def _check_domain(sigma, eps, z):
    if not (z < sigma * eps):
        raise DomainError(f"z must satisfy z < sigma*eps = {sigma * eps}, got {z}")


def eval_phi(spec, q, sigma, z):
    """Grid value of Phi_sigma(z); requires z < sigma*eps."""
    model.check_branch(sigma)
    _check_domain(sigma, spec.eps, z)
    omega, wl2 = _phi_terms(spec, q)
    se = sigma * spec.eps
    return float(-se - z - spec.alpha**2 * np.sum(wl2 / (omega + se - z)))


def phi_derivative(spec, q, sigma, z):
    """d Phi_sigma / dz, always <= -1 on the domain."""
    model.check_branch(sigma)
    _check_domain(sigma, spec.eps, z)
    omega, wl2 = _phi_terms(spec, q)
    se = sigma * spec.eps
    return float(-1.0 - spec.alpha**2 * np.sum(wl2 / (omega + se - z) ** 2))


def find_phi_root(spec, q, sigma, *, root_tol=1e-12, max_expansions=200):
    """Locate the zero of Phi_sigma, or report the conventional branch.

    Since Phi is strictly decreasing with limit +inf at -inf, the zero exists
    iff Phi is negative just below sigma*eps. When it is not (possible only
    for sigma = -1, weak coupling), the bottom is -eps by convention and no
    root is reported.

    The zero is bracketed by geometric downward expansion, bisected to a
    width of root_tol * max(1, |E|), then Newton-polished. The residual must
    come out below 100 * root_tol * max(1, alpha^2 ||lambda||^2 / (sigma*eps - E)).
    """
    model.check_branch(sigma)
    eps = spec.eps
    alpha = spec.alpha
    se = sigma * eps
    omega, wl2 = _phi_terms(spec, q)
    shifted = omega + se

    def phi(z):
        return float(-se - z - alpha * alpha * np.sum(wl2 / (shifted - z)))

    delta0 = 1e-8 * max(1.0, eps)
    z0 = se - delta0
    evals = 1
    if phi(z0) >= 0.0:
        if sigma == model.PLUS:
            # Phi(+) just below +eps equals -2 eps - alpha^2 (...) < 0 always.
            raise NumericalError(
                f"Phi(sigma=+1) unexpectedly nonnegative at z={z0}"
            )
        return EssSpecResult(sigma, -eps, CONVENTION, math.nan, evals)

    width = max(1.0, alpha * math.sqrt(float(np.sum(wl2))))
    hi = z0  # phi(hi) < 0
    lo = None
    for k in range(max_expansions):
        cand = z0 - width * 4.0**k
        fc = phi(cand)
        evals += 1
        if fc >= 0.0:
            lo = cand
            break
        hi = cand
    if lo is None:
        raise NumericalError(
            f"no sign change after {max_expansions} bracket expansions "
            f"(sigma={sigma}, alpha={alpha}, last z={hi})"
        )

    # phi(lo) >= 0 > phi(hi) with lo < hi: bisect, then polish.
    while hi - lo > root_tol * max(1.0, abs(lo)):
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break
        fm = phi(mid)
        evals += 1
        if fm > 0.0:
            lo = mid
        elif fm < 0.0:
            hi = mid
        else:
            lo = hi = mid

    z = 0.5 * (lo + hi)
    for _ in range(6):
        f = phi(z)
        fp = -1.0 - alpha * alpha * float(np.sum(wl2 / (shifted - z) ** 2))
        evals += 1
        znew = z - f / fp
        if not (lo <= znew <= hi):
            znew = min(max(znew, lo), hi)
        if znew == z:
            break
        z = znew

    residual = abs(phi(z))
    evals += 1
    norm_sq = float(np.sum(wl2))
    tol_phi = 100.0 * root_tol * max(1.0, alpha * alpha * norm_sq / (se - z))
    if residual > tol_phi:
        raise NumericalError(
            f"root polish left residual {residual} > {tol_phi} "
            f"(sigma={sigma}, alpha={alpha}, z={z})"
        )
    return EssSpecResult(sigma, float(z), ROOT, residual, evals)


def bottom_ess_spectrum(spec, q, *, root_tol=1e-12):
    """Both branch bottoms and their minimum.

    For alpha > 0 the spin-up bottom always lies strictly below -eps; that is
    enforced here as a sanity check on the solver.
    """
    e_plus = find_phi_root(spec, q, model.PLUS, root_tol=root_tol)
    e_minus = find_phi_root(spec, q, model.MINUS, root_tol=root_tol)
    if spec.alpha > 0.0:
        if not (e_plus.value < -spec.eps):
            raise NumericalError(
                f"spin-up bottom {e_plus.value} not below -eps = {-spec.eps}"
            )
    elif abs(e_plus.value + spec.eps) > 1e-9 * max(1.0, spec.eps):
        raise NumericalError(
            f"decoupled spin-up bottom {e_plus.value} differs from -eps"
        )
    return EssSpecBottom(e_plus, e_minus, min(e_plus.value, e_minus.value))


@dataclass(frozen=True)
class AsymptoticRow:
    sigma: int
    alpha: float
    energy: float
    kind: str
    energy_over_alpha: float
    strength_ratio: float  # alpha^2 / (2 (sigma*eps - energy)^2)


def asymptotic_report(spec, q, alphas, *, root_tol=1e-12):
    """Strong-coupling table for both branches.

    Rows carry E(alpha), E/alpha and alpha^2 / (2 (sigma*eps - E)^2). As alpha
    grows, E/alpha approaches -||lambda|| and the last column approaches
    1 / (2 ||lambda||^2); the report states the grid values and leaves the
    judgement to the caller.
    """
    alphas = [float(a) for a in alphas]
    if any(a <= 0.0 for a in alphas):
        raise UsageError("asymptotic report needs strictly positive alpha values")
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise UsageError("alpha values must be strictly increasing")

    rows = []
    for sigma in model.BRANCHES:
        se = sigma * spec.eps
        for a in alphas:
            res = find_phi_root(spec.with_alpha(a), q, sigma, root_tol=root_tol)
            gap = se - res.value
            # on the conventional branch the gap closes and the ratio has no
            # meaning; report NaN rather than inventing a number
            ratio = a * a / (2.0 * gap * gap) if gap > 0.0 else math.nan
            rows.append(
                AsymptoticRow(
                    sigma=sigma,
                    alpha=a,
                    energy=res.value,
                    kind=res.kind,
                    energy_over_alpha=res.value / a,
                    strength_ratio=ratio,
                )
            )
    return rows
