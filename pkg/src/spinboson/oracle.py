"""Dense truncated-Fock oracle for cross-checking the pencil route.

The block Hamiltonian acts on vacuum + one-photon + symmetric two-photon
amplitudes. On an n-node grid that is a Hermitian matrix of dimension
1 + n + n(n+1)/2, small enough to diagonalize directly, which makes it an
independent referee for everything the Schur pencil claims: by inertia
additivity, the number of eigenvalues of the block below z equals the number
of negative eigenvalues of R(z) whenever the eliminated blocks are positive
definite, i.e. for every z < sigma*eps.

Coordinates are weighted so the standard dot product reproduces the Fock
inner product, whose two-photon part carries a factor 1/2:

    u_i    = sqrt(w_i) f1(r_i)
    v_ij   = sqrt(w_i w_j) f2(r_i, r_j)      for i < j
    v_ii   = (w_i / sqrt(2)) f2(r_i, r_i)

The sqrt(2) on diagonal pairs is what makes the discrete Schur complement
land exactly on the pencil: eliminating pair (i, i) contributes the q = i
term of Delta's integral once and the kernel diagonal once, with no double
counting and no missing half.
"""

from dataclasses import dataclass

import numpy as np

from . import essspec, model
from .errors import DomainError, UsageError
from .pencil import CountReport

MAX_DIRECT_NODES = 48  # dim = 1 + n + n(n+1)/2 stays at or below 1225


@dataclass(frozen=True, eq=False)
class BlockOperator:
    """Assembled block matrix plus the index bookkeeping.

    Layout: index 0 is the vacuum, 1..n the one-photon nodes, then the pairs
    (i, j) with i <= j in lexicographic order.
    """

    sigma: int
    dim: int
    matrix: np.ndarray
    pairs: tuple
    n_nodes: int


def pair_order(n):
    """Lexicographic (i, j) with i <= j; fixes the two-photon index layout."""
    return tuple((i, j) for i in range(n) for j in range(i, n))


def assemble_block(spec, q, sigma, *, max_nodes=MAX_DIRECT_NODES):
    """Assemble the dense block Hamiltonian in weighted coordinates."""
    model.check_branch(sigma)
    n = q.n
    if n > max_nodes:
        raise UsageError(
            f"direct solve capped at {max_nodes} nodes (got {n}); use the pencil route"
        )
    omega, lam = model.sample(spec, q)
    se = sigma * spec.eps
    alpha = spec.alpha
    s = np.sqrt(q.weights)
    lam_bar = np.conj(lam)

    pairs = pair_order(n)
    dim = 1 + n + len(pairs)
    dtype = complex if np.iscomplexobj(lam) else float
    h = np.zeros((dim, dim), dtype=dtype)

    h[0, 0] = se
    for i in range(n):
        h[1 + i, 1 + i] = -se + omega[i]  # note the sign flip against the vacuum
        h[0, 1 + i] = alpha * s[i] * lam[i]
        h[1 + i, 0] = alpha * s[i] * lam_bar[i]

    sqrt2 = np.sqrt(2.0)
    for p, (i, j) in enumerate(pairs):
        row = 1 + n + p
        h[row, row] = se + omega[i] + omega[j]
        if i == j:
            h[row, 1 + i] = alpha * sqrt2 * s[i] * lam_bar[i]
            h[1 + i, row] = alpha * sqrt2 * s[i] * lam[i]
        else:
            # lambda~(k1) f(k2) + lambda~(k2) f(k1), symmetrized over the pair
            h[row, 1 + j] = alpha * s[i] * lam_bar[i]
            h[1 + j, row] = alpha * s[i] * lam[i]
            h[row, 1 + i] = alpha * s[j] * lam_bar[j]
            h[1 + i, row] = alpha * s[j] * lam[j]

    return BlockOperator(sigma, dim, h, pairs, n)


def schur_complement(block, z):
    """Fold the vacuum and two-photon sectors of the block onto the one-photon one.

    For z below both eliminated diagonals this reproduces the pencil R(z)
    entry by entry (up to roundoff); the agreement is the machine form of the
    inertia argument.
    """
    n = block.n_nodes
    m = block.matrix
    one = slice(1, 1 + n)
    two = slice(1 + n, block.dim)
    vac = float(np.real(m[0, 0]))
    d2 = np.real(np.diag(m)[two])
    if not (z < vac and np.all(z < d2)):
        raise DomainError(f"z={z} must lie below the eliminated diagonal blocks")

    a11 = m[one, one] - z * np.eye(n, dtype=m.dtype)
    b01 = m[0, one]
    b12 = m[one, two]
    s = a11 - np.outer(m[one, 0], b01) / (vac - z)
    s -= b12 @ ((1.0 / (d2 - z))[:, None] * m[two, one])
    return s


def eig_below(block, z, tol=None):
    """Count eigenvalues of the block strictly below z, with the ambiguity band.

    Reported eigenvalues are shifted by z so the CountReport convention
    (count = how many fall below -tol) is the same as for the pencil.
    """
    sigma_eps = float(np.real(block.matrix[0, 0]))  # vacuum entry is sigma*eps
    if not (z < sigma_eps):
        raise DomainError(f"z={z} must lie strictly below sigma*eps={sigma_eps}")
    scale = float(np.max(np.abs(block.matrix)))
    if tol is None:
        tol = 1e-9 * (1.0 + scale)
    shifted = np.linalg.eigvalsh(block.matrix) - z
    count = int(np.sum(shifted < -tol))
    flagged = int(np.sum((shifted > -tol) & (shifted < tol)))
    return CountReport(
        block.sigma, float(z), count, shifted, (-float(tol), float(tol)), flagged,
        method="direct",
    )


@dataclass(frozen=True, eq=False)
class TotalCount:
    plus: CountReport
    minus: CountReport
    bottom_plus: essspec.EssSpecResult
    bottom_minus: essspec.EssSpecResult
    total: int
    flags: tuple


def total_count(spec, q, *, root_tol=1e-12, guard=1e-8, max_nodes=MAX_DIRECT_NODES):
    """Direct-solve bound-state count for both branches at their spectral bottoms.

    The spin-down branch without a root is evaluated just below -eps (offset
    guard * eps); such a count is meaningful as 'eigenvalues below -eps' but
    sits outside the regime of the counting identity at a root, so it is
    flagged as informational.
    """
    flags = []
    reports = {}
    bottoms = {}
    for sigma in model.BRANCHES:
        res = essspec.find_phi_root(spec, q, sigma, root_tol=root_tol)
        bottoms[sigma] = res
        if res.kind == essspec.ROOT:
            z = res.value
        else:
            z = -spec.eps * (1.0 + guard)
            flags.append("count_minus_informational")
        block = assemble_block(spec, q, sigma, max_nodes=max_nodes)
        rep = eig_below(block, z)
        if rep.flagged:
            name = "plus" if sigma == model.PLUS else "minus"
            flags.append(f"flagged_{name}={rep.flagged}")
        reports[sigma] = rep

    return TotalCount(
        plus=reports[model.PLUS],
        minus=reports[model.MINUS],
        bottom_plus=bottoms[model.PLUS],
        bottom_minus=bottoms[model.MINUS],
        total=reports[model.PLUS].count + reports[model.MINUS].count,
        flags=tuple(flags),
    )
