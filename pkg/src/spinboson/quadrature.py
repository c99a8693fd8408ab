"""Radial Gauss-Legendre quadrature for rotationally invariant momentum integrals.

For a radial integrand, int_{R^d} f(|k|) dk = s_{d-1} int_0^inf f(r) r^(d-1) dr
with s_{d-1} = 2 pi^(d/2) / Gamma(d/2) the surface area of the unit sphere, so a
one-dimensional panel rule on [0, r_max] with the angular factor folded into the
weights turns every momentum integral into a plain dot product.

Optional interior breakpoints make the rule composite. That keeps spectral
accuracy when the integrand has a kink or a jump at a known radius, which is
exactly the situation for sharply cut off couplings.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import ConfigurationError, UsageError

GAUSS_LEGENDRE = "gauss-legendre"

_RULES = (GAUSS_LEGENDRE,)


def sphere_area(d):
    """Surface area of the unit sphere S^(d-1) in R^d (s_0 = 2, s_1 = 2 pi, s_2 = 4 pi)."""
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


@dataclass(frozen=True, eq=False)
class Quadrature:
    """Radial rule with the angular factor already folded into the weights.

    Nodes are strictly increasing and interior to (0, r_max); weights are
    strictly positive. ``integrate`` with values f(r_i) therefore approximates
    the full d-dimensional integral of the radial function f.
    """

    dimension: int
    nodes: np.ndarray
    weights: np.ndarray
    r_max: float
    rule_id: str
    breakpoints: tuple = ()

    @property
    def n(self):
        return int(self.nodes.size)


def _panel_counts(n, edges):
    """Split n nodes over the panels, proportional to panel length.

    Deterministic largest-remainder allocation; every panel keeps at least
    one node.
    """
    lengths = np.diff(edges)
    if n < lengths.size:
        raise ConfigurationError(
            f"n={n} is too small for {lengths.size} quadrature panels"
        )
    raw = n * lengths / float(lengths.sum())
    counts = np.maximum(1, np.floor(raw).astype(int))
    while counts.sum() > n:
        counts[int(np.argmax(counts))] -= 1
    frac = raw - np.floor(raw)
    order = np.argsort(-frac, kind="stable")
    k = 0
    while counts.sum() < n:
        counts[order[k % order.size]] += 1
        k += 1
    return [int(c) for c in counts]


def build_radial_grid(d, n, r_max, rule_id=GAUSS_LEGENDRE, *, breakpoints=()):
    """Build an n-node radial rule on [0, r_max] for R^d.

    Parameters
    ----------
    d : int
        Space dimension, d >= 1.
    n : int
        Total number of nodes across all panels.
    r_max : float
        Truncation radius of the momentum integral.
    rule_id : str
        Base one-dimensional rule; only "gauss-legendre" is supported.
    breakpoints : sequence of float, optional
        Interior panel boundaries (strictly inside (0, r_max)). Nodes never
        land on a breakpoint, so a jump located there never sits inside a
        panel.

    Returns
    -------
    Quadrature
        Weights are (panel Gauss-Legendre weight) * s_{d-1} * r_i^(d-1).
    """
    if not isinstance(d, int) or d < 1:
        raise ConfigurationError(f"dimension must be a positive integer, got {d!r}")
    if not isinstance(n, int) or n < 1:
        raise ConfigurationError(f"node count must be a positive integer, got {n!r}")
    if not (r_max > 0.0) or not math.isfinite(r_max):
        raise ConfigurationError(f"r_max must be positive and finite, got {r_max!r}")
    if rule_id not in _RULES:
        raise ConfigurationError(f"unknown quadrature rule {rule_id!r}")

    bps = tuple(sorted(float(b) for b in breakpoints))
    for b in bps:
        if not (0.0 < b < r_max):
            raise ConfigurationError(
                f"breakpoint {b} must lie strictly inside (0, {r_max})"
            )
    if len(set(bps)) != len(bps):
        raise ConfigurationError(f"breakpoints must be distinct, got {bps}")

    edges = np.array([0.0, *bps, float(r_max)])
    counts = _panel_counts(n, edges)

    nodes = []
    base = []
    for (a, b), m in zip(zip(edges[:-1], edges[1:]), counts):
        x, w = leggauss(m)
        half = 0.5 * (b - a)
        nodes.append(half * (x + 1.0) + a)
        base.append(half * w)
    nodes = np.concatenate(nodes)
    base = np.concatenate(base)

    weights = base * sphere_area(d) * nodes ** (d - 1)
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return Quadrature(d, nodes, weights, float(r_max), rule_id, bps)


def integrate(q, values):
    """Weighted sum approximating int_{R^d} f(|k|) dk for nodal values f(r_i)."""
    vals = np.asarray(values, dtype=float)
    if vals.shape != q.nodes.shape:
        raise UsageError(
            f"values have shape {vals.shape}, grid has {q.nodes.shape}"
        )
    return float(np.dot(q.weights, vals))


def refine(q, factor=2):
    """Rebuild the same rule (panels included) with ``factor`` times the nodes."""
    if not isinstance(factor, int) or factor < 1:
        raise UsageError(f"refinement factor must be a positive integer, got {factor!r}")
    return build_radial_grid(
        q.dimension, factor * q.n, q.r_max, q.rule_id, breakpoints=q.breakpoints
    )
