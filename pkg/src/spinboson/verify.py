"""Machine verification of the lemma-level facts behind the bound-state count.

Every check here is a concrete, finite statement: an inequality swept over
random inputs, an identity between two independently computed matrices, or an
integer equality between the pencil count and a direct diagonalization. The
full suite is the acceptance gate; the quick one is the subset cheap enough
to run on every invocation.

Pass/fail tolerances are pinned here on purpose. User-configured tolerances
change what gets reported (flagged bands in sweeps), never what counts as a
pass, so a sloppy config cannot turn a red suite green.
"""

import io
import json
import math
import os
import tempfile
import time
from contextlib import redirect_stderr, redirect_stdout
from dataclasses import dataclass

import numpy as np

from . import essspec, model, oracle, pencil

_SEED = 20250816

# pinned verification tolerances; config tolerances do not reach these
_EIG_TOL_BASE = 1e-9
_GUARD = 1e-8


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _eval_point(spec, q, sigma, root_tol=1e-12):
    """Branch bottom and the pencil evaluation point (guarded for convention)."""
    res = essspec.find_phi_root(spec, q, sigma, root_tol=root_tol)
    if res.kind == essspec.ROOT:
        return res, res.value
    return res, -spec.eps * (1.0 + _GUARD)


def check_elementary_inequality(config):
    """0 <= 1/(a+b+c)-1/(a+c)-1/(b+c)+1/c <= sqrt(ab)/(2c^2) over 1e5 random triples."""
    rng = np.random.default_rng(_SEED)
    n = 100_000
    a = rng.uniform(0.0, 100.0, n)
    b = rng.uniform(0.0, 100.0, n)
    c = 100.0 * (1.0 - rng.random(n))  # in (0, 100]
    middle = 1.0 / (a + b + c) - 1.0 / (a + c) - 1.0 / (b + c) + 1.0 / c
    upper = np.sqrt(a * b) / (2.0 * c * c) - middle
    tol = 1e-12 / c
    lo_margin = float(np.min(middle + tol))
    hi_margin = float(np.min(upper + tol))
    passed = lo_margin >= 0.0 and hi_margin >= 0.0
    return passed, (
        f"{n} triples, worst lower slack {float(np.min(middle)):.3e}, "
        f"worst upper slack {float(np.min(upper)):.3e}"
    )


def check_psi2_bounds(config):
    """0 <= Psi2 <= sqrt(w1 w2)/(2 c^2) at the spectral bottom, within 1e-12."""
    q = _grid(config)
    worst = math.inf
    for alpha in (1.0, 10.0, 100.0):
        spec = config.model.with_alpha(alpha)
        for sigma in model.BRANCHES:
            _, z = _eval_point(spec, q, sigma)
            c = sigma * spec.eps - z
            omega, _ = model.sample(spec, q)
            o1, o2 = omega[:, None], omega[None, :]
            psi2 = 1.0 / (o1 + o2 + c) - (1.0 / (o1 + c) + 1.0 / (o2 + c) - 1.0 / c)
            bound = np.sqrt(o1 * o2) / (2.0 * c * c)
            worst = min(worst, float(np.min(psi2)), float(np.min(bound - psi2)))
    passed = worst >= -1e-12
    return passed, f"worst slack {worst:.3e} over alpha in {{1, 10, 100}}, both branches"


def check_delta_pointwise_bound(config):
    """Delta(r_i; E) >= omega(r_i) - 1e-10 at every node, both branches."""
    q = _grid(config)
    worst = math.inf
    for alpha in (1.0, 10.0, 100.0, 1000.0):
        spec = config.model.with_alpha(alpha)
        for sigma in model.BRANCHES:
            _, z = _eval_point(spec, q, sigma)
            delta = pencil.delta_values(spec, q, sigma, z)
            omega, _ = model.sample(spec, q)
            worst = min(worst, float(np.min(delta - omega)))
    passed = worst >= -1e-10
    return passed, f"worst Delta - omega = {worst:.3e}"


def check_rank_two_structure(config):
    """K1 has rank <= 2, its 2x2 form has det < 0, and -alpha^2 K1 has one negative eigenvalue."""
    q = _grid(config)
    issues = []
    for alpha in (5.0, 50.0, 500.0):
        spec = config.model.with_alpha(alpha)
        for sigma in model.BRANCHES:
            _, z = _eval_point(spec, q, sigma)
            k1 = pencil.assemble_k1(spec, q, sigma, z)
            svals = np.linalg.svd(k1, compute_uv=False)
            if q.n >= 3 and svals[2] > 1e-10 * svals[0]:
                issues.append(f"rank>2 at alpha={alpha} sigma={sigma}")
            m = pencil.rank_two_matrix(spec, q, sigma, z)
            if not (m.det < 0.0):
                issues.append(f"det M = {m.det} not negative at alpha={alpha} sigma={sigma}")
            lo, hi = m.eigenvalues()
            if not (lo < 0.0 < hi):
                issues.append(f"M inertia not (+,-) at alpha={alpha} sigma={sigma}")
            rep = pencil.count_negative_eigs(-spec.alpha**2 * k1, sigma=sigma, z=z)
            if rep.count != 1:
                issues.append(
                    f"count(-a^2 K1) = {rep.count} != 1 at alpha={alpha} sigma={sigma}"
                )
    return not issues, "; ".join(issues) if issues else "18 structure facts checked"


def check_inertia_equivalence(config, node_counts=(4, 8, 16)):
    """Pencil inertia equals the direct eigenvalue count on the full block."""
    alphas = (0.5, 1.0, 2.0, 5.0, 10.0, 50.0)
    issues = []
    cases = 0
    for n in node_counts:
        q = model.default_grid(config.model, n, config.grid.r_max, config.grid.rule)
        for alpha in alphas:
            spec = config.model.with_alpha(alpha)
            for sigma in model.BRANCHES:
                _, z = _eval_point(spec, q, sigma)
                schur = pencil.count_negative_eigs(
                    pencil.assemble_r(spec, q, sigma, z).r, sigma=sigma, z=z
                )
                direct = oracle.eig_below(oracle.assemble_block(spec, q, sigma), z)
                cases += 1
                tag = f"n={n} alpha={alpha} sigma={sigma}"
                if schur.flagged or direct.flagged:
                    issues.append(f"flagged eigenvalue ({tag})")
                elif schur.count != direct.count:
                    issues.append(
                        f"count mismatch {schur.count} != {direct.count} ({tag})"
                    )
    return not issues, "; ".join(issues) if issues else f"{cases} cases, counts identical"


def check_schur_reproduction(config):
    """The folded block reproduces the pencil entrywise at random z."""
    q = model.default_grid(config.model, 8, config.grid.r_max, config.grid.rule)
    rng = np.random.default_rng(_SEED + 6)
    spec = config.model.with_alpha(1.3)
    blocks = {s: oracle.assemble_block(spec, q, s) for s in model.BRANCHES}
    worst = 0.0
    for k in range(20):
        sigma = model.BRANCHES[k % 2]
        z = sigma * spec.eps - 10.0 ** rng.uniform(-2.0, 1.5)
        r = pencil.assemble_r(spec, q, sigma, z).r
        s = oracle.schur_complement(blocks[sigma], z)
        rel = float(np.max(np.abs(s - r))) / (1.0 + float(np.max(np.abs(r))))
        worst = max(worst, rel)
    passed = worst <= 1e-12
    return passed, f"20 random z, worst entrywise deviation {worst:.3e} (relative)"


def check_strong_coupling_counts(config):
    """At strong coupling each branch holds at most one bound state, stably in n."""
    issues = []
    counts = {}
    for n in (16, 32):
        q = model.default_grid(config.model, n, config.grid.r_max, config.grid.rule)
        for alpha in (50.0, 100.0, 500.0):
            spec = config.model.with_alpha(alpha)
            total = 0
            for sigma in model.BRANCHES:
                _, z = _eval_point(spec, q, sigma)
                rep = pencil.count_negative_eigs(
                    pencil.assemble_r(spec, q, sigma, z).r, sigma=sigma, z=z
                )
                if rep.flagged:
                    issues.append(f"flagged at n={n} alpha={alpha} sigma={sigma}")
                if rep.count > 1:
                    issues.append(
                        f"count {rep.count} > 1 at n={n} alpha={alpha} sigma={sigma}"
                    )
                counts[(n, alpha, sigma)] = rep.count
                total += rep.count
            if total > 2:
                issues.append(f"total {total} > 2 at n={n} alpha={alpha}")
    for alpha in (50.0, 100.0, 500.0):
        for sigma in model.BRANCHES:
            if counts[(16, alpha, sigma)] != counts[(32, alpha, sigma)]:
                issues.append(
                    f"count changed between n=16 and n=32 at alpha={alpha} sigma={sigma}"
                )
    observed = sorted(set(counts.values()))
    return not issues, (
        "; ".join(issues) if issues else f"per-branch counts observed: {observed}"
    )


def check_asymptotics(config):
    """E/alpha -> -||lambda|| and alpha^2/(2(sigma*eps-E)^2) -> 1/(2||lambda||^2)."""
    q = _grid(config)
    norm = model.lambda_norm(config.model, q)
    rows = essspec.asymptotic_report(config.model, q, [1000.0])
    worst_slope = 0.0
    worst_ratio = 0.0
    for row in rows:
        worst_slope = max(worst_slope, abs(row.energy_over_alpha + norm) / norm)
        worst_ratio = max(worst_ratio, abs(row.strength_ratio * 2.0 * norm * norm - 1.0))
    passed = worst_slope <= 0.02 and worst_ratio <= 0.05
    return passed, (
        f"at alpha=1000: |E/alpha + norm|/norm = {worst_slope:.3e}, "
        f"|ratio*2norm^2 - 1| = {worst_ratio:.3e}"
    )


def check_positivity_lemma(config):
    """diag(Delta) - alpha^2 K2 stays positive semidefinite at strong coupling."""
    q = _grid(config)
    worst = math.inf
    for alpha in (100.0, 500.0):
        spec = config.model.with_alpha(alpha)
        for sigma in model.BRANCHES:
            _, z = _eval_point(spec, q, sigma)
            margin = pencil.positivity_margin(spec, q, sigma, z)
            worst = min(worst, margin / alpha)
    passed = worst >= -1e-8
    return passed, f"worst margin/alpha = {worst:.3e}"


def check_pencil_monotonicity(config):
    """<R(z) phi, phi> decreases at least as fast as -||phi||^2; eigenvalues follow."""
    q = _grid(config)
    rng = np.random.default_rng(_SEED + 10)
    issues = []
    for sigma in model.BRANCHES:
        spec = config.model.with_alpha(1.0)
        se = sigma * spec.eps
        zs = se - 10.0 ** rng.uniform(-0.5, 0.8, 5)
        probes = rng.standard_normal((10, q.n))
        for z in zs:
            for probe in probes:
                slope = pencil.pencil_slope_check(spec, q, sigma, float(z), probe)
                norm_sq = float(np.dot(probe, probe))
                if slope > -norm_sq * (1.0 - 1e-6):
                    issues.append(
                        f"slope {slope} vs -|phi|^2 {-norm_sq} at sigma={sigma} z={z}"
                    )
        z1, z2 = sorted((float(zs[0]), float(zs[1])))
        e1 = np.linalg.eigvalsh(pencil.assemble_r(spec, q, sigma, z1).r)
        e2 = np.linalg.eigvalsh(pencil.assemble_r(spec, q, sigma, z2).r)
        scale = 1.0 + float(np.max(np.abs(e1)))
        if np.any(e2 > e1 + 1e-10 * scale):
            issues.append(f"eigenvalue ordering broken between z={z1} and z={z2}")
    return not issues, "; ".join(issues) if issues else "100 slopes + 2 orderings checked"


def check_branch_logic(config):
    """The spin-down branch switches from convention to root at the stated threshold."""
    q = _grid(config)
    diag = model.ir_diagnostics(config.model, q)
    th = diag.small_alpha_threshold
    if not math.isfinite(th):
        return False, f"threshold not finite: {th}"
    low = essspec.find_phi_root(config.model.with_alpha(0.99 * th), q, model.MINUS)
    high = essspec.find_phi_root(config.model.with_alpha(1.01 * th), q, model.MINUS)
    passed = low.kind == essspec.CONVENTION and high.kind == essspec.ROOT
    return passed, (
        f"threshold {th:.6g}: kind(0.99t)={low.kind}, kind(1.01t)={high.kind}"
    )


def check_determinism_io(config):
    """Sweeps are bit-identical, JSON round-trips, and exit codes follow the contract."""
    from . import cli  # local import; cli imports this module at top level

    doc = json.dumps(
        {"grid": {"n": 8}, "sweep": {"alpha_min": 0.0, "alpha_max": 10.0, "steps": 4}}
    )
    cfg = cli.parse_config(doc)
    rows1 = cli.cmd_sweep(cfg)
    rows2 = cli.cmd_sweep(cfg)
    issues = []
    if cli.rows_to_csv(rows1) != cli.rows_to_csv(rows2):
        issues.append("sweep CSV not bit-identical across runs")
    if cli.rows_from_json(cli.rows_to_json(rows1)) != rows1:
        issues.append("JSON round-trip changed the rows")

    trio = [
        ("{}", 0),
        ("{not json", 2),
        (json.dumps({"model": {"eps": -1.0}}), 2),
    ]
    for text, expected in trio:
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
            fh.write(text)
            path = fh.name
        try:
            sink = io.StringIO()
            with redirect_stdout(sink), redirect_stderr(sink):
                code = cli.main(["info", "--config", path])
            if code != expected:
                issues.append(f"exit code {code} != {expected} for config {text[:20]!r}")
        finally:
            os.unlink(path)
    return not issues, "; ".join(issues) if issues else "2 sweep runs, round-trip, 3 canned configs"


def check_toy_closed_forms(config):
    """One-node model where every quantity has a closed form."""
    from .quadrature import build_radial_grid

    q = build_radial_grid(1, 1, 2.0)  # single node r=1, weight 4
    spec = model.ModelSpec(
        eps=1.0, alpha=1.0, coupling=model.Coupling(family=model.TABLE, table=(1.0,))
    )
    issues = []

    def close(got, want, what, tol=1e-12):
        if abs(got - want) > tol * max(1.0, abs(want)):
            issues.append(f"{what}: {got} != {want}")

    close(essspec.eval_phi(spec, q, +1, 0.0), -3.0, "Phi(0)")
    close(essspec.eval_phi(spec, q, +1, -2.0), 0.0, "Phi(-2)")
    root = essspec.find_phi_root(spec, q, +1)
    close(root.value, -2.0, "root", tol=1e-10)
    close(essspec.phi_derivative(spec, q, +1, -2.0), -1.25, "Phi'(-2)")
    close(float(pencil.delta_values(spec, q, +1, -2.0)[0]), 1.2, "Delta(-2)")
    close(float(pencil.assemble_k1(spec, q, +1, -2.0)[0, 0]), 2.0, "K1(-2)")
    close(pencil.kernel_psi1(+1, 0.0, 1.0, 0.0, eps=2.0), 1.0 / 3.0, "Psi1(1,0;c=2)")
    close(pencil.kernel_psi2(+1, 0.0, 1.0, 1.0, eps=1.0), 1.0 / 3.0, "Psi2(1,1;c=1)")
    m = pencil.rank_two_matrix(spec, q, +1, -2.0)
    close(m.det, 0.0, "one-node det M", tol=1e-14)
    r = pencil.assemble_r(spec, q, +1, -2.0).r
    close(float(r[0, 0]), -14.0 / 15.0, "R(-2)")
    rep = pencil.count_negative_eigs(r, sigma=+1, z=-2.0)
    if rep.count != 1:
        issues.append(f"pencil count {rep.count} != 1")
    direct = oracle.eig_below(oracle.assemble_block(spec, q, +1), -2.0)
    if direct.count != 1:
        issues.append(f"direct count {direct.count} != 1")
    return not issues, "; ".join(issues) if issues else "11 closed forms reproduced"


def check_inertia_small(config):
    return check_inertia_equivalence(config, node_counts=(2, 4))


_FULL = (
    ("elementary-inequality", check_elementary_inequality),
    ("psi2-bounds", check_psi2_bounds),
    ("delta-pointwise-bound", check_delta_pointwise_bound),
    ("rank-two-structure", check_rank_two_structure),
    ("inertia-equivalence", check_inertia_equivalence),
    ("schur-reproduction", check_schur_reproduction),
    ("strong-coupling-counts", check_strong_coupling_counts),
    ("asymptotics", check_asymptotics),
    ("positivity-lemma", check_positivity_lemma),
    ("pencil-monotonicity", check_pencil_monotonicity),
    ("branch-logic", check_branch_logic),
    ("determinism-io", check_determinism_io),
)

_QUICK = (
    ("elementary-inequality", check_elementary_inequality),
    ("psi2-bounds", check_psi2_bounds),
    ("toy-closed-forms", check_toy_closed_forms),
    ("inertia-equivalence-small", check_inertia_small),
)

FULL_NAMES = tuple(name for name, _ in _FULL)
QUICK_NAMES = tuple(name for name, _ in _QUICK)


def _grid(config):
    return model.default_grid(
        config.model, config.grid.n, config.grid.r_max, config.grid.rule
    )


def run_named(config, name):
    """Run a single check by name (full registry first, then quick extras)."""
    table = dict(_FULL)
    table.update(dict(_QUICK))
    if name not in table:
        raise KeyError(f"unknown check {name!r}")
    start = time.perf_counter()
    passed, detail = table[name](config)
    return CheckResult(name, passed, detail, time.perf_counter() - start)


def run_suite(config, level="quick"):
    if level not in ("quick", "full"):
        raise ValueError(f"level must be 'quick' or 'full', got {level!r}")
    registry = _FULL if level == "full" else _QUICK
    results = []
    for name, fn in registry:
        start = time.perf_counter()
        passed, detail = fn(config)
        results.append(CheckResult(name, passed, detail, time.perf_counter() - start))
    return results
