#!/usr/bin/env python3
"""Grid refinement study: are the computed bottoms and counts discretization
artifacts or stable limits?

Doubles the node count at several truncation radii and reports, per coupling
strength, the branch bottoms, the bound-state counts from the pencil, and the
change of E against the previous refinement level. Counts should lock in
almost immediately; the bottoms should converge fast for the built-in smooth
profiles once the sharp cutoff sits on a panel boundary.

The truncation radius column doubles as an unboundedness probe: for a
dispersion growing at infinity, enlarging r_max must leave everything below
the gap untouched, and any drift it causes flags a model whose truncation
matters.

    python3 scripts/refinement_study.py
    python3 scripts/refinement_study.py --alphas 0.5 2 50 --nodes 8 16 32 64 --r-max 4 8
"""

import argparse
import sys

import numpy as np

from spinboson import (
    BRANCHES,
    ROOT,
    assemble_r,
    cli,
    count_negative_eigs,
    default_grid,
    find_phi_root,
)


def branch_row(spec, q, sigma, guard=1e-8):
    res = find_phi_root(spec, q, sigma)
    z = res.value if res.kind == ROOT else -spec.eps * (1.0 + guard)
    rep = count_negative_eigs(assemble_r(spec, q, sigma, z).r, sigma=sigma, z=z)
    return res, rep


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--config", metavar="FILE", default=None)
    parser.add_argument("--alphas", type=float, nargs="+", default=[0.5, 2.0, 50.0])
    parser.add_argument("--nodes", type=int, nargs="+", default=[8, 16, 32, 64, 128])
    parser.add_argument("--r-max", type=float, nargs="+", default=[4.0, 8.0],
                        dest="r_max")
    args = parser.parse_args(argv)

    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = cli.parse_config(fh.read())
    else:
        cfg = cli.parse_config("{}")

    print(f"{'r_max':>6} {'n':>5} {'alpha':>8} "
          f"{'E_plus':>18} {'dE_plus':>10} {'E_minus':>18} {'dE_minus':>10} "
          f"{'n+':>3} {'n-':>3} {'flags':>5}")
    for r_max in args.r_max:
        for alpha in args.alphas:
            spec = cfg.model.with_alpha(alpha)
            prev = {}
            for n in args.nodes:
                q = default_grid(spec, n, r_max, cfg.grid.rule)
                cells = {}
                counts = {}
                flagged = 0
                for sigma in BRANCHES:
                    res, rep = branch_row(spec, q, sigma)
                    cells[sigma] = res.value
                    counts[sigma] = rep.count
                    flagged += rep.flagged
                dplus = abs(cells[1] - prev[1]) if prev else np.nan
                dminus = abs(cells[-1] - prev[-1]) if prev else np.nan
                print(
                    f"{r_max:>6g} {n:>5d} {alpha:>8g} "
                    f"{cells[1]:>18.12f} {dplus:>10.2e} "
                    f"{cells[-1]:>18.12f} {dminus:>10.2e} "
                    f"{counts[1]:>3d} {counts[-1]:>3d} {flagged:>5d}"
                )
                prev = cells
        print()
    return 0


if __name__ == "__main__":
    sys.exit(main())
