#!/usr/bin/env python3
"""Strong-coupling table: branch bottoms against their asymptotic limits.

For growing alpha the two branch bottoms behave like -alpha ||lambda|| with a
dispersion-weighted correction, and the effective strength ratio
alpha^2 / (2 (sigma eps - E)^2) tends to 1 / (2 ||lambda||^2). This script
tabulates both so the approach rate is visible at a glance.

    python3 scripts/asymptotics_table.py
    python3 scripts/asymptotics_table.py --config my_model.json --alphas 5 50 500
"""

import argparse
import sys

from spinboson import asymptotic_report, cli, default_grid, lambda_norm, model


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--config", metavar="FILE", default=None,
                        help="JSON config file (defaults to the built-in model)")
    parser.add_argument("--alphas", type=float, nargs="+",
                        default=[1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0],
                        help="strictly increasing coupling strengths")
    args = parser.parse_args(argv)

    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = cli.parse_config(fh.read())
    else:
        cfg = cli.parse_config("{}")

    q = default_grid(cfg.model, cfg.grid.n, cfg.grid.r_max, cfg.grid.rule)
    norm = lambda_norm(cfg.model, q)
    rows = asymptotic_report(cfg.model, q, args.alphas)

    print(f"# ||lambda|| = {norm:.12g}")
    print(f"# limits: E/alpha -> {-norm:.12g}, ratio -> {1.0 / (2.0 * norm * norm):.12g}")
    header = f"{'sigma':>5} {'alpha':>10} {'E':>18} {'E/alpha':>14} {'ratio':>14} {'rel.dev':>10}"
    print(header)
    for row in rows:
        rel = abs(row.energy_over_alpha + norm) / norm
        print(
            f"{row.sigma:>+5d} {row.alpha:>10g} {row.energy:>18.10f} "
            f"{row.energy_over_alpha:>14.10f} {row.strength_ratio:>14.10f} {rel:>10.2e}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
