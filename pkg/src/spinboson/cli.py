"""Command line front end: info, sweep, verify, threshold.

All four subcommands read one JSON config file. Unknown keys are rejected by
their dotted path so a typo like "model.alhpa" fails loudly instead of being
silently ignored. The coupling strength is deliberately absent from the model
section: sweeps own the alpha axis, and every other command that needs a
single alpha derives it from the sweep range.

Config schema (every key optional, defaults shown):

    {
      "model": {
        "eps": 1.0,
        "dimension": 1,
        "coupling":   {"family": "sqrt-cutoff", "lambda_cutoff": 1.0, "table": null},
        "dispersion": {"family": "abs-k", "table": null}
      },
      "grid":       {"n": 32, "r_max": 4.0, "rule": "gauss-legendre"},
      "tolerances": {"root_tol": 1e-12, "eig_tol": 1e-9, "guard": 1e-8},
      "sweep":      {"alpha_min": 0.0, "alpha_max": 100.0, "steps": 11,
                     "log_spacing": false},
      "output":     {"format": "csv", "path": null}
    }

Exit codes: 0 on success, 1 when a verification check fails, 2 on config,
model, or I/O errors. Sweeps isolate failures per row (kind "error", counts
-1, a flags entry naming the exception) so one bad alpha cannot take down a
whole run. Float cells in CSV output use repr, which round-trips exactly;
two runs of the same sweep produce bit-identical files.
"""

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import essspec, model, pencil, verify
from .errors import (
    ConfigurationError,
    DomainError,
    ModelError,
    NumericalError,
    UsageError,
)
from .quadrature import GAUSS_LEGENDRE

CSV_HEADER = (
    "alpha,e_plus,e_minus,e_min,kind_minus,count_plus,count_minus,total,"
    "margin_plus,margin_minus,mdet_plus,mdet_minus,slope_ratio,flags"
)


@dataclass(frozen=True)
class GridConfig:
    n: int = 32
    r_max: float = 4.0
    rule: str = GAUSS_LEGENDRE

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigurationError(f"grid.n must be a positive integer, got {self.n!r}")
        if not (math.isfinite(self.r_max) and self.r_max > 0.0):
            raise ConfigurationError(f"grid.r_max must be positive, got {self.r_max!r}")


@dataclass(frozen=True)
class ToleranceConfig:
    root_tol: float = 1e-12
    eig_tol: float = 1e-9
    guard: float = 1e-8

    def __post_init__(self):
        for name in ("root_tol", "eig_tol", "guard"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ConfigurationError(
                    f"tolerances.{name} must be positive and finite, got {value!r}"
                )
        if self.guard > 0.1:
            raise ConfigurationError(
                f"tolerances.guard must be at most 0.1, got {self.guard!r}"
            )


@dataclass(frozen=True)
class SweepConfig:
    alpha_min: float = 0.0
    alpha_max: float = 100.0
    steps: int = 11
    log_spacing: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.alpha_min) and self.alpha_min >= 0.0):
            raise ConfigurationError(
                f"sweep.alpha_min must be nonnegative, got {self.alpha_min!r}"
            )
        if not (math.isfinite(self.alpha_max) and self.alpha_max >= self.alpha_min):
            raise ConfigurationError(
                "sweep.alpha_max must be finite and at least alpha_min, "
                f"got {self.alpha_max!r}"
            )
        if not isinstance(self.steps, int) or self.steps < 1:
            raise ConfigurationError(
                f"sweep.steps must be a positive integer, got {self.steps!r}"
            )
        if self.log_spacing and self.alpha_min <= 0.0:
            raise ConfigurationError("sweep.log_spacing requires alpha_min > 0")


@dataclass(frozen=True)
class OutputConfig:
    format: str = "csv"
    path: str | None = None

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ConfigurationError(
                f"output.format must be 'csv' or 'json', got {self.format!r}"
            )
        if self.path is not None and not self.path:
            raise ConfigurationError("output.path must be a non-empty string or null")


@dataclass(frozen=True)
class RunConfig:
    model: model.ModelSpec
    grid: GridConfig
    tolerances: ToleranceConfig
    sweep: SweepConfig
    output: OutputConfig


_SCHEMA = {
    "model": {
        "eps": None,
        "dimension": None,
        "coupling": {"family": None, "lambda_cutoff": None, "table": None},
        "dispersion": {"family": None, "table": None},
    },
    "grid": {"n": None, "r_max": None, "rule": None},
    "tolerances": {"root_tol": None, "eig_tol": None, "guard": None},
    "sweep": {"alpha_min": None, "alpha_max": None, "steps": None, "log_spacing": None},
    "output": {"format": None, "path": None},
}


def _reject_unknown(doc, schema, prefix=""):
    for key, value in doc.items():
        path = f"{prefix}{key}"
        if key not in schema:
            raise ConfigurationError(f"unknown config key {path!r}")
        if isinstance(schema[key], dict):
            if not isinstance(value, dict):
                raise ConfigurationError(f"config section {path!r} must be a JSON object")
            _reject_unknown(value, schema[key], prefix=path + ".")


def _take(section, key, path, kind, default):
    if key not in section or section[key] is None:
        return default
    value = section[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigurationError(f"config key {path!r} must be a number")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigurationError(f"config key {path!r} must be an integer")
        return value
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigurationError(f"config key {path!r} must be true or false")
        return value
    if kind is str:
        if not isinstance(value, str):
            raise ConfigurationError(f"config key {path!r} must be a string")
        return value
    raise AssertionError(f"unhandled kind {kind!r}")


def _take_table(section, key, path):
    if key not in section or section[key] is None:
        return None
    value = section[key]
    if not isinstance(value, list) or not value:
        raise ConfigurationError(
            f"config key {path!r} must be a non-empty array of numbers"
        )
    out = []
    for i, item in enumerate(value):
        if isinstance(item, bool) or not isinstance(item, (int, float)):
            raise ConfigurationError(f"config key {path!r}[{i}] must be a number")
        out.append(float(item))
    return tuple(out)


def parse_config(text):
    """Parse a JSON config document into a RunConfig.

    Raises ConfigurationError for malformed JSON, unknown keys (reported by
    dotted path), wrong types, and out-of-range values.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigurationError("top-level config must be a JSON object")
    _reject_unknown(doc, _SCHEMA)

    msec = doc.get("model", {})
    csec = msec.get("coupling", {})
    dsec = msec.get("dispersion", {})
    coupling = model.Coupling(
        family=_take(csec, "family", "model.coupling.family", str, model.SQRT_CUTOFF),
        lambda_cutoff=_take(
            csec, "lambda_cutoff", "model.coupling.lambda_cutoff", float, 1.0
        ),
        table=_take_table(csec, "table", "model.coupling.table"),
    )
    dispersion = model.Dispersion(
        family=_take(dsec, "family", "model.dispersion.family", str, model.ABS_K),
        table=_take_table(dsec, "table", "model.dispersion.table"),
    )
    spec = model.ModelSpec(
        eps=_take(msec, "eps", "model.eps", float, 1.0),
        alpha=1.0,  # placeholder; sweeps substitute their own values
        dimension=_take(msec, "dimension", "model.dimension", int, 1),
        dispersion=dispersion,
        coupling=coupling,
    )

    gsec = doc.get("grid", {})
    grid = GridConfig(
        n=_take(gsec, "n", "grid.n", int, 32),
        r_max=_take(gsec, "r_max", "grid.r_max", float, 4.0),
        rule=_take(gsec, "rule", "grid.rule", str, GAUSS_LEGENDRE),
    )
    tsec = doc.get("tolerances", {})
    tolerances = ToleranceConfig(
        root_tol=_take(tsec, "root_tol", "tolerances.root_tol", float, 1e-12),
        eig_tol=_take(tsec, "eig_tol", "tolerances.eig_tol", float, 1e-9),
        guard=_take(tsec, "guard", "tolerances.guard", float, 1e-8),
    )
    ssec = doc.get("sweep", {})
    sweep = SweepConfig(
        alpha_min=_take(ssec, "alpha_min", "sweep.alpha_min", float, 0.0),
        alpha_max=_take(ssec, "alpha_max", "sweep.alpha_max", float, 100.0),
        steps=_take(ssec, "steps", "sweep.steps", int, 11),
        log_spacing=_take(ssec, "log_spacing", "sweep.log_spacing", bool, False),
    )
    osec = doc.get("output", {})
    output = OutputConfig(
        format=_take(osec, "format", "output.format", str, "csv"),
        path=_take(osec, "path", "output.path", str, None),
    )
    return RunConfig(spec, grid, tolerances, sweep, output)


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    e_plus: float
    e_minus: float
    e_min: float
    kind_minus: str
    count_plus: int
    count_minus: int
    total: int
    margin_plus: float
    margin_minus: float
    mdet_plus: float
    mdet_minus: float
    slope_ratio: float
    flags: str


_FIELDS = tuple(f.name for f in dataclasses.fields(SweepRow))
assert ",".join(_FIELDS) == CSV_HEADER


def alpha_grid(sweep):
    if sweep.log_spacing:
        return np.geomspace(sweep.alpha_min, sweep.alpha_max, sweep.steps)
    return np.linspace(sweep.alpha_min, sweep.alpha_max, sweep.steps)


def _compute_row(base, q, alpha, tols):
    spec = base.with_alpha(alpha)
    flags = []
    branch = {}
    for sigma, name in ((model.PLUS, "plus"), (model.MINUS, "minus")):
        res = essspec.find_phi_root(spec, q, sigma, root_tol=tols.root_tol)
        if res.kind == essspec.ROOT:
            z = res.value
        else:
            # no zero below -eps; count at a guarded point just under the bottom
            z = -spec.eps * (1.0 + tols.guard)
            flags.append(f"count_{name}_informational")
        r = pencil.assemble_r(spec, q, sigma, z).r
        band = tols.eig_tol * (1.0 + float(np.max(np.abs(r))))
        rep = pencil.count_negative_eigs(r, tol=band, sigma=sigma, z=z)
        if rep.flagged:
            flags.append(f"flagged_{name}={rep.flagged}")
        branch[name] = (
            res,
            rep,
            pencil.positivity_margin(spec, q, sigma, z),
            pencil.rank_two_matrix(spec, q, sigma, z).det,
        )
    res_p, rep_p, margin_p, det_p = branch["plus"]
    res_m, rep_m, margin_m, det_m = branch["minus"]
    e_min = min(res_p.value, res_m.value)
    norm = model.lambda_norm(spec, q)
    if alpha > 0.0 and norm > 0.0:
        slope = -e_min / (alpha * norm)
    else:
        slope = math.inf
        flags.append("slope_ratio_undefined")
    return SweepRow(
        alpha=float(alpha),
        e_plus=res_p.value,
        e_minus=res_m.value,
        e_min=e_min,
        kind_minus=res_m.kind,
        count_plus=rep_p.count,
        count_minus=rep_m.count,
        total=rep_p.count + rep_m.count,
        margin_plus=margin_p,
        margin_minus=margin_m,
        mdet_plus=det_p,
        mdet_minus=det_m,
        slope_ratio=slope,
        flags=";".join(flags),
    )


def _row_for_alpha(base, q, alpha, tols):
    try:
        return _compute_row(base, q, alpha, tols)
    except Exception as exc:  # one bad alpha must not kill the sweep
        nan = math.nan
        return SweepRow(
            float(alpha), nan, nan, nan, "error", -1, -1, -1,
            nan, nan, nan, nan, nan, f"error:{type(exc).__name__}",
        )


def cmd_sweep(cfg):
    q = model.default_grid(cfg.model, cfg.grid.n, cfg.grid.r_max, cfg.grid.rule)
    model.sample(cfg.model, q)  # fail fast on model errors before the row loop
    return [
        _row_for_alpha(cfg.model, q, float(a), cfg.tolerances)
        for a in alpha_grid(cfg.sweep)
    ]


def _cell(value):
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, int):
        return str(value)
    return value


def rows_to_csv(rows):
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join(_cell(getattr(row, name)) for name in _FIELDS))
    return "\n".join(lines) + "\n"


def rows_to_json(rows):
    return json.dumps([dataclasses.asdict(row) for row in rows], indent=2)


def rows_from_json(text):
    data = json.loads(text)
    if not isinstance(data, list):
        raise UsageError("sweep JSON must be an array of row objects")
    return [SweepRow(**item) for item in data]


def cmd_info(cfg):
    q = model.default_grid(cfg.model, cfg.grid.n, cfg.grid.r_max, cfg.grid.rule)
    diag = model.ir_diagnostics(cfg.model, q)
    return {
        "eps": cfg.model.eps,
        "dimension": cfg.model.dimension,
        "coupling_family": cfg.model.coupling.family,
        "dispersion_family": cfg.model.dispersion.family,
        "grid_n": q.n,
        "grid_r_max": cfg.grid.r_max,
        "grid_rule": cfg.grid.rule,
        "lambda_norm": float(model.lambda_norm(cfg.model, q)),
        "ir_norm": diag.ir_norm,
        "small_alpha_threshold": diag.small_alpha_threshold,
        "ir_singular": diag.ir_singular,
    }


def cmd_threshold(cfg):
    """Geometric alpha scan locating three onset couplings.

    Each reported value is suffix stable: the smallest scanned alpha from
    which the predicate holds at every larger scanned alpha. A predicate that
    fails at the top of the range reports null rather than guessing beyond it.
    """
    q = model.default_grid(cfg.model, cfg.grid.n, cfg.grid.r_max, cfg.grid.rule)
    if model.lambda_norm(cfg.model, q) == 0.0:
        raise ModelError("coupling vanishes on the grid; no thresholds to locate")
    a_lo = max(cfg.sweep.alpha_min, 0.01)
    a_hi = cfg.sweep.alpha_max
    if a_hi <= a_lo:
        raise ConfigurationError(
            f"threshold scan needs sweep.alpha_max > {a_lo}, got {a_hi}"
        )
    # about 25 points per decade keeps onset resolution near 10%
    points = max(2, int(math.ceil(25.0 * math.log10(a_hi / a_lo))) + 1)
    rows = [
        _row_for_alpha(cfg.model, q, float(a), cfg.tolerances)
        for a in np.geomspace(a_lo, a_hi, points)
    ]

    def smallest_stable(pred):
        start = None
        for row in reversed(rows):
            if pred(row):
                start = row.alpha
            else:
                break
        return start

    diag = model.ir_diagnostics(cfg.model, q)
    return {
        "alpha_lo": a_lo,
        "alpha_hi": a_hi,
        "points": points,
        "analytic_root_threshold": diag.small_alpha_threshold,
        "root_minus_from": smallest_stable(lambda r: r.kind_minus == essspec.ROOT),
        "margins_nonnegative_from": smallest_stable(
            lambda r: r.margin_plus >= 0.0 and r.margin_minus >= 0.0
        ),
        "total_at_most_two_from": smallest_stable(lambda r: 0 <= r.total <= 2),
    }


def _payload_text(payload):
    lines = []
    for key, value in payload.items():
        if isinstance(value, float):
            value = repr(value)
        elif value is None:
            value = "not-found"
        lines.append(f"{key} = {value}")
    return "\n".join(lines) + "\n"


def _payload_csv(payload):
    lines = ["quantity,value"]
    for key, value in payload.items():
        if isinstance(value, float):
            value = repr(value)
        elif value is None:
            value = "not-found"
        lines.append(f"{key},{value}")
    return "\n".join(lines) + "\n"


def _render(payload, fmt):
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        return _payload_csv(payload)
    return _payload_text(payload)


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="spinboson",
        description="Bound-state counting for a two-photon spin-boson model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    specs = (
        ("info", "print model and grid diagnostics"),
        ("sweep", "tabulate branch bottoms and counts over a coupling range"),
        ("verify", "run the machine verification suite"),
        ("threshold", "scan for onset couplings"),
    )
    for name, help_text in specs:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, metavar="FILE",
                       help="path to a JSON config file")
        if name in ("info", "sweep", "threshold"):
            p.add_argument("--format", choices=("csv", "json"), default=None,
                           help="output format (default: csv for sweep, text otherwise)")
            p.add_argument("--out", default=None, metavar="PATH",
                           help="write output to PATH instead of stdout")
        if name == "verify":
            p.add_argument("--level", choices=("quick", "full"), default="quick",
                           help="quick spot checks or the full acceptance suite")
    return parser


def _dispatch(args):
    with open(args.config, "r", encoding="utf-8") as fh:
        cfg = parse_config(fh.read())

    if args.command == "info":
        _emit(_render(cmd_info(cfg), args.format), args.out)
        return 0

    if args.command == "sweep":
        rows = cmd_sweep(cfg)
        fmt = args.format or cfg.output.format
        text = rows_to_csv(rows) if fmt == "csv" else rows_to_json(rows) + "\n"
        _emit(text, args.out or cfg.output.path)
        return 0

    if args.command == "threshold":
        _emit(_render(cmd_threshold(cfg), args.format), args.out)
        return 0

    if args.command == "verify":
        if cfg.tolerances.eig_tol > 1e-6:
            print(
                "warning: configured eig_tol is looser than the pinned "
                "verification bands; pass/fail is unaffected"
            )
        results = verify.run_suite(cfg, level=args.level)
        for res in results:
            status = "PASS" if res.passed else "FAIL"
            print(f"{status} {res.name} ({res.seconds:.2f}s): {res.detail}")
        failed = sum(1 for r in results if not r.passed)
        print(f"{len(results) - failed}/{len(results)} checks passed ({args.level})")
        return 1 if failed else 0

    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; keep its code
        return int(exc.code or 0)
    try:
        return _dispatch(args)
    except (ConfigurationError, ModelError, UsageError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical verification failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
