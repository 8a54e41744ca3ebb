"""Command-line interface.

Subcommands:
  bench           run a built-in experiment (or all of them) into a directory
  run             run one user-defined configuration
  bound           print the oscillation-region radius (rho*mu)^(1/(alpha-p))
  delta           print the regularizer recommendation (rho*mu)^(1/(alpha-1))
  estimate-order  bisect for the strong-convexity order of an objective

Exit codes: 0 success, 1 validation/usage error, 2 runtime error.  Numeric
results print with 12 significant digits.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import (
    estimate_convexity_order,
    recommend_delta,
    theoretical_bound,
)
from .bench import get_experiment, registry, run_experiment, run_single, write_report_json, write_trace_csv
from .errors import BracketingFailed, DomainError, FogmError, MissingMetadata, NonEmptyRequired
from .objective import parse_objective
from .optimizers import Method, OptimizerConfig

_VALIDATION_ERRORS = (DomainError, NonEmptyRequired, MissingMetadata, BracketingFailed)

_METHODS = {
    "gm": Method.GM,
    "fogm": Method.FOGM,
    "modified": Method.MODIFIED_FOGM,
    "switching": Method.SWITCHING_FOGM,
}


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; the contract here is exit 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _num(x: float) -> str:
    return f"{x:.12g}"


def build_parser() -> _Parser:
    parser = _Parser(prog="fogm", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_bench = sub.add_parser("bench", help="run built-in experiments")
    p_bench.add_argument("experiment", help="experiment id (ex1..ex6) or 'all'")
    p_bench.add_argument("--out", required=True, help="output directory")
    p_bench.add_argument("--no-plot", action="store_true", help="skip figure rendering")

    p_run = sub.add_parser("run", help="run one configuration")
    p_run.add_argument("--config", default=None,
                       help="config file (JSON object or key=value lines); flags override")
    p_run.add_argument("--objective", default=None, help='corpus id, e.g. "quadratic:c=3"')
    p_run.add_argument("--method", default=None, choices=sorted(_METHODS))
    p_run.add_argument("--alpha", type=float, default=None,
                       help="gradient order (pre-switch order for switching)")
    p_run.add_argument("--alpha2", type=float, default=None,
                       help="post-switch gradient order (switching only)")
    p_run.add_argument("--rho", type=float, default=None, help="step size")
    p_run.add_argument("--delta", type=float, default=None, help="regularizer")
    p_run.add_argument("--t1", type=float, default=None, help="first initial point")
    p_run.add_argument("--t2", type=float, default=None, help="second initial point")
    p_run.add_argument("--max-iter", type=int, default=None)
    p_run.add_argument("--tol-abs", type=float, default=None)
    p_run.add_argument("--window", type=int, default=None, help="stationary-step window")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--no-plot", action="store_true", help="skip figure rendering")

    p_bound = sub.add_parser("bound", help="print the oscillation-region radius")
    p_bound.add_argument("--rho", type=float, required=True)
    p_bound.add_argument("--mu", type=float, required=True)
    p_bound.add_argument("--alpha", type=float, required=True)
    p_bound.add_argument("--p", type=float, default=1.0, help="gradient Lipschitz order")

    p_delta = sub.add_parser("delta", help="print the recommended regularizer")
    p_delta.add_argument("--rho", type=float, required=True)
    p_delta.add_argument("--mu", type=float, required=True)
    p_delta.add_argument("--alpha", type=float, required=True)

    p_est = sub.add_parser("estimate-order", help="estimate the strong-convexity order")
    p_est.add_argument("--objective", required=True)
    p_est.add_argument("--rho", type=float, required=True)
    p_est.add_argument("--lo", type=float, required=True, help="lower bracket order")
    p_est.add_argument("--hi", type=float, required=True, help="upper bracket order")
    p_est.add_argument("--tol", type=float, required=True, help="order tolerance")
    p_est.add_argument("--t1", type=float, default=-1.0)
    p_est.add_argument("--t2", type=float, default=0.0)
    p_est.add_argument("--max-iter", type=int, default=50_000)

    return parser


def _cmd_bench(args) -> int:
    specs = registry() if args.experiment == "all" else [get_experiment(args.experiment)]
    out = Path(args.out)
    for spec in specs:
        rows = run_experiment(spec, out, plot=not args.no_plot)
        for row in rows:
            if row.error is not None:
                print(f"{spec.id}[{row.config_id}]: error: {row.error}")
            else:
                print(
                    f"{spec.id}[{row.config_id}]: {row.classification} "
                    f"final_error={_num(row.final_error)}"
                )
    return 0


_RUN_KEYS = {
    "objective": str,
    "method": str,
    "alpha": float,
    "alpha2": float,
    "rho": float,
    "delta": float,
    "t1": float,
    "t2": float,
    "max_iter": int,
    "tol_abs": float,
    "window": int,
}
_RUN_KEY_ALIASES = {"alpha_post": "alpha2", "stationary_window": "window"}


def load_run_config(path: Path | str) -> dict:
    """Read a run configuration: a JSON object, or one key=value per line.

    Keys mirror the optimizer configuration (method, alpha, alpha2, rho, delta,
    t1, t2, max_iter, tol_abs, window) plus the objective id.
    """
    text = Path(path).read_text()
    raw: dict = {}
    if text.lstrip().startswith("{"):
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"config file {path} is not valid JSON: {exc}") from None
        if not isinstance(raw, dict):
            raise DomainError(f"config file {path} must hold a JSON object")
    else:
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, eq, value = line.partition("=")
            if not eq:
                raise DomainError(f"config file {path}: malformed line {line!r}")
            raw[key.strip()] = value.strip()
    out: dict = {}
    for key, value in raw.items():
        key = _RUN_KEY_ALIASES.get(key, key)
        if key not in _RUN_KEYS:
            raise DomainError(f"config file {path}: unknown key {key!r}")
        if value is None:
            continue
        try:
            out[key] = _RUN_KEYS[key](value)
        except (TypeError, ValueError):
            raise DomainError(
                f"config file {path}: key {key!r} has invalid value {value!r}"
            ) from None
    return out


def _cmd_run(args) -> int:
    settings = load_run_config(args.config) if args.config else {}
    for key in _RUN_KEYS:
        flag = getattr(args, key)
        if flag is not None:
            settings[key] = flag
    for key in ("objective", "method", "rho", "t1"):
        if settings.get(key) is None:
            raise DomainError(f"missing required setting {key!r} (flag or config file)")
    if settings["method"] not in _METHODS:
        raise DomainError(
            f"unknown method {settings['method']!r} (known: {sorted(_METHODS)})"
        )
    cfg = OptimizerConfig(
        method=_METHODS[settings["method"]],
        alpha=settings.get("alpha", 1.0),
        alpha_post=settings.get("alpha2"),
        rho=settings["rho"],
        delta=settings.get("delta", 0.0),
        t1=settings["t1"],
        t2=settings.get("t2"),
        max_iter=settings.get("max_iter", 50_000),
        tol_abs=settings.get("tol_abs", 1e-12),
        stationary_window=settings.get("window", 10),
    )
    cfg.validate()
    objective_id = settings["objective"]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trace, report = run_single(objective_id, cfg)
    write_trace_csv(trace, out / "trace.csv")
    write_report_json(out / "report.json", cfg, trace, report, objective_id=objective_id)
    if not args.no_plot:
        from .plotting import render_error_curves

        obj = parse_objective(objective_id)
        render_error_curves(
            objective_id, [(settings["method"], trace, obj.extremum)], out / "figure.png"
        )
    print(
        f"{report.classification.value} termination={trace.termination.value} "
        f"steps={len(trace.records)} final_error={_num(report.final_error)}"
    )
    return 0


def _cmd_estimate_order(args) -> int:
    obj = parse_objective(args.objective)
    template = OptimizerConfig(
        method=Method.FOGM,
        alpha=0.5,
        rho=args.rho,
        t1=args.t1,
        t2=args.t2,
        max_iter=args.max_iter,
    )
    order = estimate_convexity_order(obj, template, args.lo, args.hi, args.tol)
    print(_num(order))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "bound":
            print(_num(theoretical_bound(args.rho, args.mu, args.alpha, args.p)))
            return 0
        if args.command == "delta":
            print(_num(recommend_delta(args.rho, args.mu, args.alpha)))
            return 0
        if args.command == "estimate-order":
            return _cmd_estimate_order(args)
        raise AssertionError(f"unhandled command {args.command!r}")
    except _VALIDATION_ERRORS as exc:
        print(f"fogm: error: {exc}", file=sys.stderr)
        return 1
    except (FogmError, OSError) as exc:
        print(f"fogm: runtime error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
