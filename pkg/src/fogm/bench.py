"""Experiment registry and batch runner.

Six built-in experiments sweep the methods over the corpus functions: step-size
and order grids on the quadratic, the regularizer grid, switching-method runs
across five orders of magnitude of step size, and the order-estimation sweep on
the non-Lipschitz convex function.  Each configuration produces a trace CSV and
a report JSON; a summary CSV and a rendered figure compare the batch.

All outputs are deterministic: identical invocations write byte-identical CSV
and JSON files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import classify, theoretical_bound
from .errors import DomainError, FogmError
from .objective import parse_objective
from .optimizers import (
    IterationRecord,
    Method,
    OptimizerConfig,
    Phase,
    Termination,
    Trace,
    run,
)

__all__ = [
    "ConfigEntry",
    "ExperimentSpec",
    "SummaryRow",
    "registry",
    "get_experiment",
    "run_experiment",
    "write_trace_csv",
    "read_trace_csv",
    "write_report_json",
    "run_single",
]

TRACE_HEADER = ["k", "t", "f", "grad", "delta_k", "effective_step", "phase"]
SUMMARY_HEADER = ["config_id", "classification", "final_error", "amplitude", "crossings", "bound"]

_DEFAULT_OUTPUTS = ("trace_csv", "report_json", "summary_table")


@dataclass(frozen=True)
class ConfigEntry:
    """One labelled configuration inside an experiment.

    ``objective_id`` overrides the experiment-level objective when set (used by
    the varied-extremum experiment), and ``note`` is carried into the report.
    """

    label: str
    config: OptimizerConfig
    objective_id: str | None = None
    note: str | None = None


@dataclass(frozen=True)
class ExperimentSpec:
    id: str
    objective_id: str
    entries: tuple[ConfigEntry, ...]
    outputs: tuple[str, ...] = _DEFAULT_OUTPUTS
    description: str = ""


@dataclass
class SummaryRow:
    config_id: str
    classification: str
    final_error: float | None
    amplitude: float | None
    crossings: int | None
    bound: float | None
    error: str | None = None


def _fogm(alpha, rho, t1, t2, **kw) -> OptimizerConfig:
    return OptimizerConfig(method=Method.FOGM, alpha=alpha, rho=rho, t1=t1, t2=t2, **kw)


def _modified(alpha, rho, delta, t1, t2, **kw) -> OptimizerConfig:
    return OptimizerConfig(
        method=Method.MODIFIED_FOGM, alpha=alpha, rho=rho, delta=delta, t1=t1, t2=t2, **kw
    )


def _switching(a_pre, a_post, rho, t1, t2, **kw) -> OptimizerConfig:
    return OptimizerConfig(
        method=Method.SWITCHING_FOGM, alpha=a_pre, alpha_post=a_post, rho=rho, t1=t1, t2=t2, **kw
    )


def registry() -> list[ExperimentSpec]:
    """The built-in experiments ex1..ex6."""
    specs: list[ExperimentSpec] = []

    gm_note = (
        "order 1.0 reduces to the plain gradient method; reference values follow "
        "the analytic linear recursion"
    )
    specs.append(
        ExperimentSpec(
            id="ex1",
            objective_id="quadratic:c=3",
            entries=tuple(
                ConfigEntry(
                    label=f"alpha={a:g}",
                    config=_fogm(a, 0.01, -1.0, 0.0),
                    note=gm_note if a == 1.0 else None,
                )
                for a in (1.0, 1.2, 1.4, 1.6, 1.8)
            ),
            description="order sweep at fixed small step size",
        )
    )

    ex2_entries = [
        ConfigEntry(f"fogm_rho={r:g}", _fogm(1.5, r, -1.0, 0.0))
        for r in (0.01, 0.1, 1.0, 10.0)
    ]
    ex2_entries.append(ConfigEntry("gm_rho=10", OptimizerConfig(method=Method.GM, rho=10.0, t1=-1.0)))
    specs.append(
        ExperimentSpec(
            id="ex2",
            objective_id="quadratic:c=3",
            entries=tuple(ex2_entries),
            description="step-size robustness of the fractional method vs plain descent",
        )
    )

    specs.append(
        ExperimentSpec(
            id="ex3",
            objective_id="quadratic:c=3",
            entries=tuple(
                ConfigEntry(f"delta={d:g}", _modified(1.5, 0.1, d, -1.0, 0.0))
                for d in (0.0, 0.004, 0.04, 0.4)
            ),
            description="regularizer sweep around the recommended value",
        )
    )

    ex4_entries: list[ConfigEntry] = []
    for c in (3, 100):
        oid = f"quadratic:c={c}"
        delta13 = (0.01 * 2.0) ** (1.0 / (1.3 - 1.0))
        ex4_entries += [
            ConfigEntry(f"fogm_alpha=0.7_c={c}", _fogm(0.7, 0.01, 0.0, 1.0), objective_id=oid),
            ConfigEntry(
                f"modified_alpha=1.3_c={c}",
                _modified(1.3, 0.01, delta13, 0.0, 1.0),
                objective_id=oid,
            ),
            ConfigEntry(f"switching_c={c}", _switching(0.7, 1.3, 0.01, 0.0, 1.0), objective_id=oid),
        ]
    specs.append(
        ExperimentSpec(
            id="ex4",
            objective_id="quadratic:c=3",
            entries=tuple(ex4_entries),
            description="rate comparison of sub-unit, super-unit, and switching orders",
        )
    )

    ex5_entries: list[ConfigEntry] = []
    for r in (0.01, 0.1, 1.0, 10.0, 100.0):
        ex5_entries.append(
            ConfigEntry(f"gm_rho={r:g}", OptimizerConfig(method=Method.GM, rho=r, t1=0.0))
        )
        ex5_entries.append(ConfigEntry(f"switching_rho={r:g}", _switching(0.7, 1.3, r, 0.0, 1.0)))
    specs.append(
        ExperimentSpec(
            id="ex5",
            objective_id="quadratic:c=100",
            entries=tuple(ex5_entries),
            description="global convergence of the switching method across step sizes",
        )
    )

    specs.append(
        ExperimentSpec(
            id="ex6",
            objective_id="pow43:c=100",
            entries=tuple(
                ConfigEntry(f"alpha={a:g}", _fogm(a, 2.0, -1.0, 0.0))
                for a in (0.332, 0.334, 0.4, 0.7, 1.0, 1.3)
            ),
            description="order sweep on a convex function without a Lipschitz gradient",
        )
    )
    return specs


def get_experiment(experiment_id: str) -> ExperimentSpec:
    for spec in registry():
        if spec.id == experiment_id:
            return spec
    known = ", ".join(s.id for s in registry())
    raise DomainError(f"unknown experiment {experiment_id!r} (known: {known})")


def _fmt(value) -> str:
    """Full-precision cell: repr round-trips floats exactly."""
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_trace_csv(trace: Trace, path: Path | str) -> None:
    """Write a trace with full-precision cells; vector columns get _i suffixes."""
    path = Path(path)
    dim = trace.dimension
    if dim is None:
        header = TRACE_HEADER
    else:
        header = ["k"]
        for name in ("t", "grad", "delta_k", "effective_step"):
            header += [f"{name}_{i}" for i in range(dim)]
        header.insert(1 + dim, "f")  # after the t block, mirroring the scalar order
        header.append("phase")
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for r in trace.records:
            if dim is None:
                row = [r.k, _fmt(r.t), _fmt(r.f_value), _fmt(r.grad), _fmt(r.delta_k),
                       _fmt(r.effective_step), r.phase.value]
            else:
                row = [r.k]
                row += [_fmt(float(v)) for v in r.t]
                row.append(_fmt(r.f_value))
                for vec in (r.grad, r.delta_k, r.effective_step):
                    row += [_fmt(float(v)) for v in vec]
                row.append(r.phase.value)
            writer.writerow(row)


def read_trace_csv(path: Path | str, termination: Termination | None = None) -> Trace:
    """Rebuild a trace from :func:`write_trace_csv` output.

    The CSV intentionally carries no termination reason (that lives in the
    report JSON); pass it in or accept the MAX_ITER_REACHED placeholder.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        records: list[IterationRecord] = []
        if header == TRACE_HEADER:
            for row in reader:
                records.append(
                    IterationRecord(
                        k=int(row[0]),
                        t=float(row[1]),
                        f_value=float(row[2]),
                        grad=float(row[3]),
                        delta_k=float(row[4]),
                        effective_step=float(row[5]),
                        phase=Phase(row[6]),
                    )
                )
        else:
            dim = sum(1 for name in header if name.startswith("t_"))
            if dim < 1:
                raise DomainError(f"unrecognized trace header in {path}")
            for row in reader:
                pos = 1

                def block(width: int):
                    nonlocal pos
                    arr = np.array([float(v) for v in row[pos:pos + width]])
                    arr.flags.writeable = False
                    pos += width
                    return arr

                t = block(dim)
                f_value = float(row[pos]); pos += 1
                grad = block(dim)
                delta_k = block(dim)
                eff = block(dim)
                records.append(
                    IterationRecord(
                        k=int(row[0]), t=t, f_value=f_value, grad=grad,
                        delta_k=delta_k, effective_step=eff, phase=Phase(row[pos]),
                    )
                )
    return Trace(records, termination or Termination.MAX_ITER_REACHED)


def _config_echo(cfg: OptimizerConfig) -> dict:
    return {
        "method": cfg.method.value,
        "alpha": cfg.alpha,
        "alpha_post": cfg.alpha_post,
        "rho": cfg.rho,
        "delta": cfg.delta,
        "t1": cfg.t1 if np.size(cfg.t1) == 1 else list(np.asarray(cfg.t1, float)),
        "t2": None if cfg.t2 is None else (
            cfg.t2 if np.size(cfg.t2) == 1 else list(np.asarray(cfg.t2, float))
        ),
        "max_iter": cfg.max_iter,
        "tol_abs": cfg.tol_abs,
        "stationary_window": cfg.stationary_window,
    }


def write_report_json(
    path: Path | str,
    cfg: OptimizerConfig,
    trace: Trace | None,
    report=None,
    objective_id: str | None = None,
    note: str | None = None,
    error: str | None = None,
) -> None:
    payload: dict = {"objective": objective_id, "config": _config_echo(cfg)}
    if trace is not None:
        payload["termination"] = trace.termination.value
        payload["steps"] = len(trace.records)
    if report is not None:
        payload["report"] = report.as_dict()
    if note:
        payload["note"] = note
    if error is not None:
        payload["error"] = error
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def _effective_order(cfg: OptimizerConfig) -> float:
    if cfg.method is Method.GM:
        return 1.0
    if cfg.method is Method.SWITCHING_FOGM:
        return cfg.alpha_post
    return cfg.alpha


def _bound_for(obj, cfg: OptimizerConfig) -> float | None:
    mu, p = obj.lipschitz_mu, obj.lipschitz_order
    if mu is None or p is None:
        return None
    alpha = _effective_order(cfg)
    if alpha <= p:
        return None
    return theoretical_bound(cfg.rho, mu, alpha, p)


def run_single(objective_id: str, cfg: OptimizerConfig, window: int = 200):
    """Run one configuration and classify it.  Returns (trace, report)."""
    obj = parse_objective(objective_id)
    trace = run(obj, cfg)
    bound = _bound_for(obj, cfg)
    report = classify(trace, obj.extremum, window=window, theoretical_bound=bound)
    return trace, report


def run_experiment(
    spec: ExperimentSpec,
    out_dir: Path | str,
    plot: bool = True,
    window: int = 200,
) -> list[SummaryRow]:
    """Execute every configuration of an experiment, writing one trace CSV and
    one report JSON per configuration plus a comparison summary CSV.

    A configuration that fails (singular step, missing metadata) is recorded in
    the summary and its report JSON without aborting the rest of the batch.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for entry in spec.entries:
        entry.config.validate()
        parse_objective(entry.objective_id or spec.objective_id)

    rows: list[SummaryRow] = []
    curves = []
    for entry in spec.entries:
        oid = entry.objective_id or spec.objective_id
        trace_path = out_dir / f"{spec.id}_{entry.label}.trace.csv"
        report_path = out_dir / f"{spec.id}_{entry.label}.report.json"
        try:
            obj = parse_objective(oid)
            trace = run(obj, entry.config)
            bound = _bound_for(obj, entry.config)
            report = classify(trace, obj.extremum, window=window, theoretical_bound=bound)
        except FogmError as exc:
            rows.append(SummaryRow(entry.label, "error", None, None, None, None, str(exc)))
            if "report_json" in spec.outputs:
                write_report_json(
                    report_path, entry.config, None,
                    objective_id=oid, note=entry.note, error=str(exc),
                )
            continue
        if "trace_csv" in spec.outputs:
            write_trace_csv(trace, trace_path)
        if "report_json" in spec.outputs:
            write_report_json(
                report_path, entry.config, trace, report,
                objective_id=oid, note=entry.note,
            )
        rows.append(
            SummaryRow(
                config_id=entry.label,
                classification=report.classification.value,
                final_error=report.final_error,
                amplitude=report.oscillation_amplitude,
                crossings=report.crossing_count,
                bound=report.theoretical_bound,
            )
        )
        curves.append((entry.label, trace, obj.extremum))

    if "summary_table" in spec.outputs:
        with (out_dir / f"{spec.id}_summary.csv").open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(SUMMARY_HEADER)
            for row in rows:
                writer.writerow([
                    row.config_id,
                    row.classification,
                    _fmt(row.final_error),
                    _fmt(row.amplitude),
                    _fmt(row.crossings),
                    _fmt(row.bound),
                ])

    if plot and curves:
        from .plotting import render_error_curves  # deferred: matplotlib is heavy

        render_error_curves(spec.id, curves, out_dir / f"{spec.id}.png")
    return rows
