import json
import math

import numpy as np
import pytest

from fogm import (
    ConfigEntry,
    ExperimentSpec,
    IterationRecord,
    Method,
    OptimizerConfig,
    Phase,
    Termination,
    Trace,
    get_experiment,
    read_trace_csv,
    registry,
    run,
    run_experiment,
    quadratic,
    write_trace_csv,
)
from fogm.errors import DomainError


class TestRegistry:
    def test_ids_unique_and_complete(self):
        ids = [s.id for s in registry()]
        assert ids == ["ex1", "ex2", "ex3", "ex4", "ex5", "ex6"]

    def test_ex1_alpha_grid(self):
        spec = get_experiment("ex1")
        alphas = sorted(e.config.alpha for e in spec.entries)
        assert alphas == [1.0, 1.2, 1.4, 1.6, 1.8]
        assert all(e.config.rho == 0.01 for e in spec.entries)
        assert all(e.config.t1 == -1.0 and e.config.t2 == 0.0 for e in spec.entries)

    def test_ex3_delta_grid(self):
        spec = get_experiment("ex3")
        deltas = sorted(e.config.delta for e in spec.entries)
        assert deltas == [0.0, 0.004, 0.04, 0.4]
        assert all(e.config.method is Method.MODIFIED_FOGM for e in spec.entries)

    def test_ex6_includes_split_orders(self):
        spec = get_experiment("ex6")
        alphas = {e.config.alpha for e in spec.entries}
        assert {0.332, 0.334} <= alphas
        assert spec.objective_id == "pow43:c=100"
        assert all(e.config.rho == 2.0 for e in spec.entries)

    def test_ex5_step_size_grid(self):
        spec = get_experiment("ex5")
        rhos = sorted({e.config.rho for e in spec.entries})
        assert rhos == [0.01, 0.1, 1.0, 10.0, 100.0]
        methods = {e.config.method for e in spec.entries}
        assert methods == {Method.GM, Method.SWITCHING_FOGM}

    def test_every_config_validates(self):
        for spec in registry():
            for entry in spec.entries:
                entry.config.validate()

    def test_unknown_id(self):
        with pytest.raises(DomainError):
            get_experiment("ex99")


@pytest.fixture(scope="module")
def ex3_out(tmp_path_factory):
    out = tmp_path_factory.mktemp("ex3")
    rows = run_experiment(get_experiment("ex3"), out)
    return out, rows


class TestRunExperiment:
    def test_files_written(self, ex3_out):
        out, _ = ex3_out
        names = sorted(p.name for p in out.iterdir())
        assert "ex3_summary.csv" in names
        assert "ex3.png" in names
        assert sum(n.endswith(".trace.csv") for n in names) == 4
        assert sum(n.endswith(".report.json") for n in names) == 4

    def test_summary_classifications(self, ex3_out):
        _, rows = ex3_out
        by_id = {r.config_id: r for r in rows}
        assert by_id["delta=0.04"].classification == "asymptotic"
        assert by_id["delta=0"].classification == "bounded_oscillation"
        assert by_id["delta=0.004"].classification == "bounded_oscillation"
        assert by_id["delta=0.4"].classification == "asymptotic"

    def test_summary_header(self, ex3_out):
        out, _ = ex3_out
        first = (out / "ex3_summary.csv").read_text().splitlines()[0]
        assert first == "config_id,classification,final_error,amplitude,crossings,bound"

    def test_trace_roundtrip_exact(self, ex3_out):
        out, _ = ex3_out
        spec = get_experiment("ex3")
        entry = spec.entries[0]
        obj_trace = run(quadratic(3), entry.config)
        back = read_trace_csv(out / f"ex3_{entry.label}.trace.csv", obj_trace.termination)
        assert len(back.records) == len(obj_trace.records)
        for a, b in zip(obj_trace.records, back.records):
            assert a.k == b.k and a.phase == b.phase
            for field in ("t", "f_value", "grad", "delta_k", "effective_step"):
                x, y = getattr(a, field), getattr(b, field)
                assert x == y or (math.isnan(x) and math.isnan(y))

    def test_report_json_contents(self, ex3_out):
        out, _ = ex3_out
        payload = json.loads((out / "ex3_delta=0.04.report.json").read_text())
        assert payload["objective"] == "quadratic:c=3"
        assert payload["termination"] == "tolerance_met"
        assert payload["config"]["method"] == "modified_fogm"
        assert payload["report"]["classification"] == "asymptotic"

    def test_deterministic_outputs(self, tmp_path):
        spec = get_experiment("ex3")
        a, b = tmp_path / "a", tmp_path / "b"
        run_experiment(spec, a, plot=False)
        run_experiment(spec, b, plot=False)
        for pa in sorted(a.iterdir()):
            pb = b / pa.name
            assert pb.exists()
            assert pa.read_bytes() == pb.read_bytes()

    def test_plot_flag(self, tmp_path):
        spec = get_experiment("ex3")
        run_experiment(spec, tmp_path, plot=False)
        assert not (tmp_path / "ex3.png").exists()


class TestEx5Classifications:
    def test_plain_descent_diverges_while_switching_converges(self, tmp_path):
        rows = run_experiment(get_experiment("ex5"), tmp_path, plot=False)
        by_id = {r.config_id: r for r in rows}
        assert by_id["gm_rho=10"].classification == "diverged"
        assert by_id["gm_rho=100"].classification == "diverged"
        for rho in ("0.01", "0.1", "1", "10", "100"):
            assert by_id[f"switching_rho={rho}"].classification == "asymptotic"


class TestBatchIsolation:
    def test_failed_config_does_not_abort_batch(self, tmp_path):
        # second entry hits a singular step; siblings still produce outputs
        good = OptimizerConfig(method=Method.GM, rho=0.01, t1=-1.0, max_iter=2000)
        bad = OptimizerConfig(method=Method.FOGM, alpha=1.5, rho=0.1, t1=5.0, t2=5.0,
                              max_iter=100)
        spec = ExperimentSpec(
            id="iso",
            objective_id="quadratic:c=3",
            entries=(
                ConfigEntry("good", good),
                ConfigEntry("bad", bad),
                ConfigEntry("good2", OptimizerConfig(method=Method.GM, rho=10.0,
                                                     t1=-1.0, max_iter=200)),
            ),
        )
        rows = run_experiment(spec, tmp_path, plot=False)
        by_id = {r.config_id: r for r in rows}
        assert by_id["good"].classification == "asymptotic"
        assert by_id["bad"].classification == "error"
        assert by_id["bad"].error
        assert by_id["good2"].classification == "diverged"
        assert (tmp_path / "iso_good.trace.csv").exists()
        assert not (tmp_path / "iso_bad.trace.csv").exists()
        payload = json.loads((tmp_path / "iso_bad.report.json").read_text())
        assert "error" in payload

    def test_empty_spec(self, tmp_path):
        spec = ExperimentSpec(id="empty", objective_id="quadratic:c=3", entries=())
        rows = run_experiment(spec, tmp_path, plot=False)
        assert rows == []
        lines = (tmp_path / "empty_summary.csv").read_text().splitlines()
        assert len(lines) == 1  # header only


class TestTraceCsv:
    def test_nan_and_inf_cells_roundtrip(self, tmp_path):
        records = [
            IterationRecord(1, -1.0, 16.0, -8.0, float("nan"), 0.01, Phase.NOT_APPLICABLE),
            IterationRecord(2, float("inf"), float("inf"), float("-inf"), 3.0,
                            float("nan"), Phase.NOT_APPLICABLE),
        ]
        trace = Trace(records, Termination.DIVERGENCE_DETECTED)
        path = tmp_path / "t.csv"
        write_trace_csv(trace, path)
        back = read_trace_csv(path, Termination.DIVERGENCE_DETECTED)
        assert back.records[0].effective_step == 0.01
        assert math.isnan(back.records[0].delta_k)
        assert back.records[1].t == float("inf")
        assert back.records[1].grad == float("-inf")
        assert math.isnan(back.records[1].effective_step)

    def test_vector_trace_roundtrip(self, tmp_path):
        from fogm import VectorObjective, run_vector

        obj = VectorObjective(
            evaluate=lambda x: float((x[0] - 1.0) ** 2 + (x[1] + 2.0) ** 2),
            gradient=lambda x: np.array([2.0 * (x[0] - 1.0), 2.0 * (x[1] + 2.0)]),
            dimension=2,
        )
        cfg = OptimizerConfig(method=Method.MODIFIED_FOGM, alpha=1.5, rho=0.05,
                              delta=0.01, t1=[0.0, 0.0], t2=[0.1, -0.1], max_iter=50)
        trace = run_vector(obj, cfg)
        path = tmp_path / "v.csv"
        write_trace_csv(trace, path)
        header = path.read_text().splitlines()[0]
        assert header.startswith("k,t_0,t_1,f,grad_0,grad_1")
        back = read_trace_csv(path, trace.termination)
        assert back.dimension == 2
        for a, b in zip(trace.records, back.records):
            assert np.array_equal(a.t, b.t)
            assert np.array_equal(a.grad, b.grad)
            assert np.array_equal(a.delta_k, b.delta_k, equal_nan=True)
            assert np.array_equal(a.effective_step, b.effective_step, equal_nan=True)
