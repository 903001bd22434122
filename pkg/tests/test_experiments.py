import io
import json
import math
import subprocess
import sys

import pytest

from rdiff.cli import cli_main, parse_int_list
from rdiff.counting import exact_mean_ratio
from rdiff.experiments import (
    CONVERGENCE_COLUMNS,
    LOCAL_CLT_TARGET,
    THEOREM3_COLUMNS,
    ExperimentConfig,
    RatioEstimate,
    render,
    run_convergence_tables,
    run_local_clt,
    run_theorem3,
)


def run_cli(*argv, stdin=None):
    out = io.StringIO()
    if stdin is not None:
        old = sys.stdin
        sys.stdin = io.StringIO(stdin)
    try:
        code = cli_main(list(argv), stdout=out)
    finally:
        if stdin is not None:
            sys.stdin = old
    return code, out.getvalue()


class TestConfig:
    @pytest.mark.parametrize("kwargs", [
        dict(r=0, n_grid=(5,)),
        dict(r=1, n_grid=()),
        dict(r=1, n_grid=(10, 5)),
        dict(r=1, n_grid=(5, 5)),
        dict(r=1, n_grid=(5,), trials=0),
        dict(r=1, n_grid=(5,), method="mcmc"),
        dict(r=1, n_grid=(5,), m_values=(0,)),
        dict(r=1, n_grid=(5,), format="xml"),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            ExperimentConfig(**kwargs)

    def test_coercion(self):
        cfg = ExperimentConfig(r=1, n_grid=[3, 4], m_values=[2])
        assert cfg.n_grid == (3, 4) and cfg.m_values == (2,)


class TestRatioLimit:
    def test_m1_and_examples(self):
        cfg = ExperimentConfig(r=1, n_grid=(4, 10), m_values=(1, 2), method="exact-enumeration")
        rows = run_theorem3(cfg)
        assert [(e.n, e.m) for e in rows] == [(4, 1), (4, 2), (10, 1), (10, 2)]
        assert all(e.estimate == 1.0 for e in rows if e.m == 1)
        assert rows[1].estimate == 0.5
        assert all(0 <= e.estimate <= 1 and e.target == e.m ** -1.0 for e in rows)

    def test_enumeration_equals_exact(self):
        cfg = ExperimentConfig(r=2, n_grid=(12, 20), method="exact-enumeration")
        for e in run_theorem3(cfg):
            assert e.estimate == float(exact_mean_ratio(e.n, 2, e.m))
            assert e.target == e.m ** -0.5

    @pytest.mark.parametrize("r", [1, 2])
    def test_methods_agree(self, r):
        grid = (12, 20)
        exact = {(e.n, e.m): e.estimate for e in
                 run_theorem3(ExperimentConfig(r=r, n_grid=grid, method="exact-enumeration"))}
        for method in ("exact-sampler", "rejection-sampler"):
            cfg = ExperimentConfig(r=r, n_grid=grid, method=method, trials=4000, seed=3)
            for e in run_theorem3(cfg):
                assert e.trials == 4000
                assert abs(e.estimate - exact[(e.n, e.m)]) < 4 * e.stderr + 1e-12

    def test_stderr_scaling(self):
        se = []
        for trials in (1000, 16000):
            cfg = ExperimentConfig(r=1, n_grid=(30,), m_values=(2,), trials=trials,
                                   method="exact-sampler", seed=1)
            se.append(run_theorem3(cfg)[0].stderr)
        assert se[0] / se[1] == pytest.approx(4, rel=0.15)

    def test_failure_is_recorded(self):
        cfg = ExperimentConfig(r=1, n_grid=(2000,), m_values=(2,), trials=2, max_attempts=10)
        (e,) = run_theorem3(cfg)
        assert math.isnan(e.estimate) and "budget" in e.note

    def test_jobs_do_not_change_results(self):
        base = dict(r=1, n_grid=(20, 40, 60), trials=300, seed=7)
        a = run_theorem3(ExperimentConfig(**base))
        b = run_theorem3(ExperimentConfig(**base, jobs=2))
        assert render(a, THEOREM3_COLUMNS) == render(b, THEOREM3_COLUMNS)


class TestTables:
    def test_convergence_rows(self):
        rows = run_convergence_tables(ExperimentConfig(r=1, n_grid=(4, 100), m_values=(1, 3)))
        assert rows[0]["delta_exact"] == pytest.approx(1.4)
        assert rows[1]["delta_exact"] == pytest.approx(0.2)
        assert rows[1]["prop3_ratio"] == pytest.approx(1 / 7)
        assert rows[3]["prop3_target"] == pytest.approx(1 / 3)
        assert rows[2]["p_exact"] == 190569292

    def test_local_clt(self):
        rows = run_local_clt(ExperimentConfig(r=1, n_grid=(50,), trials=10**5, seed=2))
        (row,) = rows
        assert row["target"] == LOCAL_CLT_TARGET
        assert abs(row["estimate"] - row["exact_scaled"]) < 4 * row["stderr"]

    def test_local_clt_zero_acceptance(self, monkeypatch):
        from rdiff import experiments
        from rdiff.sampling import ZeroAcceptanceError

        def none_accepted(*args, **kwargs):
            raise ZeroAcceptanceError("no acceptances")

        monkeypatch.setattr(experiments, "point_mass_scaling", none_accepted)
        (row,) = run_local_clt(ExperimentConfig(r=1, n_grid=(50,), trials=10**4))
        assert row["accepted"] == 0 and math.isnan(row["estimate"])


class TestRender:
    def test_csv_and_json(self):
        rows = [RatioEstimate(4, 1, 2, 0.5, 0.0, 0.5, 1, "exact-enumeration")]
        csv_text = render(rows, THEOREM3_COLUMNS)
        assert csv_text.splitlines()[0] == ",".join(THEOREM3_COLUMNS)
        assert csv_text.splitlines()[1] == "4,1,2,exact-enumeration,1,0.5,0,0.5,"
        data = json.loads(render(rows, THEOREM3_COLUMNS, "json"))
        assert data[0]["estimate"] == 0.5

    def test_json_special_values(self):
        data = json.loads(render([{"a": math.nan, "b": 10**30}], ("a", "b"), "json"))
        assert data == [{"a": None, "b": str(10**30)}]


class TestCli:
    def test_examples(self):
        assert run_cli("diff", "--r", "2", "6,3,1") == (0, "1,1,1\n")
        assert run_cli("map", "--r", "1", "3,2") == (0, "2^2+1^1\n")
        assert run_cli("count", "--r", "2", "--n", "10") == (0, "7\n")

    def test_map_inverse_and_stdin(self):
        assert run_cli("map", "--r", "2", "6^1+3^1+1^1") == (0, "6,3,1\n")
        assert run_cli("map", "--r", "1", stdin="3,2\n2^2+1^1\n") == (0, "2^2+1^1\n3,2\n")

    def test_count_csv(self):
        code, out = run_cli("count", "--r", "1", "--n", "0-3")
        assert code == 0
        assert out == "n,r,p_r_exact\n0,1,1\n1,1,1\n2,1,2\n3,1,3\n"

    def test_delta(self):
        code, out = run_cli("delta", "--r", "1", "--n", "4", "--m", "1,3")
        assert out.splitlines()[1:] == ["4,1,1,7,5,1.4", "4,1,3,1,5,0.2"]

    def test_asym(self):
        code, out = run_cli("asym", "--r", "1", "--n-grid", "100,1000", "--m", "2")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 3
        assert lines[0].split(",")[:5] == ["n", "exact", "estimate", "log_estimate", "ratio"]
        assert float(lines[2].split(",")[4]) == pytest.approx(1.0, abs=0.05)

    def test_sample(self):
        code, out = run_cli("sample", "--r", "2", "--n", "20", "--count", "3", "--seed", "1")
        lines = out.splitlines()
        assert code == 0 and len(lines) == 4
        summary = json.loads(lines[-1])
        assert summary["samples"] == 3 and summary["method"] == "reject"
        _, again = run_cli("sample", "--r", "2", "--n", "20", "--count", "3", "--seed", "1")
        assert again == out
        code, out = run_cli("sample", "--r", "1", "--n", "10", "--method", "exact", "--count", "2")
        assert code == 0 and json.loads(out.splitlines()[-1])["mean_attempts"] is None

    def test_experiment_json(self):
        code, out = run_cli("experiment", "convergence", "--r", "1", "--n-grid", "4",
                            "--m", "2", "--format", "json")
        assert code == 0
        (row,) = json.loads(out)
        assert set(row) == set(CONVERGENCE_COLUMNS)

    def test_output_file(self, tmp_path):
        path = tmp_path / "t.csv"
        code, out = run_cli("experiment", "theorem3", "--r", "1", "--n-grid", "4,6",
                            "--method", "exact-enumeration", "--out", str(path))
        assert code == 0 and out == ""
        assert path.read_text().startswith("n,r,m,method")

    def test_exit_codes(self, monkeypatch):
        assert run_cli("diff", "--r", "2", "1,2")[0] == 1
        assert run_cli("count", "--r", "1")[0] == 1
        assert run_cli("bogus")[0] == 1
        assert run_cli("count", "--r", "1", "--n", "5", "--wat")[0] == 1
        assert run_cli("map", "--r", "2", "2,1,1")[0] == 1
        assert run_cli("sample", "--r", "1", "--n", "2000", "--max-attempts", "5")[0] == 2
        monkeypatch.setenv("RDIFF_COUNT_CAP", "10")
        assert run_cli("count", "--r", "1", "--n", "11")[0] == 2

    def test_help(self, capsys):
        assert run_cli("--help")[0] == 0
        assert "experiment" in capsys.readouterr().out

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "rdiff", "count", "--r", "2", "--n", "10"],
                              capture_output=True, text=True, check=True)
        assert proc.stdout == "7\n"

    @pytest.mark.parametrize("text, expected", [
        ("5", [5]), ("1,2,8", [1, 2, 8]), ("0-3", [0, 1, 2, 3]), ("1e3", [1000]),
        ("2,5-6", [2, 5, 6]),
    ])
    def test_int_lists(self, text, expected):
        assert parse_int_list(text) == expected
