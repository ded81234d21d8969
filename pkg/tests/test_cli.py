"""End-to-end command-line runs, in process via main().

Exit codes: 0 when every check passes, 1 when any check fails, 2 for
configuration and usage problems.  Report bytes must not depend on the
output destination or on rerunning.
"""

import json
import os
import subprocess
import sys

import pytest

from curvkit.catalog import CATALOG_NAMES
from curvkit.cli import apply_thread_setting, main
from curvkit.errors import ConfigError


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


class TestExitCodes:
    def test_no_command_prints_usage(self, capsys):
        assert main([]) == 2
        assert "usage" in capsys.readouterr().err

    def test_unknown_command_is_a_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2

    def test_flat_metric_has_zero_residual(self, capsys):
        code, doc = run_json(capsys, ["verify-identity", "--metric", "flat4", "--points", "1"])
        assert code == 0
        residual = next(r for r in doc["records"] if r["tag"] == "identity-residual")
        assert residual["value"] == 0.0
        assert residual["passed"]

    def test_sphere_identity_run_passes(self, capsys):
        code, doc = run_json(
            capsys,
            ["verify-identity", "--metric", "sphere4", "--r", "1", "--points", "20", "--seed", "7"],
        )
        assert code == 0
        assert doc["summary"]["failed"] == 0
        assert doc["config"]["params"] == {"r": 1.0}

    def test_failing_check_exits_one(self, capsys, tmp_path):
        cfg = write_config(tmp_path, {"tol_identity": 1e-18})
        code = main(
            ["verify-identity", "--config", cfg, "--metric", "torus_perturbed",
             "--eps", "0.1", "--metric-seed", "1", "--points", "5"]
        )
        assert code == 1
        doc = json.loads(capsys.readouterr().out)
        assert doc["summary"]["failed"] >= 1

    def test_config_errors_exit_two(self, capsys, tmp_path):
        cases = [
            {"tol_identity": -1.0},
            {"tol_identify": 1e-8},
            {"points": 0},
            {"deformation": "twist"},
            {"selectors": ["volume"]},
        ]
        for data in cases:
            cfg = write_config(tmp_path, data)
            assert main(["verify-identity", "--config", cfg]) == 2, data
            assert "curvkit: error:" in capsys.readouterr().err

    def test_malformed_or_missing_config_exits_two(self, capsys, tmp_path):
        broken = tmp_path / "broken.json"
        broken.write_text("{not json")
        assert main(["catalog", "--config", str(broken)]) == 2
        assert main(["catalog", "--config", str(tmp_path / "absent.json")]) == 2
        listy = tmp_path / "list.json"
        listy.write_text("[1, 2]")
        assert main(["catalog", "--config", str(listy)]) == 2
        capsys.readouterr()

    def test_unknown_metric_and_bad_params_exit_two(self, capsys):
        assert main(["verify-identity", "--metric", "nonsense"]) == 2
        assert main(["verify-identity", "--metric", "sphere4", "--r", "-1"]) == 2
        capsys.readouterr()


class TestConfigPrecedence:
    def test_flags_override_the_config_file(self, capsys, tmp_path):
        cfg = write_config(
            tmp_path, {"metric": "flat4", "points": 3, "tol_identity": 1e-8}
        )
        code, doc = run_json(capsys, ["verify-identity", "--config", cfg, "--points", "5"])
        assert code == 0
        assert doc["config"]["metric"] == "flat4"
        assert doc["config"]["points"] == 5
        assert doc["config"]["tol_identity"] == 1e-8

    def test_each_command_has_a_default_metric(self, capsys):
        code, doc = run_json(capsys, ["verify-identity", "--points", "2"])
        assert code == 0
        assert doc["config"]["metric"] == "sphere4"


class TestOutputs:
    def test_output_writes_json_csv_and_figures(self, tmp_path):
        out = tmp_path / "reports" / "run.json"
        code = main(
            ["verify-identity", "--metric", "flat4", "--points", "2", "--output", str(out)]
        )
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["command"] == "verify-identity"
        csv_text = (out.parent / "run.csv").read_text()
        assert csv_text.splitlines()[0] == "check_id,tag,value,tolerance,passed"
        figs = sorted(p.name for p in out.parent.glob("run-fig*.png"))
        assert figs == ["run-fig1.png"]
        assert (out.parent / "run-fig1.png").read_bytes()[:4] == b"\x89PNG"

    def test_no_figures_flag_skips_rendering(self, tmp_path):
        out = tmp_path / "run.json"
        code = main(
            ["verify-identity", "--metric", "flat4", "--points", "2",
             "--output", str(out), "--no-figures"]
        )
        assert code == 0
        assert out.exists()
        assert (tmp_path / "run.csv").exists()
        assert list(tmp_path.glob("*.png")) == []

    def test_report_bytes_ignore_the_destination(self, capsys, tmp_path):
        argv = ["verify-identity", "--metric", "flat4", "--points", "3", "--seed", "2"]
        code = main(argv)
        assert code == 0
        stdout_text = capsys.readouterr().out
        out = tmp_path / "run.json"
        assert main(argv + ["--output", str(out), "--no-figures"]) == 0
        assert out.read_text() == stdout_text

    def test_reruns_are_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        argv = ["three-dim", "--points", "4", "--seed", "5"]
        assert main(argv + ["--output", str(a), "--no-figures"]) == 0
        assert main(argv + ["--output", str(b), "--no-figures"]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestPipelines:
    def test_catalog_lists_every_entry(self, capsys):
        code, doc = run_json(capsys, ["catalog"])
        assert code == 0
        names = [r["check_id"] for r in doc["records"]]
        assert names == [f"catalog-entry[{n}]" for n in CATALOG_NAMES]
        assert all(r["tag"] == "catalog-entry" for r in doc["records"])

    def test_three_dim_pipeline(self, capsys):
        code, doc = run_json(capsys, ["three-dim", "--points", "5"])
        assert code == 0
        tags = [r["tag"] for r in doc["records"]]
        assert tags == ["three-dim-reconstruction", "three-dim-norm", "three-dim-norm-sq"]

    def test_gauss_bonnet_pipeline_on_a_flat_torus(self, capsys):
        code, doc = run_json(
            capsys,
            ["gauss-bonnet", "--metric", "torus_perturbed", "--eps", "0",
             "--dim", "4", "--nodes", "6"],
        )
        assert code == 0
        rec = doc["records"][0]
        assert rec["tag"] == "euler-number"
        assert rec["detail"]["reference"] == 0.0

    def test_chern_basis_pipeline_reports_the_einstein_split(self, capsys):
        code, doc = run_json(
            capsys,
            ["chern-basis", "--metric", "sphere4", "--points", "1",
             "--restarts", "4", "--iters", "200"],
        )
        assert code == 0
        tags = [r["tag"] for r in doc["records"]]
        assert tags == ["chern-zero-patterns", "chern-expansion", "singer-thorpe"]

    def test_chern_basis_rejects_indefinite_metrics(self, capsys):
        code = main(["chern-basis", "--metric", "minkowski_perturbed", "--points", "1"])
        assert code == 2
        assert "curvkit: error:" in capsys.readouterr().err

    def test_variation_pipeline_with_selected_integrals(self, capsys, tmp_path):
        cfg = write_config(
            tmp_path,
            {
                "metric": "torus_perturbed",
                "params": {"dim": 2, "eps": 0.05, "seed": 1},
                "points": 4,
                "selectors": ["scalar_2d"],
                "nodes": 12,
            },
        )
        code, doc = run_json(capsys, ["variation-check", "--config", cfg])
        assert code == 0
        tags = [r["tag"] for r in doc["records"]]
        assert tags == [
            "inverse-metric-rate",
            "volume-density-rate",
            "connection-rate",
            "curvature-rate",
            "ricci-rate",
            "scalar-rate",
            "integral-rate-scalar-2d",
        ]

    def test_pseudo_riemannian_identity_run(self, capsys):
        code, doc = run_json(
            capsys,
            ["verify-identity", "--metric", "minkowski_perturbed", "--eps", "0.02",
             "--metric-seed", "0", "--points", "5"],
        )
        assert code == 0
        assert doc["summary"]["failed"] == 0


class TestThreadSetting:
    @pytest.mark.filterwarnings("ignore:The TBB threading layer")
    def test_thread_count_seeds_the_numeric_env(self, monkeypatch):
        for name in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            monkeypatch.delenv(name, raising=False)
        monkeypatch.setenv("CURVKIT_THREADS", "2")
        apply_thread_setting()
        assert os.environ["OMP_NUM_THREADS"] == "2"
        assert os.environ["OPENBLAS_NUM_THREADS"] == "2"

    def test_invalid_thread_count_is_a_config_error(self, monkeypatch, capsys):
        monkeypatch.setenv("CURVKIT_THREADS", "two")
        with pytest.raises(ConfigError):
            apply_thread_setting()
        assert main(["catalog"]) == 2
        assert "CURVKIT_THREADS" in capsys.readouterr().err


def test_console_script_is_installed():
    proc = subprocess.run(
        ["curvkit", "three-dim", "--points", "1"],
        capture_output=True,
        text=True,
        env={**os.environ, "MPLBACKEND": "Agg"},
    )
    assert proc.returncode == 0, proc.stderr
    json.loads(proc.stdout)
