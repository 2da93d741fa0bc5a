"""Tests for the command-line interface: outputs, exit codes, determinism."""

import json
import math
import subprocess
import sys

import numpy as np
import pytest
from scipy import integrate as sci_integrate

from conftest import ks_distance
from xgratio.cli import main
from xgratio.numerics import RandomState
from xgratio.ratio import RatioParams, cdf, pdf, sample


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


class TestEval:
    def test_cdf_at_median(self, capsys):
        record = run_json(
            capsys, "eval", "--alpha", "1", "--beta", "1", "--at", "1",
            "--what", "cdf",
        )
        assert record["records"][0]["value"] == pytest.approx(0.5, abs=1e-10)

    def test_survival_at_origin(self, capsys):
        record = run_json(
            capsys, "eval", "--alpha", "0.8", "--beta", "1.3", "--at", "0",
            "--what", "sf",
        )
        assert record["records"][0]["value"] == 1.0

    def test_pdf_at_origin(self, capsys):
        record = run_json(
            capsys, "eval", "--alpha", "1", "--beta", "1", "--at", "0",
            "--what", "pdf",
        )
        assert record["records"][0]["value"] == pytest.approx(1.0, rel=1e-14)

    def test_multiple_points(self, capsys):
        record = run_json(
            capsys, "eval", "--alpha", "1", "--beta", "1",
            "--at", "0.5", "1", "2", "--what", "hazard",
        )
        assert [r["z"] for r in record["records"]] == [0.5, 1.0, 2.0]

    def test_negative_point_is_usage_error(self, capsys):
        code, _, err = run_cli(
            capsys, "eval", "--alpha", "1", "--beta", "1", "--at", "-1"
        )
        assert code == 2
        assert "error" in err

    def test_invalid_parameter_is_usage_error(self, capsys):
        code, _, _ = run_cli(
            capsys, "eval", "--alpha", "-1", "--beta", "1", "--at", "1"
        )
        assert code == 2


class TestQuantile:
    def test_median_symmetric(self, capsys):
        record = run_json(
            capsys, "quantile", "--alpha", "2", "--beta", "2", "--prob", "0.5"
        )
        assert record["records"][0]["value"] == pytest.approx(1.0, abs=1e-9)

    def test_round_trip_through_eval(self, capsys):
        record = run_json(
            capsys, "quantile", "--alpha", "0.8", "--beta", "1.3",
            "--prob", "0.25", "0.75",
        )
        for entry in record["records"]:
            back = run_json(
                capsys, "eval", "--alpha", "0.8", "--beta", "1.3",
                "--at", repr(entry["value"]), "--what", "cdf",
            )
            assert back["records"][0]["value"] == pytest.approx(
                entry["prob"], abs=1e-10
            )

    def test_bad_probability(self, capsys):
        code, _, _ = run_cli(
            capsys, "quantile", "--alpha", "1", "--beta", "1", "--prob", "1.0"
        )
        assert code == 2


class TestSample:
    def test_repeat_runs_byte_identical(self, capsys, tmp_path):
        first, second = tmp_path / "a.txt", tmp_path / "b.txt"
        for path in (first, second):
            code, _, _ = run_cli(
                capsys, "sample", "--alpha", "0.8", "--beta", "1.3",
                "-n", "500", "--seed", "7", "--out", str(path),
            )
            assert code == 0
        assert first.read_bytes() == second.read_bytes()

    def test_sample_matches_model_cdf(self, capsys, tmp_path):
        path = tmp_path / "draws.txt"
        run_json(
            capsys, "sample", "--alpha", "1", "--beta", "1",
            "-n", "100000", "--seed", "5", "--out", str(path),
        )
        draws = np.array([float(line) for line in path.read_text().split()])
        params = RatioParams(1.0, 1.0)
        assert ks_distance(draws, cdf(params, draws)) < 0.01

    def test_zero_draws_is_usage_error(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "sample", "--alpha", "1", "--beta", "1",
            "-n", "0", "--out", str(tmp_path / "x.txt"),
        )
        assert code == 2
        assert "at least 1" in err

    def test_unwritable_path_is_io_error(self, capsys, tmp_path):
        code, _, _ = run_cli(
            capsys, "sample", "--alpha", "1", "--beta", "1",
            "-n", "5", "--out", str(tmp_path / "missing" / "x.txt"),
        )
        assert code == 3

    def test_env_seed_fallback_and_flag_priority(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("XGRATIO_SEED", "123")
        from_env = tmp_path / "env.txt"
        record = run_json(
            capsys, "sample", "--alpha", "1", "--beta", "1",
            "-n", "50", "--out", str(from_env),
        )
        assert record["seed"] == 123
        explicit = tmp_path / "flag.txt"
        record = run_json(
            capsys, "sample", "--alpha", "1", "--beta", "1",
            "-n", "50", "--seed", "9", "--out", str(explicit),
        )
        assert record["seed"] == 9
        assert from_env.read_bytes() != explicit.read_bytes()
        # env seed equals the same library stream
        expected = sample(RatioParams(1.0, 1.0), 50, RandomState(123)).values
        loaded = np.array([float(t) for t in from_env.read_text().split()])
        assert np.array_equal(loaded, expected)


class TestMoment:
    def test_zero_order(self, capsys):
        record = run_json(
            capsys, "moment", "--alpha", "0.8", "--beta", "1.3", "-k", "0"
        )
        assert record["records"][0]["value"] == 1.0

    def test_existence_error_names_window(self, capsys):
        code, _, err = run_cli(
            capsys, "moment", "--alpha", "1", "--beta", "1", "-k", "1"
        )
        assert code == 2
        assert "(-1, 1)" in err

    def test_half_order_against_quadrature(self, capsys):
        record = run_json(
            capsys, "moment", "--alpha", "0.8", "--beta", "1.3", "-k", "0.5"
        )
        params = RatioParams(0.8, 1.3)
        reference, _ = sci_integrate.quad(
            lambda u: u**0.5 * pdf(params, u), 0.0, np.inf, limit=400
        )
        assert record["records"][0]["value"] == pytest.approx(reference, rel=1e-6)


class TestEntropy:
    def test_shannon_against_direct_quadrature(self, capsys):
        record = run_json(
            capsys, "entropy", "--alpha", "1", "--beta", "1", "--kind", "shannon"
        )
        params = RatioParams(1.0, 1.0)
        reference, _ = sci_integrate.quad(
            lambda z: -pdf(params, z) * math.log(pdf(params, z)), 0.0, np.inf,
            limit=400,
        )
        assert record["value"] == pytest.approx(reference, abs=1e-6)

    def test_renyi_order_one_rejected(self, capsys):
        code, _, _ = run_cli(
            capsys, "entropy", "--alpha", "1", "--beta", "1",
            "--kind", "renyi", "--order", "1",
        )
        assert code == 2

    def test_tsallis_divergent_order_rejected(self, capsys):
        code, _, err = run_cli(
            capsys, "entropy", "--alpha", "1", "--beta", "1",
            "--kind", "tsallis", "--order", "0.4",
        )
        assert code == 2
        assert "diverges" in err

    def test_missing_order_rejected(self, capsys):
        code, _, _ = run_cli(
            capsys, "entropy", "--alpha", "1", "--beta", "1", "--kind", "renyi"
        )
        assert code == 2


class TestFit:
    @pytest.fixture(scope="class")
    def data_file(self, tmp_path_factory):
        path = tmp_path_factory.mktemp("fit") / "sim.txt"
        batch = sample(RatioParams(0.8, 1.5), 5000, RandomState(1))
        path.write_text("".join(f"{v!r}\n" for v in batch.values))
        return str(path)

    def test_recovery(self, capsys, data_file):
        record = run_json(capsys, "fit", "--data", data_file)
        assert abs(record["alpha_hat"] - 0.8) / 0.8 < 0.15
        assert abs(record["beta_hat"] - 1.5) / 1.5 < 0.15
        assert record["converged"] is True
        assert record["n"] == 5000

    def test_explicit_init_matches_default(self, capsys, data_file):
        default = run_json(capsys, "fit", "--data", data_file)
        pinned = run_json(capsys, "fit", "--data", data_file, "--init", "1,1")
        assert abs(default["log_likelihood"] - pinned["log_likelihood"]) < 1e-6

    def test_negative_value_is_data_error(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1.0\n-2.0\n" + "1.0\n" * 10)
        code, _, err = run_cli(capsys, "fit", "--data", str(path))
        assert code == 4
        assert "line 2" in err

    def test_missing_file_is_io_error(self, capsys, tmp_path):
        code, _, _ = run_cli(capsys, "fit", "--data", str(tmp_path / "nope.txt"))
        assert code == 3

    def test_csv_column(self, capsys, tmp_path):
        path = tmp_path / "obs.csv"
        values = sample(RatioParams(1.0, 1.0), 64, RandomState(2)).values
        path.write_text("id,z\n" + "".join(f"{i},{v!r}\n" for i, v in enumerate(values)))
        record = run_json(
            capsys, "fit", "--data", str(path), "--format", "csv", "--column", "1"
        )
        assert record["n"] == 64


class TestCheck:
    def test_defaults_pass(self, capsys):
        code, out, _ = run_cli(
            capsys, "check", "--alpha", "1", "--beta", "1", "--grid", "100"
        )
        assert code == 0
        assert out.splitlines()[-1] == "overall=PASS"
        assert "max_residual=" in out

    def test_negative_control_fails(self, capsys):
        code, out, _ = run_cli(
            capsys, "check", "--alpha", "1", "--beta", "1", "--grid", "100",
            "--mismatch-one-side",
        )
        assert code == 1
        assert out.splitlines()[-1] == "overall=FAIL"

    def test_report_lists_each_identity(self, capsys):
        _, out, _ = run_cli(
            capsys, "check", "--alpha", "0.8", "--beta", "1.3", "--grid", "60"
        )
        for name in [
            "right_product_identity",
            "left_product_identity",
            "closed_form_log_slope",
            "left_route_log_slope",
            "right_reconstruction",
            "left_reconstruction",
        ]:
            assert f"check={name} max_residual=" in out


class TestTable:
    def test_cdf_table_first_row(self, capsys, tmp_path):
        path = tmp_path / "cdf.csv"
        run_json(
            capsys, "table", "--alpha", "0.8", "--beta", "1.3", "--what", "cdf",
            "--range", "0:10:11", "--out", str(path),
        )
        lines = path.read_text().splitlines()
        assert lines[0] == "z,value"
        assert lines[1] == "0.0,0.0"

    def test_moment_table_zero_row(self, capsys, tmp_path):
        path = tmp_path / "mom.csv"
        run_json(
            capsys, "table", "--alpha", "1", "--beta", "1", "--what", "moment",
            "--korder", "-0.5:0.5:5", "--out", str(path),
        )
        lines = path.read_text().splitlines()
        assert lines[0] == "k,value"
        middle = lines[3].split(",")
        assert float(middle[0]) == 0.0
        assert float(middle[1]) == 1.0

    def test_moment_sweep_outside_window_rejected(self, capsys, tmp_path):
        code, _, _ = run_cli(
            capsys, "table", "--alpha", "1", "--beta", "1", "--what", "moment",
            "--korder", "-1:1:5", "--out", str(tmp_path / "x.csv"),
        )
        assert code == 2

    def test_pdf_tables_show_steepening_with_alpha(self, capsys, tmp_path):
        # downstream use of the tables: larger alpha concentrates the
        # density, raising the peak value
        peaks = []
        for i, alpha in enumerate(["0.5", "1.0", "2.0"]):
            path = tmp_path / f"pdf{i}.csv"
            run_json(
                capsys, "table", "--alpha", alpha, "--beta", "0.8",
                "--what", "pdf", "--range", "0:10:101", "--out", str(path),
            )
            rows = [line.split(",") for line in path.read_text().splitlines()[1:]]
            peaks.append(max(float(v) for _, v in rows))
        assert peaks[0] < peaks[1] < peaks[2]

    def test_round_trip_precision(self, capsys, tmp_path):
        path = tmp_path / "pdf.csv"
        run_json(
            capsys, "table", "--alpha", "0.8", "--beta", "1.3", "--what", "pdf",
            "--range", "0:5:21", "--out", str(path),
        )
        params = RatioParams(0.8, 1.3)
        for line in path.read_text().splitlines()[1:]:
            z_text, value_text = line.split(",")
            assert float(value_text) == pdf(params, float(z_text))


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ["eval", "--alpha", "0.8", "--beta", "1.3", "--at", "0.5", "1", "2",
             "--what", "pdf"],
            ["quantile", "--alpha", "0.8", "--beta", "1.3", "--prob", "0.1", "0.9"],
            ["moment", "--alpha", "0.8", "--beta", "1.3", "-k", "-0.5", "0.5"],
            ["entropy", "--alpha", "0.8", "--beta", "1.3", "--kind", "renyi",
             "--order", "2"],
        ],
    )
    def test_stdout_byte_identical(self, capsys, argv):
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first == second


def test_console_entry_point():
    completed = subprocess.run(
        [sys.executable, "-m", "xgratio.cli", "eval", "--alpha", "1",
         "--beta", "1", "--at", "1", "--what", "cdf"],
        capture_output=True,
        text=True,
    )
    assert completed.returncode == 0
    assert json.loads(completed.stdout)["records"][0]["value"] == pytest.approx(0.5)
