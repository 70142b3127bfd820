"""CLI contract: subcommands, formats, determinism, exit codes."""
import csv
import io
import json

import pytest

import reflectsim.suite as suite_mod
from reflectsim.cli import run
from reflectsim.suite import CheckResult


def _capture(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, out


class TestKernelCommand:
    def test_json_report(self, capsys):
        code, out = _capture(capsys, ["kernel", "--eps", "1e-2", "--gap", "0.5"])
        assert code == 0
        report = json.loads(out)
        assert report["passed"] is True
        assert abs(report["alpha_sum"] - 1) <= 1e-2
        assert report["params"]["L"] == 128

    def test_csv_table(self, capsys):
        code, out = _capture(capsys, ["kernel", "--eps", "1e-1", "--gap", "0.8",
                                      "--format", "csv"])
        assert code == 0
        rows = [r for r in csv.reader(io.StringIO(out))
                if r and not r[0].startswith("#")]
        assert rows[0] == ["l", "value"]
        params = [line for line in out.splitlines() if line.startswith("#")]
        assert any("kernel_gap_sup" in line for line in params)

    def test_out_file(self, tmp_path, capsys):
        path = tmp_path / "kernel.json"
        code = run(["kernel", "--eps", "1e-1", "--gap", "0.8",
                    "--out", str(path)])
        assert code == 0
        assert json.loads(path.read_text())["passed"] is True


class TestPrepCommand:
    def test_prep_passes(self, capsys):
        code, out = _capture(capsys, ["prep", "--eps", "1e-1", "--gap", "0.8"])
        assert code == 0
        report = json.loads(out)
        assert report["chain_error"] <= report["chain_bound"]
        assert "beta_table" in report


class TestReflectCommand:
    def test_lcu_small(self, capsys):
        code, out = _capture(capsys, [
            "reflect", "lcu", "--dim", "4", "--gap", "0.8", "--eps", "1e-1",
            "--trials", "3"])
        assert code == 0
        report = json.loads(out)
        assert report["max_error"] <= report["error_bound"]
        assert report["ledger"]["queries_max_power_convention"] == \
            5 * report["params"]["L"]

    def test_pea_small(self, capsys):
        code, out = _capture(capsys, [
            "reflect", "pea", "--dim", "2", "--gap", "1.0", "--eps", "0.2",
            "--trials", "2"])
        assert code == 0
        report = json.loads(out)
        assert report["method"] == "pea"
        assert report["max_error"] <= report["error_bound"]

    def test_schema_field_compatible(self, capsys):
        _, out_l = _capture(capsys, [
            "reflect", "lcu", "--dim", "4", "--gap", "0.8", "--eps", "1e-1",
            "--trials", "1"])
        _, out_p = _capture(capsys, [
            "reflect", "pea", "--dim", "4", "--gap", "0.8", "--eps", "0.2",
            "--trials", "1"])
        rep_l, rep_p = json.loads(out_l), json.loads(out_p)
        shared = {"command", "method", "dimension", "gap", "epsilon", "seed",
                  "trials", "params", "n_ancilla", "max_error", "error_bound",
                  "ledger", "passed"}
        assert shared <= set(rep_l) and shared <= set(rep_p)


class TestCompareCommand:
    def test_csv_columns(self, capsys):
        code, out = _capture(capsys, ["compare", "--format", "csv"])
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["epsilon", "delta", "n_lcu", "n_pea", "cu_lcu",
                           "cu_pea", "cb_lcu_model", "cb_pea_model"]
        assert len(rows) == 1 + 9

    def test_json_claims(self, capsys):
        code, out = _capture(capsys, ["compare"])
        assert code == 0
        report = json.loads(out)
        assert all(report["claims"].values())


class TestGroverCommand:
    def test_small_benchmark(self, capsys):
        code, out = _capture(capsys, ["grover", "--dim", "16", "--eps", "0.05"])
        assert code == 0
        report = json.loads(out)
        assert report["nu"] <= report["nu_envelope"]
        assert report["s_reflection_defect"] <= 1e-10
        assert report["exact_target_fidelity"] == pytest.approx(1.0, abs=1e-10)


class TestContract:
    def test_usage_error_unknown_flag(self):
        assert run(["kernel", "--nope", "1"]) == 1

    def test_usage_error_bad_value(self):
        assert run(["kernel", "--eps", "0.9", "--gap", "0.5"]) == 1

    def test_usage_error_no_command(self):
        assert run([]) == 1

    def test_unwritable_output_path(self):
        assert run(["kernel", "--eps", "1e-1", "--gap", "0.8",
                    "--out", "/nonexistent-dir/report.json"]) == 1

    def test_assertion_failure_exits_two(self, monkeypatch):
        failing = ("always_fails",
                   lambda: CheckResult("always_fails", False, {}))
        monkeypatch.setattr(suite_mod, "ALL_CHECKS", (failing,))
        assert run(["verify-suite"]) == 2

    def test_deterministic_reports(self, capsys):
        argv = ["reflect", "lcu", "--dim", "4", "--gap", "0.8",
                "--eps", "1e-1", "--trials", "2", "--seed", "3"]
        _, first = _capture(capsys, argv)
        _, second = _capture(capsys, argv)
        assert first == second

    def test_suite_subset(self, capsys):
        code, out = _capture(capsys, ["verify-suite", "--only",
                                      "ancilla_scaling"])
        assert code == 0
        report = json.loads(out)
        assert report["checks"][0]["name"] == "ancilla_scaling"

    def test_every_json_roundtrips(self, capsys):
        for argv in (["kernel", "--eps", "1e-1", "--gap", "0.8"],
                     ["compare"],
                     ["grover", "--dim", "16", "--eps", "0.05"]):
            _, out = _capture(capsys, argv)
            assert json.loads(out)


class TestDocumentedInvocations:
    """The exact invocations promised by the interface docs."""

    def test_reflect_lcu_dim8(self, capsys):
        code, out = _capture(capsys, [
            "reflect", "lcu", "--dim", "8", "--gap", "0.5", "--eps", "1e-2"])
        assert code == 0
        assert json.loads(out)["max_error"] <= 0.1

    def test_grover_dim64(self, capsys):
        code, out = _capture(capsys, ["grover", "--dim", "64",
                                      "--eps", "0.05"])
        assert code == 0
        report = json.loads(out)
        assert report["nu"] <= report["nu_envelope"]
        assert report["s_reflection_defect"] <= 1e-10

    def test_kernel_csv_alpha_sums(self, capsys):
        code, out = _capture(capsys, ["kernel", "--eps", "1e-3",
                                      "--gap", "0.05", "--format", "csv"])
        assert code == 0
        rows = [r for r in csv.reader(io.StringIO(out))
                if r and not r[0].startswith("#") and r[0] != "l"]
        total = sum(float(v) for _, v in rows)
        assert 1 - 1e-3 <= total <= 1 + 1e-3
