"""Tests for the command-line surface: parsing, exit codes and output formats."""
import io
import json

import pytest

from microcluster import __version__
from microcluster.cli import dispatch, selftest
from microcluster.cli.error_handler import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE
from microcluster.cli.output import emit_csv
from microcluster.protocols.closed_forms import TABLE2_PRINTED
from microcluster.protocols.sweep import sweep_records


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = dispatch(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


# ---------------------------------------------------------------------------
# Exit codes
# ---------------------------------------------------------------------------

class TestExitCodes:
    def test_unknown_command_is_a_usage_error(self, capsys):
        code, out, err = _run("table9")
        assert code == EXIT_USAGE
        assert out == ""
        assert "usage: microcluster" in err
        assert capsys.readouterr().err == ""

    def test_version(self, capsys):
        code, out, _ = _run("--version")
        assert code == EXIT_OK
        assert __version__ in out
        assert capsys.readouterr().out == ""

    def test_attempt_exceeding_leaves(self):
        code, out, err = _run("pairfuse", "--leaves", "2", "--attempt", "3")
        assert code == EXIT_DOMAIN
        assert out == ""
        assert "error: attempt exceeds leaves" in err

    def test_out_of_range_alpha(self):
        code, _, err = _run("pairfuse", "--leaves", "1", "--attempt", "1", "--alpha", "0.9")
        assert code == EXIT_DOMAIN
        assert "alpha" in err

    def test_unknown_policy(self):
        code, _, err = _run("pairfuse", "--leaves", "1", "--attempt", "1", "--policy", "nowhere")
        assert code == EXIT_USAGE
        assert "unknown policy" in err

    def test_csv_not_available(self):
        code, _, err = _run("policy-search", "--leaves-max", "1", "--format", "csv")
        assert code == EXIT_USAGE
        assert "csv output is not available" in err

    def test_error_log_is_json_with_run_id(self):
        _, _, err = _run("pairfuse", "--leaves", "2", "--attempt", "3")
        records = [json.loads(line) for line in err.splitlines() if line.startswith("{")]
        assert records
        assert records[0]["error_code"] == "ATTEMPT_EXCEEDS_LEAVES"
        assert records[0]["run_id"]


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

class TestCommands:
    def test_table2_text(self):
        code, out, _ = _run("table2")
        assert code == EXIT_OK
        rows = [[int(v) for v in line.split()] for line in out.splitlines()]
        assert rows == [list(row) for row in TABLE2_PRINTED]

    def test_table2_compare(self):
        _, out, _ = _run("table2", "--compare")
        assert "matches printed table: yes" in out

    def test_table2_json(self):
        _, out, _ = _run("table2", "--rows", "3", "--cols", "4", "--format", "json")
        payload = json.loads(out)
        assert payload["grid"] == [list(row[:4]) for row in TABLE2_PRINTED[:3]]

    def test_table1_exact_row(self):
        code, out, _ = _run("table1", "--leaves", "2")
        assert code == EXIT_OK
        assert out.startswith("2: ")
        assert "q" in out and "p_z" in out

    def test_table1_numeric(self):
        code, out, _ = _run("table1", "--max-leaves", "2", "--p", "0.01", "--backend", "float")
        assert code == EXIT_OK
        assert out.splitlines()[0] == "1: 1"

    def test_formulas_exact(self):
        code, out, _ = _run("formulas", "--selector", "eq2", "--alpha", "0.1", "--backend", "exact")
        assert code == EXIT_OK
        assert out.strip() == "eq2: 81/82"

    def test_formulas_float(self):
        _, out, _ = _run("formulas", "--selector", "eq2", "--alpha", "0.1")
        assert out.strip() == "eq2: 0.987804878049"

    def test_pairfuse_ideal(self):
        code, out, _ = _run("pairfuse", "--leaves", "1", "--attempt", "1")
        assert code == EXIT_OK
        assert out.strip().endswith("fidelity: 1")

    def test_pairfuse_json(self):
        _, out, _ = _run("pairfuse", "--leaves", "1", "--attempt", "1", "--format", "json")
        payload = json.loads(out)
        assert payload["policy"] == "survivor_only"
        assert payload["fidelity"] == "1"


# ---------------------------------------------------------------------------
# Sweep output
# ---------------------------------------------------------------------------

class TestSweepOutput:
    ARGS = ("sweep", "--p-grid", "0:0.01:2", "--leaves", "2", "--attempts", "1,2")

    def test_csv_shape(self):
        code, out, _ = _run(*self.ARGS)
        assert code == EXIT_OK
        lines = out.splitlines()
        assert lines[0] == "policy,leaves,attempt,alpha,p,fidelity"
        assert len(lines) == 5
        assert lines[1].startswith("survivor_only,2,1,0.01,0,")

    def test_csv_is_reproducible(self):
        assert _run(*self.ARGS)[1] == _run(*self.ARGS)[1]

    def test_out_file(self, tmp_path):
        target = tmp_path / "sweep.csv"
        code, out, _ = _run(*self.ARGS, "--out", str(target))
        assert code == EXIT_OK
        assert out == ""
        assert target.read_bytes().count(b"\r") == 0
        assert target.read_text().startswith("policy,leaves")

    def test_bad_grid(self):
        code, _, _ = _run("sweep", "--p-grid", "0:0.5:3")
        assert code == EXIT_DOMAIN

    def test_csv_matches_emit_csv(self):
        expected = io.StringIO()
        emit_csv(sweep_records(0.01, [0.0, 0.01], (2,), (1, 2)), expected)
        _, out, _ = _run(*self.ARGS)
        assert out == expected.getvalue()

    def test_text_format_is_the_csv(self):
        _, text, _ = _run(*self.ARGS, "--format", "text")
        assert text == _run(*self.ARGS)[1]


# ---------------------------------------------------------------------------
# Self-test
# ---------------------------------------------------------------------------

class TestSelftestChecks:
    CHECKS = {name: check for name, check, _ in selftest.CHECKS}

    def test_property_checks_are_registered(self):
        assert {
            "kraus_completeness_and_trace",
            "hermiticity_and_positivity",
            "px_py_exchange_symmetry",
        } <= set(self.CHECKS)

    def test_kraus_and_trace(self):
        assert self.CHECKS["kraus_completeness_and_trace"](True) == (True, "")

    def test_exchange_symmetry(self):
        assert self.CHECKS["px_py_exchange_symmetry"](True) == (True, "")

    def test_table3_structure_reports_alpha_constancy(self):
        passed, detail = self.CHECKS["table3_structure"](True)
        assert passed
        assert "alpha^2 constant in leaves: attempt 1" in detail

    @pytest.mark.slow
    def test_positivity_at_random_points(self):
        assert self.CHECKS["hermiticity_and_positivity"](False) == (True, "")


@pytest.mark.slow
class TestSelftest:
    def test_quick_selftest_passes(self):
        code, out, _ = _run("selftest", "--quick")
        assert code == EXIT_OK
        assert "FAIL" not in out
