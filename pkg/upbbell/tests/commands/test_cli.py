"""Tests for the command line."""

import json

import pytest

from upbbell.cli import run
from upbbell.services.formats import format_bell
from upbbell.services.gyni import gyni_inequality


class TestSetCommands:
    """classify, build, extend, search."""

    def test_classify_full_basis(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["classify", "catalog:nwe3"])
        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "FullBasis"

    def test_classify_completable(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["classify", "kets:000"])
        assert result.exit_code == 0
        assert result.output.startswith("CompletableToFullBasis")
        assert "completion:" in result.output

    def test_classify_expectation_fails(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["classify", "kets:000", "--expect", "UPB"])
        assert result.exit_code == 2
        assert "expected classification UPB, got CompletableToFullBasis" in result.output

    def test_classify_from_file(self, runner, cli_instance, tmp_path):
        path = tmp_path / "shifts.pvs"
        path.write_text("pvs n=3 m=2,2,2\n000\n1Ee\ne1E\nEe1\n")
        result = runner.invoke(cli_instance, ["classify", str(path), "--expect", "upb"])
        assert result.exit_code == 0

    def test_malformed_file(self, runner, cli_instance, tmp_path):
        path = tmp_path / "bad.pvs"
        path.write_text("pvs n=2 m=1,1\n00\n00\n")
        result = runner.invoke(cli_instance, ["classify", str(path)])
        assert result.exit_code == 1
        assert "not orthogonal" in result.output

    def test_build_writes_bell(self, runner, cli_instance, tmp_path):
        path = tmp_path / "shifts.bell"
        result = runner.invoke(cli_instance, ["build", "catalog:shifts", "-o", str(path)])
        assert result.exit_code == 0
        assert "<= 1" in result.output
        assert path.read_text().startswith("bell n=3 m=2,2,2 bound=1/1\n")

    def test_build_with_weights(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["build", "kets:00,11", "--weights", "1/2,1/3"])
        assert result.exit_code == 0
        assert result.output.strip() == "1/2 p(00|00) + 1/3 p(11|00) <= 1/2"

    def test_extend_method2_needs_party(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["extend", "catalog:u1", "--method", "m2"])
        assert result.exit_code == 1
        assert "--party is required" in result.output

    def test_extend_lift(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["extend", "catalog:shifts", "--method", "lift"])
        assert result.exit_code == 0
        assert result.output.startswith("pvs n=4 m=2,2,2,1")

    def test_search(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["--format", "machine", "search", "--n", "3", "--size", "4"])
        assert result.exit_code == 0
        assert len(json.loads(result.output)["found"]) == 1


class TestBoundCommands:
    """cbound, qbound, nsmax, tight."""

    def test_cbound(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["cbound", "catalog:shifts"])
        assert result.output.strip() == "1"

    def test_qbound(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["qbound", "catalog:gyni3", "--trials", "3", "--seed", "5"])
        assert result.exit_code == 0
        assert result.output.splitlines()[0] == "1"
        assert "3 random realizations" in result.output

    def test_nsmax(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["nsmax", "catalog:u1", "--expect", "4/3"])
        assert result.exit_code == 0
        assert result.output.strip() == "4/3"

    def test_nsmax_expectation_fails(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["nsmax", "catalog:u1", "--expect", "1"])
        assert result.exit_code == 2
        assert "expected NS maximum 1, got 4/3" in result.output

    def test_nsmax_machine(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["nsmax", "catalog:gyni3", "--minimum", "--format", "machine"])
        payload = json.loads(result.output)
        assert payload["exit_code"] == 0
        assert payload["optimum"] == "4/3"
        assert payload["minimum"] == "0/1"
        assert payload["trivial"] is False

    def test_nsmax_from_pvs(self, runner, cli_instance, tmp_path):
        path = tmp_path / "nwe.pvs"
        path.write_text(runner.invoke(cli_instance, ["catalog", "get", "nwe3"]).output)
        result = runner.invoke(cli_instance, ["nsmax", str(path)])
        assert result.output.strip() == "1"

    def test_tight(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["tight", "catalog:shifts", "--expect", "Tight"])
        assert result.exit_code == 0
        assert "affine dimension 25 of d = 26" in result.output

    def test_tight_rejects_a_wrong_stated_bound(self, runner, cli_instance, tmp_path):
        path = tmp_path / "gyni3.bell"
        path.write_text(format_bell(gyni_inequality(3)).replace("bound=1/1", "bound=2/1"))
        result = runner.invoke(cli_instance, ["tight", str(path)])
        assert result.exit_code == 1
        assert "stated bound 2/1 differs from the classical bound 1/1" in result.output


class TestWitnessCommands:
    """witness, state."""

    def test_witness(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["witness", "catalog:shifts", "--eps", "1/8", "--power", "2"])
        assert result.exit_code == 0
        assert result.output.startswith("Bell value 1.16666666667 at eps = 1/8")
        assert "2-fold tensor power: 1.3611" in result.output

    def test_witness_epsilon_too_large(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["witness", "catalog:shifts", "--eps", "1/2"])
        assert result.exit_code == 1

    def test_state(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["--format", "machine", "state", "catalog:shifts", "--seed", "3"])
        payload = json.loads(result.output)
        assert payload["rank"] == 4
        assert payload["is_ppt"] is True
        assert payload["witness_trace"] < 0
        assert payload["epsilon"]["seed"] == 3


class TestGyniCommand:
    """gyni n."""

    def test_bell(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["gyni", "3"])
        assert result.exit_code == 0
        assert "bell n=3 m=2,2,2 bound=1/1" in result.output

    def test_vectors(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["gyni", "4", "--vectors"])
        assert result.output.splitlines()[0] == "pvs n=4 m=2,2,2,2"
        assert len(result.output.splitlines()) == 9

    def test_certify(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["gyni", "3", "--certify"])
        assert result.exit_code == 0
        assert result.output.startswith("Tight\n32 certificates verified")

    def test_certify_one_strategy(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["gyni", "3", "--certify", "--strategy", "100"])
        assert result.exit_code == 0
        assert result.output.strip().endswith("111")

    def test_even_n(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["gyni", "4", "--certify"])
        assert result.exit_code == 1


class TestCatalogCommands:
    """catalog list, get, verify."""

    def test_list(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["catalog", "list"])
        assert result.exit_code == 0
        assert "gyni7" in result.output
        assert "t3_3" in result.output

    def test_get_shows_corrections(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["catalog", "get", "u4"])
        assert "# printed ket 'e1E10' read as 'e1E0'" in result.output
        assert "pvs n=4 m=2,2,2,1" in result.output

    def test_get_bell(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["catalog", "get", "shifts", "--bell"])
        assert "bell n=3 m=2,2,2 bound=1/1" in result.output

    def test_unknown_entry(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["catalog", "get", "u11"])
        assert result.exit_code == 1
        assert "unknown catalog entry 'u11'" in result.output

    def test_verify(self, runner, cli_instance):
        result = runner.invoke(cli_instance, ["catalog", "verify", "shifts", "nwe3"])
        assert result.exit_code == 0
        assert "MISMATCH" not in result.output


class TestRun:
    """Exit statuses through the entry point."""

    def test_success(self):
        result = run(["cbound", "catalog:shifts"])
        assert result.exit_code == 0
        assert result.text == "1"

    def test_verification_failure(self):
        assert run(["nsmax", "catalog:u1", "--expect", "1"]).exit_code == 2

    @pytest.mark.parametrize(
        "argv",
        [["nsmax"], ["nosuchcommand"], ["gyni", "three"], ["classify", "catalog:shifts", "--node-cap", "x"]],
    )
    def test_usage_errors_exit_one(self, argv):
        assert run(argv).exit_code == 1

    def test_help(self):
        assert run(["--help"]).exit_code == 0

    def test_failures_reach_the_run_log(self, mocker):
        log_error = mocker.patch("upbbell.errors.handlers.run_logger.log_error")
        run(["catalog", "get", "u11"])
        log_error.assert_called_once()
        assert log_error.call_args.kwargs["command"].startswith("upbbell catalog get")

    def test_successes_reach_the_run_log(self, mocker):
        log_event = mocker.patch("upbbell.commands.common.run_logger.log_event")
        run(["cbound", "catalog:shifts"])
        log_event.assert_called_once()
        assert log_event.call_args.kwargs["command"].startswith("upbbell cbound catalog:shifts")
        assert log_event.call_args.kwargs["additional_context"]["exit_code"] == 0

    def test_failures_are_not_logged_as_events(self, mocker):
        log_event = mocker.patch("upbbell.commands.common.run_logger.log_event")
        run(["nsmax", "catalog:u1", "--expect", "1"])
        log_event.assert_not_called()

    def test_run_log_file(self, monkeypatch):
        from upbbell.services.run_log import run_logger

        monkeypatch.setattr(run_logger, "enabled", True)
        run(["cbound", "catalog:shifts"])
        run(["catalog", "get", "u11"])
        records = [json.loads(line) for line in run_logger.path.read_text().splitlines()]
        assert [r["level"] for r in records] == ["INFO", "ERROR"]
        assert records[0]["error_message"].endswith("cbound finished")
        assert records[1]["exit_code"] == 1
