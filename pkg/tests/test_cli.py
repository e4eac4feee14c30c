"""CLI contract: subcommands, exit codes, deterministic output."""

from __future__ import annotations

import json

from contractcheck.cli import run

from conftest import CORPUS_DIR

GCDC = str(CORPUS_DIR / "gcdc_legal.pnet")
PARTIAL = str(CORPUS_DIR / "gcdc_partial.pnet")
PARTIAL_ALIGN = str(CORPUS_DIR / "gcdc_partial.align")
STRESS = str(CORPUS_DIR / "transactive_stress.pnet")


class TestExitCodes:
    def test_unknown_flag_is_usage_error(self, capsys):
        assert run(["behaviors", GCDC, "--no-such-flag"]) == 1

    def test_unknown_subcommand_is_usage_error(self, capsys):
        assert run(["frobnicate"]) == 1

    def test_no_subcommand_is_usage_error(self, capsys):
        assert run([]) == 1

    def test_parse_error_is_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.pnet"
        bad.write_text("this is not a net\n")
        assert run(["validate", str(bad)]) == 2

    def test_missing_file_is_two(self, capsys):
        assert run(["validate", "/nonexistent/net.pnet"]) == 2

    def test_validation_error_is_two(self, tmp_path, capsys):
        bad = tmp_path / "cold.pnet"
        bad.write_text('net "cold"\nplace p\ntransition t actor=a action=b\narc p -> t\n')
        assert run(["validate", str(bad)]) == 2

    def test_state_explosion_is_three(self, capsys):
        assert run(["behaviors", STRESS]) == 3
        err = capsys.readouterr().err
        assert "transactive_stress" in err

    def test_no_terminal_markings_is_four(self, tmp_path, capsys):
        spin = tmp_path / "spin.pnet"
        spin.write_text(
            'net "spin"\nplace d tokens=1\ntransition t actor=a action=b\n'
            "arc d <-> t\n"
        )
        assert run(["behaviors", str(spin)]) == 4

    def test_help_exits_zero(self, capsys):
        assert run(["--help"]) == 0

    def test_reach_explosion_is_three_and_names_net(self, capsys):
        assert run(["reach", STRESS]) == 3
        assert "transactive_stress" in capsys.readouterr().err

    def test_subcommand_help_documents_flags(self, capsys):
        assert run(["compare", "--help"]) == 0
        text = capsys.readouterr().out
        for flag in ("--ground", "--candidate", "--align", "--report",
                     "--format", "--round", "--figures", "--lcp-auto",
                     "--no-prune", "--exclude-pruned", "--allow-no-terminal",
                     "--max-states", "--max-paths", "--max-depth"):
            assert flag in text
        assert run(["behaviors", "--help"]) == 0
        text = capsys.readouterr().out
        for flag in ("--lcp-auto", "--allow-no-terminal", "--quiet"):
            assert flag in text


class TestValidate:
    def test_ok_output(self, capsys):
        assert run(["validate", GCDC]) == 0
        out = capsys.readouterr().out
        assert "OK: gcdc_legal" in out
        assert "15 places" in out


class TestReach:
    def test_counts_line(self, capsys):
        assert run(["reach", GCDC]) == 0
        out = capsys.readouterr().out
        assert "states" in out and "terminal markings" in out

    def test_lcp_auto_tames_stress_net(self, capsys):
        assert run(["reach", STRESS, "--lcp-auto"]) == 0
        out = capsys.readouterr().out
        assert "256 states" in out


class TestBehaviors:
    def test_gcdc_reports_twelve(self, capsys):
        assert run(["behaviors", GCDC]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "12 behaviors"
        assert len(out.splitlines()) == 13

    def test_byte_identical_between_runs(self, capsys):
        assert run(["behaviors", GCDC]) == 0
        first = capsys.readouterr().out
        assert run(["behaviors", GCDC]) == 0
        second = capsys.readouterr().out
        assert first == second


class TestCompare:
    def test_table_output_and_exit_zero(self, capsys):
        code = run([
            "compare", "--ground", GCDC, "--candidate", PARTIAL,
            "--align", PARTIAL_ALIGN,
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert out.splitlines()[1].split() == [
            "gcdc_partial", "1.00", "0.50", "1.00",
        ]

    def test_json_report_file(self, tmp_path, capsys):
        report_path = tmp_path / "out.report.json"
        code = run([
            "compare", "--ground", GCDC, "--candidate", PARTIAL,
            "--align", PARTIAL_ALIGN, "--report", str(report_path),
            "--format", "json",
        ])
        assert code == 0
        on_disk = json.loads(report_path.read_text())
        on_stdout = json.loads(capsys.readouterr().out)
        assert on_disk == on_stdout
        assert on_disk["metrics"]["fitness"]["value"] == "0.50"

    def test_round_digits_flag(self, capsys):
        code = run([
            "compare", "--ground", GCDC, "--candidate",
            str(CORPUS_DIR / "gcdc_noisy.pnet"),
            "--align", str(CORPUS_DIR / "gcdc_noisy.align"),
            "--round", "4",
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "0.4286" in out

    def test_identity_self_compare_all_ones(self, tmp_path, capsys):
        # Identity alignment written out by hand for the chain fixture.
        align = tmp_path / "id.align"
        align.write_text(
            'align "id"\n'
            "event alice:prepare => alice:prepare\n"
            "event bob:review => bob:review\n"
            "event alice:finalize => alice:finalize\n"
        )
        chain = str(CORPUS_DIR / "chain3_ground.pnet")
        assert run(["compare", "--ground", chain, "--candidate", chain,
                    "--align", str(align)]) == 0
        out = capsys.readouterr().out
        assert out.splitlines()[1].split()[1:] == ["1.00", "1.00", "1.00"]

    def test_invalid_alignment_is_two(self, tmp_path, capsys):
        align = tmp_path / "bad.align"
        align.write_text('align "bad"\nlegal ghost => P_Pause\n')
        assert run(["compare", "--ground", GCDC, "--candidate", PARTIAL,
                    "--align", str(align)]) == 2


class TestGenerate:
    def test_missing_endpoint_is_usage_error(self, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv("CONTRACTCHECK_ENDPOINT", raising=False)
        contract = tmp_path / "c.txt"
        contract.write_text("terms")
        assert run(["generate", "--contract", str(contract)]) == 1

    def test_unreachable_endpoint_is_five(self, tmp_path, capsys):
        contract = tmp_path / "c.txt"
        contract.write_text("terms")
        code = run([
            "generate", "--contract", str(contract),
            "--endpoint", "http://127.0.0.1:1/nothing",
            "--attempts", "1", "--timeout", "2",
            "--out", str(tmp_path / "run"),
        ])
        assert code == 5

    def test_endpoint_env_var_consulted(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("CONTRACTCHECK_ENDPOINT", "http://127.0.0.1:1/nothing")
        contract = tmp_path / "c.txt"
        contract.write_text("terms")
        code = run([
            "generate", "--contract", str(contract),
            "--attempts", "1", "--timeout", "2",
            "--out", str(tmp_path / "run"),
        ])
        assert code == 5
