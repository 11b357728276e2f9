import json
from pathlib import Path

import pytest

from arbmigrate.cli import main

CORPUS = Path(__file__).parent / "corpus"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAnalyze:
    def test_text_output_and_exit_zero(self, capsys):
        code, out, _ = run(capsys, "analyze", str(CORPUS / "alias_permission_dirty.sol"))
        assert code == 0
        assert "ARB-ALIAS-001" in out
        assert "2 finding(s) in 1 file(s)" in out

    def test_check_mode_exit_one_on_findings(self, capsys):
        code, _, _ = run(capsys, "analyze", "--check", str(CORPUS / "dos_loop_dirty.sol"))
        assert code == 1

    def test_check_mode_exit_zero_on_clean_file(self, capsys):
        code, _, _ = run(capsys, "analyze", "--check", str(CORPUS / "dos_loop_clean.sol"))
        assert code == 0

    def test_json_output_is_schema_shaped_and_deterministic(self, capsys):
        args = ("analyze", "--format", "json", str(CORPUS / "seq_oracle_dirty.sol"))
        code, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code == code2 == 0
        assert out1 == out2
        doc = json.loads(out1)
        assert doc["version"] == "1"
        assert [f["rule_id"] for f in doc["findings"]] == ["ARB-SEQ-001", "ARB-SEQ-001"]

    def test_rules_filter(self, capsys):
        path = str(CORPUS / "time_equality_dirty.sol")
        code, out, _ = run(capsys, "analyze", "--rules", "ARB-DOS-001", path)
        assert code == 0
        assert "0 finding(s)" in out

    def test_unknown_rule_id_is_usage_error(self, capsys):
        code, _, err = run(capsys, "analyze", "--rules", "ARB-NOPE-1", str(CORPUS / "dos_loop_clean.sol"))
        assert code == 2
        assert "unknown rule id" in err

    def test_config_file(self, tmp_path, capsys):
        config = tmp_path / "rules.json"
        config.write_text(json.dumps({"enabled": ["ARB-TIME-003"]}))
        code, out, _ = run(
            capsys, "analyze", "--config", str(config), str(CORPUS / "time_interval_dirty.sol")
        )
        assert code == 0
        assert out.count("ARB-TIME-003") == 2

    def test_unparseable_file_exits_two_with_diagnostics(self, tmp_path, capsys):
        bad = tmp_path / "bad.sol"
        bad.write_text("contract C { function f() public { uint256 x = ; } }")
        code, _, err = run(capsys, "analyze", str(bad))
        assert code == 2
        assert "bad.sol:1:" in err

    def test_missing_file_is_usage_error(self, capsys):
        code, _, err = run(capsys, "analyze", "no_such_file.sol")
        assert code == 2
        assert "cannot read" in err

    def test_multiple_files_sorted_output(self, capsys):
        code, out, _ = run(
            capsys,
            "analyze",
            "--format",
            "json",
            str(CORPUS / "time_equality_dirty.sol"),
            str(CORPUS / "alias_permission_dirty.sol"),
        )
        doc = json.loads(out)
        files = [f["file"] for f in doc["findings"]]
        assert files == sorted(files)


class TestScenarioCommands:
    def test_list_shows_all_five(self, capsys):
        code, out, _ = run(capsys, "scenario", "list")
        assert code == 0
        for sid in ("S1", "S2", "S3", "S4", "S5"):
            assert sid in out

    def test_run_writes_json_to_stdout(self, capsys):
        code, out, _ = run(capsys, "scenario", "run", "S2")
        assert code == 0
        assert json.loads(out)["l2_outcome"]["observable_fraction"] == 0.25

    def test_run_with_params_and_out_file(self, tmp_path, capsys):
        out_file = tmp_path / "report.json"
        code, out, _ = run(
            capsys, "scenario", "run", "S4", "--param", "per_iteration_gas=7000",
            "--param", "base_gas=0", "--out", str(out_file),
        )
        assert code == 0
        assert out == ""
        doc = json.loads(out_file.read_text())
        assert doc["l2_outcome"]["first_failing_n"] == 30_000_000 // 7000 + 1

    def test_unknown_scenario_is_usage_error(self, capsys):
        code, _, err = run(capsys, "scenario", "run", "S8")
        assert code == 2
        assert "valid ids" in err

    def test_bad_param_shape_is_usage_error(self, capsys):
        code, _, err = run(capsys, "scenario", "run", "S1", "--param", "downtime")
        assert code == 2
        assert "key=value" in err

    def test_check_mode_flags_divergence(self, capsys):
        code, _, _ = run(capsys, "scenario", "run", "S3", "--check")
        assert code == 1
        code, _, _ = run(capsys, "scenario", "run", "S1", "--param", "downtime_s=0", "--check")
        assert code == 0

    def test_seed_changes_s1_report(self, capsys):
        _, out_a, _ = run(capsys, "scenario", "run", "S1", "--seed", "1")
        _, out_b, _ = run(capsys, "scenario", "run", "S1", "--seed", "2")
        assert out_a != out_b


class TestGasCommands:
    def test_calc(self, capsys):
        code, out, _ = run(
            capsys, "gas", "calc", "--gas-used-l2", "100000", "--calldata-price-l1", "16",
            "--calldata-size-l1", "500", "--gas-price-l2", "1",
        )
        assert code == 0
        assert "gas_limit: 108000" in out
        assert "gas_fees: 108000" in out

    def test_calc_zero_price_is_usage_error(self, capsys):
        code, _, err = run(
            capsys, "gas", "calc", "--gas-used-l2", "1", "--calldata-price-l1", "1",
            "--calldata-size-l1", "1", "--gas-price-l2", "0",
        )
        assert code == 2
        assert "gas_price_l2" in err

    def test_table_prints_six_rows_and_mean(self, capsys):
        code, out, _ = run(capsys, "gas", "table")
        assert code == 0
        for label in ("Aave Deposit", "EOA Transfer", "Yearn Deposit"):
            assert label in out
        assert "mean saving: 95.3%" in out


class TestAliasCommands:
    def test_apply_and_undo_round_trip(self, capsys):
        source = "0x00000000000000000000000000000000deadbeef"
        code, aliased, _ = run(capsys, "alias", "apply", source)
        assert code == 0
        code, back, _ = run(capsys, "alias", "undo", aliased.strip())
        assert code == 0
        assert back.strip().lower() == source

    def test_output_is_checksummed(self, capsys):
        _, out, _ = run(capsys, "alias", "apply", "0x" + "0" * 40)
        assert out.strip() == "0x1111000000000000000000000000000000001111"

    def test_malformed_address_is_usage_error(self, capsys):
        code, _, err = run(capsys, "alias", "apply", "0x123")
        assert code == 2
        assert "40-hex-digit" in err

    def test_custom_offset(self, capsys):
        _, out, _ = run(
            capsys, "alias", "apply", "0x" + "0" * 40, "--offset", "0x" + "0" * 39 + "5"
        )
        assert out.strip().lower() == "0x" + "0" * 39 + "5"


class TestChecklistCommand:
    def test_checklist_from_findings_file(self, tmp_path, capsys):
        findings_file = tmp_path / "findings.json"
        code, out, _ = run(
            capsys, "analyze", "--format", "json", str(CORPUS / "alias_permission_dirty.sol")
        )
        findings_file.write_text(out)
        code, out, _ = run(capsys, "checklist", str(findings_file))
        assert code == 0
        assert "1. Pause the source contract" in out
        assert "aliased address" in out
        assert "ARB-ALIAS-001" in out

    def test_empty_findings_gives_base_steps_only(self, tmp_path, capsys):
        findings_file = tmp_path / "findings.json"
        findings_file.write_text(json.dumps({"version": "1", "files": [], "findings": []}))
        code, out, _ = run(capsys, "checklist", str(findings_file))
        assert code == 0
        assert "related rules" not in out

    def test_garbage_file_is_usage_error(self, tmp_path, capsys):
        path = tmp_path / "junk.json"
        path.write_text("{}")
        code, _, err = run(capsys, "checklist", str(path))
        assert code == 2
        assert "cannot load findings" in err


class TestSimCommand:
    def test_default_table_matches_lagged_view(self, capsys):
        code, out, _ = run(capsys, "sim")
        assert code == 0
        lines = out.strip().splitlines()
        rows = [tuple(int(x) for x in line.split()) for line in lines[1:]]
        assert rows == [
            (0, 1000, 1000),
            (15, 1001, 1000),
            (30, 1002, 1000),
            (45, 1003, 1000),
            (60, 1004, 1004),
            (75, 1005, 1004),
        ]

    def test_bad_sync_period_is_usage_error(self, capsys):
        code, _, err = run(capsys, "sim", "--sync-period", "50")
        assert code == 2
        assert "multiple" in err


def test_rules_catalog_command(capsys):
    code, out, _ = run(capsys, "rules")
    assert code == 0
    assert "ARB-SEQ-001" in out and "ARB-DOS-002" in out


def test_usage_error_exit_code_via_argparse():
    with pytest.raises(SystemExit) as err:
        main(["gas"])
    assert err.value.code == 2
