"""End-to-end tests for the command line front end: exit codes, file
round-trips, and byte-identical suite reports."""

import json

import pytest

from framekit.cli import main
from framekit.instances import GenSpec, build_instance
from framekit.serialize import dumps_instance, loads_instance


def write_instance(tmp_path, theorem, scenario, seed=3, dim=4, name="inst.json"):
    inst = build_instance(theorem, GenSpec(seed, dim, scenario))
    path = tmp_path / name
    path.write_text(dumps_instance(inst))
    return path


class TestGen:
    def test_writes_round_trippable_files(self, tmp_path, capsys):
        code = main([
            "gen", "--theorem", "lem4.1", "--seed", "9", "--dim", "5",
            "--count", "3", "--out", str(tmp_path),
        ])
        assert code == 0
        printed = capsys.readouterr().out.strip().splitlines()
        assert len(printed) == 3
        for line in printed:
            text = (tmp_path / line.split("/")[-1]).read_text()
            # parse and re-serialize: bytes must survive the round trip
            assert dumps_instance(loads_instance(text)) == text

    def test_single_count_uses_seed_directly(self, tmp_path):
        code = main([
            "gen", "--theorem", "thm4.6", "--seed", "5", "--dim", "4",
            "--scenario", "parseval_exact", "--out", str(tmp_path),
        ])
        assert code == 0
        assert (tmp_path / "thm4.6_5.json").exists()

    def test_bad_theorem_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            main(["gen", "--theorem", "thm9.9", "--out", str(tmp_path)])
        assert err.value.code == 3

    def test_missing_subcommand_prints_help(self, capsys):
        assert main([]) == 3
        assert "COMMAND" in capsys.readouterr().out


class TestCheck:
    def test_passing_file_exits_zero(self, tmp_path, capsys):
        path = write_instance(tmp_path, "thm4.6", "parseval_exact")
        assert main(["check", str(path)]) == 0
        out = capsys.readouterr().out
        assert "thm4.6" in out and "status=pass" in out

    def test_spoiler_file_exits_two(self, tmp_path, capsys):
        # check reports the raw outcome; the declared expectation is ignored
        path = write_instance(tmp_path, "thm3.1", "non_idempotent")
        assert main(["check", str(path)]) == 2
        out = capsys.readouterr().out
        assert "status=hypothesis_failed" in out
        assert "detail=HypothesisFailed" in out

    def test_json_report_written(self, tmp_path):
        path = write_instance(tmp_path, "prop4.5", "weight_shift")
        out = tmp_path / "reports.json"
        assert main(["check", str(path), "--out", str(out)]) == 0
        reports = json.loads(out.read_text())
        assert len(reports) == 1
        assert reports[0]["format"] == "framekit/report-v1"
        assert reports[0]["theorem_id"] == "prop4.5"
        assert reports[0]["passed"] is True

    def test_csv_report_written(self, tmp_path):
        path = write_instance(tmp_path, "lem3.2", "invertible")
        out = tmp_path / "reports.csv"
        assert main([
            "check", str(path), "--format", "csv", "--out", str(out),
        ]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("theorem,seed,dim,scalar,scenario")
        assert lines[1].startswith("lem3.2")

    def test_multiple_files_worst_status_wins(self, tmp_path):
        good = write_instance(tmp_path, "thm4.6", "parseval_exact", name="a.json")
        bad = write_instance(tmp_path, "lem3.2", "nilpotent", name="b.json")
        assert main(["check", str(good), str(bad)]) == 2

    def test_unreadable_file_exits_three(self, tmp_path):
        assert main(["check", str(tmp_path / "missing.json")]) == 3

    def test_malformed_json_exits_three(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        assert main(["check", str(path)]) == 3
        assert "config error" in capsys.readouterr().err

    def test_wrong_schema_exits_three(self, tmp_path):
        path = tmp_path / "odd.json"
        path.write_text('{"format": "framekit/instance-v1", "dim": "huge"}')
        assert main(["check", str(path)]) == 3


class TestSuite:
    def run_suite(self, tmp_path, name, extra=()):
        out = tmp_path / name
        code = main([
            "suite", "--n-per-theorem", "1", "--out", str(out), *extra,
        ])
        return code, out

    def test_small_sweep_passes(self, tmp_path, capsys):
        code, out = self.run_suite(tmp_path, "suite.json")
        assert code == 0
        report = json.loads(out.read_text())
        assert report["format"] == "framekit/suite-v1"
        assert report["counts"] == {"pass": 10, "fail": 0, "hypothesis_failed": 0}
        assert len(report["results"]) == 10
        assert all("wall_time_s" not in row for row in report["results"])
        stdout = capsys.readouterr().out
        assert "thm3.1: 1/1 pass" in stdout

    def test_json_report_is_byte_identical(self, tmp_path):
        _, first = self.run_suite(tmp_path, "one.json")
        _, second = self.run_suite(tmp_path, "two.json")
        assert first.read_bytes() == second.read_bytes()

    def test_thread_count_does_not_change_bytes(self, tmp_path, monkeypatch):
        monkeypatch.setenv("FRAMEKIT_THREADS", "1")
        _, serial = self.run_suite(tmp_path, "serial.json")
        monkeypatch.delenv("FRAMEKIT_THREADS")
        _, parallel = self.run_suite(tmp_path, "parallel.json", ("--threads", "4"))
        assert serial.read_bytes() == parallel.read_bytes()

    def test_spoilers_fold_into_pass(self, tmp_path):
        code, out = self.run_suite(tmp_path, "with_spoilers.json", ("--spoilers",))
        assert code == 0
        report = json.loads(out.read_text())
        assert report["include_spoilers"] is True
        assert report["counts"]["pass"] == 20
        rejected = [
            row for row in report["results"]
            if row["expect"] == "hypothesis_failed"
        ]
        assert len(rejected) == 10
        assert all(row["status"] == "pass" for row in rejected)

    def test_csv_total_row_carries_wall_time(self, tmp_path):
        code, out = self.run_suite(tmp_path, "suite.csv", ("--format", "csv"))
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 12  # header, 10 rows, TOTAL
        total = lines[-1].split(",")
        assert total[0] == "TOTAL"
        assert float(total[-1]) > 0.0

    def test_config_file_supplies_defaults(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"n_per_theorem": 1, "tol": 1e-9}))
        out = tmp_path / "suite.json"
        assert main(["suite", "--config", str(config), "--out", str(out)]) == 0
        assert json.loads(out.read_text())["n_per_theorem"] == 1

    def test_config_unknown_key_exits_three(self, tmp_path, capsys):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"n_per_theorem": 1, "speed": "max"}))
        assert main(["suite", "--config", str(config)]) == 3
        assert "unknown keys" in capsys.readouterr().err

    def test_config_invalid_json_exits_three(self, tmp_path):
        config = tmp_path / "config.json"
        config.write_text("* not json *")
        assert main(["suite", "--config", str(config)]) == 3

    def test_bad_thread_env_exits_three(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("FRAMEKIT_THREADS", "many")
        assert main(["suite", "--n-per-theorem", "1"]) == 3
        assert "FRAMEKIT_THREADS" in capsys.readouterr().err

    def test_zero_instances_rejected(self, tmp_path):
        assert main(["suite", "--n-per-theorem", "0"]) == 3
