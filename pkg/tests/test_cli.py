"""Command-line interface: subcommands, exit codes, outputs."""

import json

import pytest

from fogbank.cli import build_parser, main

SMALL_CONFIG = {
    "tasks": {"count": 2},
    "sweep": {"from": 500.0, "to": 1000.0, "step": 500.0},
}


@pytest.fixture
def small_config_path(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(SMALL_CONFIG))
    return path


class TestParser:
    def test_help_available(self, capsys):
        for args in (["--help"], ["solve", "--help"], ["sweep", "--help"],
                     ["oracle-check", "--help"], ["validate", "--help"],
                     ["export-lp", "--help"]):
            with pytest.raises(SystemExit) as exc:
                build_parser().parse_args(args)
            assert exc.value.code == 0
            capsys.readouterr()

    def test_unknown_flag_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["solve", "--variant", "low", "--strategy", "single",
                  "--workload", "500", "--turbo"])
        assert exc.value.code == 2
        assert "usage" in capsys.readouterr().err

    def test_missing_subcommand_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2


class TestSolve:
    def test_solve_writes_solution_json(self, tmp_path, capsys):
        out = tmp_path / "sol.json"
        code = main(["solve", "--variant", "low", "--strategy", "single",
                     "--workload", "500", "--tasks", "1", "--out", str(out)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert doc["status"] == "Optimal"
        assert doc["objective_w"] == pytest.approx(5.28)
        assert doc["stats"]["runtime_ms"] == 0.0  # zeroed without --profile

    def test_solve_stdout_and_profile(self, capsys):
        code = main(["solve", "--variant", "cc", "--strategy", "distributed",
                     "--workload", "1000", "--tasks", "1", "--profile"])
        assert code == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["stats"]["runtime_ms"] > 0.0

    def test_infeasible_exits_one(self, tmp_path, capsys):
        config = tmp_path / "c.json"
        config.write_text(json.dumps({
            "servers": {"cc": {"capacity_mips": 1000.0, "count": 1}},
        }))
        code = main(["solve", "--variant", "cc", "--strategy", "single",
                     "--workload", "900", "--tasks", "2",
                     "--config", str(config)])
        assert code == 1
        assert json.loads(capsys.readouterr().out)["status"] == "Infeasible"


class TestSweep:
    def test_sweep_csv(self, small_config_path, tmp_path):
        out = tmp_path / "sweep.csv"
        code = main(["sweep", "--config", str(small_config_path), "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 16  # header + 4 variants x 2 strategies x 2 points
        assert lines[0].startswith("variant,strategy,workload_mips")

    def test_bad_config_exits_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"warp_drive": true}')
        code = main(["sweep", "--config", str(bad)])
        assert code == 2
        assert "configuration error" in capsys.readouterr().err

    def test_missing_config_exits_two(self, tmp_path, capsys):
        code = main(["sweep", "--config", str(tmp_path / "absent.json")])
        assert code == 2


class TestOracleCheck:
    def test_small_run_passes(self, capsys):
        code = main(["oracle-check", "--trials", "5", "--seed", "3"])
        assert code == 0
        assert "max relative gap" in capsys.readouterr().out


class TestValidate:
    def test_round_trip_ok(self, tmp_path, capsys):
        out = tmp_path / "sol.json"
        main(["solve", "--variant", "low", "--strategy", "single",
              "--workload", "500", "--tasks", "1", "--out", str(out)])
        code = main(["validate", "--solution", str(out), "--variant", "low",
                     "--strategy", "single", "--workload", "500", "--tasks", "1"])
        assert code == 0
        assert "validation: ok" in capsys.readouterr().out

    def test_tampered_solution_fails(self, tmp_path, capsys):
        out = tmp_path / "sol.json"
        main(["solve", "--variant", "low", "--strategy", "single",
              "--workload", "500", "--tasks", "1", "--out", str(out)])
        doc = json.loads(out.read_text())
        doc["allocation"][0]["mips"] = 400.0
        out.write_text(json.dumps(doc))
        code = main(["validate", "--solution", str(out), "--variant", "low",
                     "--strategy", "single", "--workload", "500", "--tasks", "1"])
        assert code == 1
        assert "violation" in capsys.readouterr().err


class TestExportLp:
    def test_export(self, tmp_path):
        out = tmp_path / "model.lp"
        code = main(["export-lp", "--variant", "cc", "--strategy", "single",
                     "--workload", "500", "--tasks", "1", "--out", str(out)])
        assert code == 0
        text = out.read_text()
        assert text.startswith("Minimize") and text.endswith("End\n")
