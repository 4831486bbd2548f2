import json

import pytest

from orthobox.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCheck:
    def test_bundled_triple_fails_with_message(self, capsys):
        code, out, _ = run(capsys, "check", "specker_triple")
        assert code == 1
        assert "infeasible" in out
        assert "non-Specker" in out

    def test_feasible_scenario_passes(self, capsys, tmp_path):
        path = tmp_path / "ok.json"
        path.write_text(json.dumps({
            "propositions": ["A", "B", "C"],
            "joint_sets": [["A", "B"], ["B", "C"], ["C", "A"]],
            "marginals": ["1/3", "1/3", "1/3"],
        }))
        code, out, _ = run(capsys, "check", str(path))
        assert code == 0
        assert "check passed" in out

    def test_missing_file_is_input_error(self, capsys):
        code, _, err = run(capsys, "check", "no_such_scenario")
        assert code == 2
        assert "error:" in err

    def test_malformed_file_reports_line(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{\n  broken\n}")
        code, _, err = run(capsys, "check", str(path))
        assert code == 2
        assert "bad.json:2" in err

    def test_verbose_lists_witness(self, capsys, tmp_path):
        path = tmp_path / "ok.json"
        path.write_text(json.dumps({
            "propositions": ["A", "B"],
            "joint_sets": [["A", "B"]],
            "marginals": ["1/4", "1/2"],
        }))
        code, out, _ = run(capsys, "check", str(path), "--verbose")
        assert code == 0
        assert "weight" in out


class TestVerifyTheorem:
    def test_small_grid_passes_and_reports_examples(self, capsys):
        code, out, _ = run(capsys, "verify-theorem", "--grid", "8")
        assert code == 0
        assert "gap 1/12" in out
        assert "gap 1/2" in out
        assert "positive on the whole grid" in out

    def test_csv_written(self, capsys, tmp_path):
        target = tmp_path / "sweep.csv"
        code, out, _ = run(capsys, "verify-theorem", "--grid", "6", "--csv", str(target))
        assert code == 0
        lines = target.read_text().strip().splitlines()
        assert lines[0] == "p1,p2,p3,beta_worst,alpha_worst,bob_p1,gap"
        assert len(lines) > 1


class TestSimulate:
    def test_bundled_plan_enumeration(self, capsys):
        code, out, _ = run(capsys, "simulate", "seer", "--plan", "fable")
        assert code == 0
        assert "total probability: 1" in out

    def test_sampling_column(self, capsys):
        code, out, _ = run(capsys, "simulate", "lsw", "--plan", "lsw_collapse",
                           "--trials", "200", "--seed", "4")
        assert code == 0
        assert "sampled" in out

    def test_deterministic_output(self, capsys):
        _, first, _ = run(capsys, "simulate", "firefly", "--plan", "firefly_ca_bc",
                          "--trials", "100", "--seed", "9")
        _, second, _ = run(capsys, "simulate", "firefly", "--plan", "firefly_ca_bc",
                           "--trials", "100", "--seed", "9")
        assert first == second

    def test_inadmissible_plan_is_input_error(self, capsys, tmp_path):
        plan = tmp_path / "bad.plan"
        plan.write_text("alice A\n")
        code, _, err = run(capsys, "simulate", "firefly", "--plan", str(plan))
        assert code == 2
        assert "approach a side" in err


class TestFable:
    def test_success_and_per_trial_csv(self, capsys, tmp_path):
        target = tmp_path / "trials.csv"
        code, out, _ = run(capsys, "fable", "--trials", "300", "--seed", "2",
                           "--per-trial", str(target))
        assert code == 0
        assert "daniel success rate: 1" in out
        lines = target.read_text().strip().splitlines()
        assert lines[0] == "trial,daniel_success,sandu_first,sandu_second"
        assert len(lines) == 301
        assert all(line.split(",")[1] == "1" for line in lines[1:])


class TestAssumptions:
    def test_matrix_text(self, capsys):
        code, out, _ = run(capsys, "assumptions", "all")
        assert code == 0
        lines = out.splitlines()
        assert lines[0].startswith("model")
        assert any(line.startswith("seer") and "FAIL" in line for line in lines)
        assert any(line.startswith("lsw") and "FAIL" in line for line in lines)

    def test_matrix_csv(self, capsys):
        code, out, _ = run(capsys, "assumptions", "seer", "--format", "csv")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "model,assumption,verdict,witness_plan"
        assert len(lines) == 4


class TestPrBoxes:
    def test_canonical_listing(self, capsys):
        code, out, _ = run(capsys, "pr-boxes")
        assert code == 0
        assert "canonical boxes: 8" in out
        assert "distinct: 8" in out

    def test_model_realization(self, capsys):
        code, out, _ = run(capsys, "pr-boxes", "--model", "firefly")
        assert code == 0
        assert "S = 4" in out
        assert "8 distinct boxes" in out


class TestQuantumRef:
    def test_reference_checks_pass(self, capsys, tmp_path):
        target = tmp_path / "ref.csv"
        code, out, _ = run(capsys, "quantum-ref", "--trials", "10", "--seed", "3",
                           "--csv", str(target))
        assert code == 0
        assert "all reference checks within" in out
        lines = target.read_text().strip().splitlines()
        assert lines[0] == "check,dimension,deviation"


class TestHelpAndColor:
    def test_help_exits_zero(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--help"])
        assert exc.value.code == 0
        out = capsys.readouterr().out
        for command in ("check", "verify-theorem", "simulate", "fable",
                        "assumptions", "pr-boxes", "quantum-ref"):
            assert command in out

    def test_color_env_toggles_ansi(self, capsys, monkeypatch):
        monkeypatch.setenv("ORTHOBOX_COLOR", "1")
        _, colored, _ = run(capsys, "assumptions", "seer")
        monkeypatch.setenv("ORTHOBOX_COLOR", "0")
        _, plain, _ = run(capsys, "assumptions", "seer")
        assert "\x1b[" in colored
        assert "\x1b[" not in plain
