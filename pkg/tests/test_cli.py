"""CLI surface: flags, subcommands, exit codes, artifacts."""

import subprocess
import sys

from ivbet.cli import main


def run_cli(args):
    return main(args)


class TestRunCommand:
    def test_empty_family_summary_reports_final_capital(self, capsys):
        code = run_cli(["run", "--oracle", "periodic:01", "--opponents", "none",
                        "--stages", "100", "--summary"])
        out = capsys.readouterr().out
        assert code == 0
        assert "final adversary capital: 101" in out

    def test_verified_run_exits_zero(self, capsys):
        code = run_cli(["run", "--oracle", "seed:1", "--stages", "2000", "--verify"])
        out = capsys.readouterr().out
        assert code == 0
        for check in ("conservation", "bookkeeping", "ratio-monotonicity", "follow-agreement",
                      "defeat-analysis"):
            assert f"PASS {check}" in out
        assert "FAIL" not in out

    def test_canonical_verified_run_at_length(self, capsys):
        code = run_cli(["run", "--oracle", "seed:42", "--opponents", "builtin:default",
                        "--stages", "10000", "--verify"])
        out = capsys.readouterr().out
        assert code == 0
        assert out.count("PASS") == 5 and "FAIL" not in out

    def test_trace_file_is_written(self, tmp_path, capsys):
        target = tmp_path / "out.csv"
        code = run_cli(["run", "--oracle", "seed:3", "--stages", "50", "--trace", str(target)])
        assert code == 0
        text = target.read_text()
        assert text.startswith("# oracle: seed:3\n")
        assert "stage,acting_e,reason,bit,matches_A,M_capital" in text
        assert len(text.splitlines()) == 53  # 2 comments + header + 50 rows

    def test_opponents_file_is_loaded(self, tmp_path, capsys):
        spec = tmp_path / "family.txt"
        spec.write_text("# two opponents\ns1 saver c=5\nb1 constant_bettor k=1 guess=all_ones capital=3\n")
        code = run_cli(["run", "--oracle", "periodic:10", "--opponents", str(spec),
                        "--stages", "40", "--summary"])
        out = capsys.readouterr().out
        assert code == 0
        assert "opponents: 2 [s1, b1]" in out

    def test_builtin_copycat_runs(self, capsys):
        code = run_cli(["run", "--oracle", "seed:5", "--opponents", "builtin:copycat",
                        "--stages", "60", "--summary"])
        out = capsys.readouterr().out
        assert code == 0
        assert "copycat: undefeated" in out

    def test_missing_opponents_file_is_a_usage_error(self, capsys):
        code = run_cli(["run", "--oracle", "seed:1", "--opponents", "missing.txt", "--stages", "5"])
        err = capsys.readouterr().err
        assert code == 1
        assert "cannot read" in err

    def test_malformed_opponents_file_reports_line(self, tmp_path, capsys):
        spec = tmp_path / "bad.txt"
        spec.write_text("x frobnicate z=1\n")
        code = run_cli(["run", "--oracle", "seed:1", "--opponents", str(spec), "--stages", "5"])
        err = capsys.readouterr().err
        assert code == 1
        assert "line 1" in err and "unknown kind" in err

    def test_bad_oracle_descriptor_is_a_usage_error(self, capsys):
        code = run_cli(["run", "--oracle", "noise:1", "--stages", "5"])
        assert code == 1
        assert "unknown oracle scheme" in capsys.readouterr().err

    def test_negative_stages_is_a_usage_error(self, capsys):
        code = run_cli(["run", "--oracle", "seed:1", "--stages", "-5"])
        assert code == 1

    def test_missing_required_flag_is_a_usage_error(self, capsys):
        assert run_cli(["run", "--stages", "5"]) == 1

    def test_plots_are_rendered(self, tmp_path, capsys):
        figures = tmp_path / "figs"
        code = run_cli(["run", "--oracle", "seed:2", "--stages", "120",
                        "--plots", str(figures)])
        assert code == 0
        for name in ("capitals.png", "opponents.png", "ratios.png"):
            path = figures / name
            assert path.exists() and path.stat().st_size > 0

    def test_window_flag_reaches_the_analysis(self, capsys):
        code = run_cli(["run", "--oracle", "seed:42", "--stages", "200",
                        "--window", "200", "--summary"])
        out = capsys.readouterr().out
        assert code == 0
        # the defeated bettors stay defeated even under the widest window
        assert "defeated" in out


class TestSweepCommand:
    def test_acceptance_bounds(self, capsys):
        code = run_cli(["sublemma-sweep", "60", "60", "30"])
        out = capsys.readouterr().out
        assert code == 0
        assert "0 counterexamples" in out
        assert "81900" in out

    def test_single_case(self, capsys):
        code = run_cli(["sublemma-sweep", "1", "1", "1"])
        out = capsys.readouterr().out
        assert code == 0
        assert "verified 1 cases" in out

    def test_malformed_bound_is_a_usage_error(self, capsys):
        assert run_cli(["sublemma-sweep", "1", "1", "nope"]) == 1

    def test_zero_bound_is_a_usage_error(self, capsys):
        assert run_cli(["sublemma-sweep", "0", "5", "5"]) == 1


class TestDeterminism:
    def test_identical_configs_produce_identical_bytes(self, tmp_path):
        paths = [tmp_path / "one.csv", tmp_path / "two.csv"]
        for path in paths:
            code = run_cli(["run", "--oracle", "seed:42", "--opponents", "builtin:default",
                            "--stages", "500", "--trace", str(path)])
            assert code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()


def test_module_entry_point(tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "ivbet", "run", "--oracle", "periodic:01",
         "--opponents", "none", "--stages", "10", "--summary"],
        capture_output=True, text=True,
    )
    assert result.returncode == 0
    assert "final adversary capital: 11" in result.stdout
