import pytest

from mwulab.cli import main


def _read(path):
    return path.read_bytes()


class TestRun:
    def test_writes_trial_csv(self, tmp_path, capsys):
        out = tmp_path / "trials.csv"
        code = main([
            "run", "--n", "40", "--adversary", "nonadaptive", "--trials", "4",
            "--seed", "1", "--out", str(out),
        ])
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "trial_id,n,tau,adversary,rounds,truncated,final_corrupted_weight,seed_used"
        assert len(lines) == 5

    def test_budget_exceeded_exit_code(self, tmp_path, capsys):
        out = tmp_path / "t.csv"
        code = main([
            "run", "--n", "10", "--adversary", "adaptive", "--tau", "3",
            "--trials", "1", "--enum-budget", "2", "--out", str(out),
        ])
        assert code == 3

    def test_invalid_config_exit_code(self, tmp_path):
        code = main([
            "run", "--n", "10", "--tau", "10", "--adversary", "nonadaptive",
            "--out", str(tmp_path / "x.csv"),
        ])
        assert code == 2

    def test_adaptive_cap_requires_override(self, tmp_path):
        args = [
            "run", "--n", "30", "--adversary", "adaptive", "--trials", "1",
            "--out", str(tmp_path / "x.csv"),
        ]
        assert main(args) == 2

    def test_unknown_flag_exits_two(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["run", "--n", "10", "--frobnicate", "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2


class TestSweep:
    def test_csv_and_svg(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        svg = tmp_path / "sweep.svg"
        code = main([
            "sweep", "--n", "20,30,40", "--adversary", "nonadaptive",
            "--trials", "3", "--seed", "2", "--out", str(out), "--svg", str(svg),
        ])
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "n,tau,adversary,trials,mean_rounds,std_rounds,errored_trials,seed"
        assert len(lines) == 4
        assert svg.read_bytes().startswith(b"<?xml")

    def test_bad_n_list(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--n", "20,abc", "--out", str(tmp_path / "x.csv")])
        assert exc.value.code == 2


class TestTrajectory:
    def test_csv(self, tmp_path, capsys):
        out = tmp_path / "traj.csv"
        code = main([
            "trajectory", "--n", "30", "--adversary", "nonadaptive",
            "--trials", "3", "--seed", "4", "--out", str(out),
        ])
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "round,mean_corrupted_weight,mean_good_weight,contributing_trials"
        assert len(lines) >= 2

    def test_requires_nonadaptive(self, tmp_path):
        code = main([
            "trajectory", "--n", "30", "--adversary", "none",
            "--out", str(tmp_path / "x.csv"),
        ])
        assert code == 2


class TestDeterminism:
    def test_repeated_invocations_are_byte_identical(self, tmp_path, capsys):
        results = []
        for tag in ("a", "b"):
            out = tmp_path / f"{tag}.csv"
            svg = tmp_path / f"{tag}.svg"
            code = main([
                "sweep", "--n", "20,30", "--adversary", "nonadaptive",
                "--trials", "3", "--seed", "5", "--out", str(out), "--svg", str(svg),
            ])
            assert code == 0
            results.append((_read(out), _read(svg)))
        assert results[0] == results[1]

    def test_eta_flag_roundtrip(self, tmp_path, capsys):
        out = tmp_path / "t.csv"
        code = main([
            "run", "--n", "12", "--eta", "0.25", "--trials", "2",
            "--out", str(out),
        ])
        assert code == 0
