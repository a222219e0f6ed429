"""End-to-end checks of every divider subcommand, including error paths."""

import json

import numpy as np
import pytest

from divider.cli import main
from divider.net import PolicyNet
from divider.raster import read_pgm
from divider.reference_nets import negate_output, two_line_net


@pytest.fixture
def weights_path(tmp_path):
    path = tmp_path / "two_line.json"
    two_line_net().save(path)
    return str(path)


def write_config(tmp_path, **overrides):
    cfg = dict(algorithm="ddpg", seed=0, episodes=2, steps_per_episode=40)
    cfg.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(cfg))
    return str(path)


class TestTrainCommand:
    def test_valid_config_trains_and_saves(self, tmp_path):
        cfg = write_config(tmp_path)
        out = tmp_path / "w.json"
        assert main(["train", "--config", cfg, "--out", str(out)]) == 0
        net = PolicyNet.load(out)
        assert net.dims == [2, 32, 32, 32, 1]
        curve = (tmp_path / "w.json.curve.csv").read_text().splitlines()
        assert curve[0] == "episode,return"
        assert len(curve) == 3

    def test_missing_config_exits_one(self, tmp_path, capsys):
        rc = main(["train", "--config", str(tmp_path / "nope.json"),
                   "--out", str(tmp_path / "w.json")])
        assert rc == 1
        assert "error" in capsys.readouterr().err

    def test_bad_discount_exits_one(self, tmp_path, capsys):
        cfg = write_config(tmp_path, gamma=1.5)
        rc = main(["train", "--config", cfg, "--out", str(tmp_path / "w.json")])
        assert rc == 1
        assert "invariant violation: discount" in capsys.readouterr().err

    def test_unknown_field_exits_one(self, tmp_path, capsys):
        cfg = write_config(tmp_path, turbo=True)
        rc = main(["train", "--config", cfg, "--out", str(tmp_path / "w.json")])
        assert rc == 1
        assert "unknown config field" in capsys.readouterr().err


class TestRasterCommand:
    def test_writes_csv_and_pgm(self, weights_path, tmp_path):
        out = str(tmp_path / "pattern")
        rc = main(["raster", "--weights", weights_path, "--out", out,
                   "--resolution", "32", "--mode", "sign"])
        assert rc == 0
        grid = np.loadtxt(out + ".csv", delimiter=",")
        assert grid.shape == (32, 32)
        px = read_pgm(out + ".pgm")
        assert px.shape == (32, 32)

    def test_missing_weights_exits_one(self, tmp_path, capsys):
        rc = main(["raster", "--weights", str(tmp_path / "none.json"),
                   "--out", str(tmp_path / "x")])
        assert rc == 1

    def test_bad_resolution_exits_one(self, weights_path, tmp_path, capsys):
        rc = main(["raster", "--weights", weights_path,
                   "--out", str(tmp_path / "x"), "--resolution", "4"])
        assert rc == 1

    def test_idempotent_outputs(self, weights_path, tmp_path):
        out = str(tmp_path / "p")
        args = ["raster", "--weights", weights_path, "--out", out,
                "--resolution", "24"]
        assert main(args) == 0
        first = (open(out + ".csv", "rb").read(), open(out + ".pgm", "rb").read())
        assert main(args) == 0
        second = (open(out + ".csv", "rb").read(), open(out + ".pgm", "rb").read())
        assert first == second


class TestAnalyzeCommand:
    def test_full_report(self, weights_path, tmp_path):
        report = tmp_path / "report.txt"
        rc = main(["analyze", "--weights", weights_path, "--out", str(report),
                   "--radii", "10", "100"])
        assert rc == 0
        text = report.read_text()
        assert "regions: 4" in text
        assert "dead zones: 0" in text
        crossings = (tmp_path / "report.txt.crossings.csv").read_text()
        assert crossings.startswith("radius,angle_deg,p,v")

    def test_negated_net_reports_dead_zone(self, tmp_path):
        path = tmp_path / "neg.json"
        negate_output(two_line_net()).save(path)
        report = tmp_path / "neg.txt"
        rc = main(["analyze", "--weights", str(path), "--out", str(report),
                   "--radii", "10"])
        assert rc == 0
        assert "dead zones: 2" in report.read_text()

    def test_idempotent_report(self, weights_path, tmp_path):
        report = tmp_path / "r.txt"
        args = ["analyze", "--weights", weights_path, "--out", str(report),
                "--radii", "10", "100"]
        assert main(args) == 0
        first = report.read_bytes()
        assert main(args) == 0
        assert report.read_bytes() == first

    def test_general_net_partial_with_warning(self, tmp_path, capsys):
        rng = np.random.default_rng(0)
        net = PolicyNet.random(hidden=(8, 8), rng=rng, simplified=False)
        path = tmp_path / "gen.json"
        net.save(path)
        report = tmp_path / "gen.txt"
        rc = main(["analyze", "--weights", str(path), "--out", str(report)])
        assert rc == 0
        assert "division theory requires simplified network" in \
            capsys.readouterr().err
        assert "division theory requires simplified network" in \
            report.read_text()


class TestCompareCommand:
    def test_oracle_baseline_rows(self, tmp_path):
        out = tmp_path / "cmp.csv"
        rc = main(["compare", "--oracle", "--starts", "-10", "-20", "-40",
                   "--out", str(out), "--dt", "0.001"])
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 4
        header = lines[0].split(",")
        rows = {float(l.split(",")[0]): dict(zip(header, map(float, l.split(","))))
                for l in lines[1:]}
        for p0 in (-10.0, -20.0, -40.0):
            row = rows[p0]
            assert row["overshoot"] < 0.05
            t_opt = 2.0 * np.sqrt(abs(p0) / 5.0)
            assert row["optimal_time"] == pytest.approx(t_opt, rel=1e-8)
            assert row["ideal_decel_p"] == pytest.approx(p0 / 2.0, abs=1e-9)
            assert row["decel_gap"] < 0.1

    def test_net_controller(self, weights_path, tmp_path):
        out = tmp_path / "cmp.csv"
        rc = main(["compare", "--weights", weights_path, "--starts", "-10",
                   "--out", str(out)])
        assert rc == 0
        assert len(out.read_text().strip().splitlines()) == 2

    def test_empty_starts_exits_one(self, weights_path, tmp_path, capsys):
        rc = main(["compare", "--weights", weights_path, "--starts",
                   "--out", str(tmp_path / "c.csv")])
        assert rc == 1
        assert "error" in capsys.readouterr().err


class TestRolloutCommand:
    def test_writes_trajectory_csv(self, weights_path, tmp_path):
        out = tmp_path / "traj.csv"
        rc = main(["rollout", "--weights", weights_path, "--start", "-10", "0",
                   "--out", str(out)])
        assert rc == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "t,p,v,a"
        first = [float(x) for x in lines[1].split(",")]
        assert first[:3] == [0.0, -10.0, 0.0]

    def test_oracle_rollout(self, tmp_path):
        out = tmp_path / "traj.csv"
        rc = main(["rollout", "--oracle", "--start", "-10", "0",
                   "--out", str(out), "--dt", "0.001"])
        assert rc == 0
        data = np.loadtxt(out, delimiter=",", skiprows=1)
        assert abs(data[-1, 1]) < 0.05  # ends near the origin


class TestUsageErrors:
    def test_no_command_exits_one(self, capsys):
        assert main([]) == 1

    def test_unknown_command_exits_one(self, capsys):
        assert main(["frobnicate"]) == 1

    def test_missing_required_flag_exits_one(self, capsys):
        assert main(["rollout", "--start", "0", "0"]) == 1
