import json
import pathlib
import subprocess
import sys

from qchan import binary_entropy, capacity_amplitude_damping, chi_dep_curve
from qchan.cli import main

DATA = pathlib.Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0, out
    return json.loads(out)


def parse_csv(text):
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


class TestCapacityCommand:
    def test_noiseless_ad(self, capsys):
        report = run_json(capsys, "capacity", "--channel", "ad", "--gamma", "0")
        assert report["schema_version"] == 1
        assert report["outputs"]["capacity_bits"] == 1.0
        assert "wall_time_s" in report

    def test_dead_depolarizing(self, capsys):
        report = run_json(capsys, "capacity", "--channel", "dep", "--lambda", "1")
        assert report["outputs"]["capacity_bits"] == 0.0

    def test_golden_gamma_half(self, capsys):
        report = run_json(capsys, "capacity", "--channel", "ad", "--gamma", "0.5")
        expected = capacity_amplitude_damping(0.5)
        assert report["outputs"]["capacity_bits"] == expected.capacity_bits
        assert report["outputs"]["a_max"] == expected.a_max
        assert abs(report["outputs"]["capacity_bits"] - 0.4717293905985839) < 1e-9

    def test_invalid_parameter_exits_2(self, capsys):
        code, _, err = run(capsys, "capacity", "--channel", "ad", "--gamma", "1.5")
        assert code == 2
        assert "gamma" in err

    def test_missing_parameter_exits_2(self, capsys):
        code, _, _ = run(capsys, "capacity", "--channel", "ad")
        assert code == 2

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, "capacity", "--channel", "dep", "--lambda", "0.5",
                           "--format", "csv")
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["capacity_bits", "a_max", "residual", "iterations", "method"]
        assert rows[0][4] == "closed_form"


class TestCurveCommand:
    def test_ad_endpoints_and_monotone(self, capsys, tmp_path):
        out_path = tmp_path / "curve.csv"
        code, _, _ = run(capsys, "curve", "--family", "ad", "--step", "0.05",
                         "--out", str(out_path))
        assert code == 0
        header, rows = parse_csv(out_path.read_text())
        assert header == ["param", "capacity_bits", "a_max"]
        caps = [float(r[1]) for r in rows]
        assert caps[0] == 1.0 and caps[-1] == 0.0
        assert all(x >= y for x, y in zip(caps, caps[1:]))

    def test_dep_matches_closed_form(self, capsys, tmp_path):
        out_path = tmp_path / "dep.csv"
        run(capsys, "curve", "--family", "dep", "--step", "0.1", "--out", str(out_path))
        _, rows = parse_csv(out_path.read_text())
        for row in rows:
            lam, cap = float(row[0]), float(row[1])
            assert cap == 1.0 - binary_entropy(0.5 * lam)

    def test_byte_stable_and_roundtrip(self, capsys, tmp_path):
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        args = ("curve", "--family", "ad", "--step", "0.02")
        run(capsys, *args, "--out", str(first))
        run(capsys, *args, "--out", str(second))
        assert first.read_bytes() == second.read_bytes()
        _, rows = parse_csv(first.read_text())
        for row in rows:
            # 17 significant digits reproduce the binary doubles exactly
            param = float(row[0])
            result = capacity_amplitude_damping(param)
            assert float(row[1]) == result.capacity_bits
            assert float(row[2]) == result.a_max

    def test_matches_committed_golden(self, capsys, tmp_path):
        out_path = tmp_path / "golden.csv"
        run(capsys, "curve", "--family", "ad", "--start", "0", "--end", "1",
            "--step", "0.01", "--out", str(out_path))
        assert out_path.read_bytes() == (DATA / "curve_ad_golden.csv").read_bytes()

    def test_bad_range_exits_2(self, capsys):
        code, _, _ = run(capsys, "curve", "--family", "ad", "--start", "0.8",
                         "--end", "0.2")
        assert code == 2

    def test_unwritable_path_exits_4(self, capsys):
        code, _, _ = run(capsys, "curve", "--family", "ad", "--step", "0.5",
                         "--out", "/nonexistent-dir/out.csv")
        assert code == 4

    def test_threads_give_identical_output(self, capsys, tmp_path):
        serial = tmp_path / "serial.csv"
        threaded = tmp_path / "threaded.csv"
        run(capsys, "curve", "--family", "ad", "--step", "0.05", "--out", str(serial))
        run(capsys, "curve", "--family", "ad", "--step", "0.05", "--threads", "4",
            "--out", str(threaded))
        assert serial.read_bytes() == threaded.read_bytes()

    def test_json_format(self, capsys):
        report = run_json(capsys, "curve", "--family", "dep", "--step", "0.25",
                          "--format", "json")
        assert report["command"] == "curve"
        assert len(report["rows"]) == 5


class TestChiCurvesCommand:
    def test_columns_and_capacity_row(self, capsys, tmp_path):
        out_path = tmp_path / "chi.csv"
        run(capsys, "chi-curves", "--gamma", "0.5", "--lambda", "0.24",
            "--a-step", "0.05", "--out", str(out_path))
        header, rows = parse_csv(out_path.read_text())
        assert header == ["a", "chi_ad", "chi_dep", "min_chi", "crossing"]
        half = [r for r in rows if float(r[0]) == 0.5][0]
        assert float(half[2]) == 1.0 - binary_entropy(0.12)

    def test_chi_ad_maximized_right_of_half(self, capsys, tmp_path):
        out_path = tmp_path / "chi.csv"
        run(capsys, "chi-curves", "--gamma", "0.5", "--lambda", "0.24",
            "--a-step", "0.01", "--out", str(out_path))
        _, rows = parse_csv(out_path.read_text())
        ad = [float(r[1]) for r in rows]
        a = [float(r[0]) for r in rows]
        assert a[ad.index(max(ad))] >= 0.5

    def test_crossing_flagged_and_minmax_separation(self, capsys, tmp_path):
        out_path = tmp_path / "chi.csv"
        run(capsys, "chi-curves", "--gamma", "0.5", "--lambda", "0.24",
            "--a-step", "0.01", "--out", str(out_path))
        _, rows = parse_csv(out_path.read_text())
        crossings = [r for r in rows if r[4] == "1"]
        assert crossings, "crossing row missing"
        assert any(0.5 < float(r[0]) < 0.6 for r in crossings)
        ad_max = max(float(r[1]) for r in rows)
        dep_max = max(float(r[2]) for r in rows)
        min_max = max(float(r[3]) for r in rows)
        assert min_max < min(ad_max, dep_max)

    def test_values_match_library(self, capsys, tmp_path):
        out_path = tmp_path / "chi.csv"
        run(capsys, "chi-curves", "--gamma", "0.3", "--lambda", "0.4",
            "--a-step", "0.25", "--out", str(out_path))
        _, rows = parse_csv(out_path.read_text())
        for row in rows:
            assert float(row[2]) == chi_dep_curve(0.4, float(row[0]))


class TestEllipseCommand:
    def test_fixed_point_row(self, capsys, tmp_path):
        out_path = tmp_path / "ellipse.csv"
        run(capsys, "ellipse", "--gamma", "0.5", "--n-points", "8",
            "--out", str(out_path))
        header, rows = parse_csv(out_path.read_text())
        assert header == ["a_in", "b_in", "a_out", "b_out", "optimal"]
        first = rows[0]
        assert float(first[0]) == 1.0 and float(first[2]) == 1.0

    def test_identity_channel_copies_inputs(self, capsys, tmp_path):
        out_path = tmp_path / "ellipse.csv"
        run(capsys, "ellipse", "--gamma", "0", "--n-points", "16",
            "--out", str(out_path))
        _, rows = parse_csv(out_path.read_text())
        for row in rows:
            assert row[0] == row[2] and row[1] == row[3]

    def test_optimal_rows_are_mirror_pair(self, capsys, tmp_path):
        out_path = tmp_path / "ellipse.csv"
        run(capsys, "ellipse", "--gamma", "0.5", "--n-points", "8",
            "--out", str(out_path))
        _, rows = parse_csv(out_path.read_text())
        optimal = [r for r in rows if r[4] == "1"]
        assert len(optimal) == 2
        assert optimal[0][0] == optimal[1][0]
        assert float(optimal[0][1]) == -float(optimal[1][1])
        a_max = capacity_amplitude_damping(0.5).a_max
        assert float(optimal[0][0]) == a_max

    def test_too_few_points_exits_2(self, capsys):
        code, _, _ = run(capsys, "ellipse", "--gamma", "0.5", "--n-points", "2")
        assert code == 2


class TestMinimaxCommand:
    def test_identical_channels_zero_gap(self, capsys):
        report = run_json(capsys, "minimax", "--ch1", "ad:0.5", "--ch2", "ad:0.5")
        assert abs(report["outputs"]["separation_gap"]) < 1e-12

    def test_two_depolarizing_closed_form(self, capsys):
        report = run_json(capsys, "minimax", "--ch1", "dep:0.3", "--ch2", "dep:0.7")
        expected = 1.0 - binary_entropy(0.35)
        assert abs(report["outputs"]["capacity_bits"] - expected) < 1e-8

    def test_fixture_gap_strictly_positive(self, capsys):
        report = run_json(capsys, "minimax", "--gamma", "0.5", "--lambda", "0.24")
        assert report["outputs"]["separation_gap"] > 1e-3
        assert report["outputs"]["min_branch_capacity"] == min(
            report["outputs"]["branch_capacity_1"], report["outputs"]["branch_capacity_2"]
        )

    def test_certify_flag(self, capsys):
        report = run_json(capsys, "minimax", "--gamma", "0.5", "--lambda", "0.24",
                          "--certify", "--a-grid", "101", "--prob-grid", "10",
                          "--bound", "1e-3")
        cert = report["outputs"]["certification"]
        assert abs(cert["difference"]) <= 1e-3
        assert cert["search_size"] > 0

    def test_mixed_spec_flags_exit_2(self, capsys):
        code, _, _ = run(capsys, "minimax", "--ch1", "ad:0.5")
        assert code == 2


class TestCertifyCommand:
    def test_noiseless_exact(self, capsys):
        report = run_json(capsys, "certify", "--channel", "ad", "--gamma", "0",
                          "--a-grid", "11", "--prob-grid", "4")
        assert report["outputs"]["difference"] == 0.0

    def test_depolarizing_within_bound(self, capsys):
        report = run_json(capsys, "certify", "--channel", "dep", "--lambda", "0.5",
                          "--a-grid", "21", "--prob-grid", "8")
        assert 0.0 <= report["outputs"]["difference"] <= 2e-4

    def test_budget_exceeded_exits_5(self, capsys):
        code, _, _ = run(capsys, "certify", "--channel", "ad", "--gamma", "0.5",
                         "--a-grid", "201", "--n-states", "4", "--budget", "1000")
        assert code == 5

    def test_failed_bound_exits_6(self, capsys):
        code, _, _ = run(capsys, "certify", "--channel", "ad", "--gamma", "0.5",
                         "--a-grid", "11", "--prob-grid", "4", "--bound", "1e-12")
        assert code == 6


class TestConfigPrecedence:
    def test_config_file_supplies_tol(self, capsys, tmp_path):
        cfg = tmp_path / "qchan.toml"
        cfg.write_text("tol = 1e-6  # loose bracket\nthreads = 2\n")
        report = run_json(capsys, "capacity", "--channel", "ad", "--gamma", "0.5",
                          "--config", str(cfg))
        assert report["inputs"]["tol"] == 1e-6
        assert report["inputs"]["threads"] == 2

    def test_flag_beats_config(self, capsys, tmp_path):
        cfg = tmp_path / "qchan.toml"
        cfg.write_text("tol = 1e-6\n")
        report = run_json(capsys, "capacity", "--channel", "ad", "--gamma", "0.5",
                          "--config", str(cfg), "--tol", "1e-9")
        assert report["inputs"]["tol"] == 1e-9

    def test_env_threads_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("QCHAN_THREADS", "3")
        report = run_json(capsys, "capacity", "--channel", "ad", "--gamma", "0.5")
        assert report["inputs"]["threads"] == 3

    def test_seed_recorded(self, capsys):
        report = run_json(capsys, "capacity", "--channel", "ad", "--gamma", "0.5",
                          "--seed", "7")
        assert report["inputs"]["seed"] == 7


class TestJsonFileOutput:
    def test_file_omits_wall_time_and_is_byte_stable(self, capsys, tmp_path):
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        run(capsys, "capacity", "--channel", "ad", "--gamma", "0.5", "--out", str(first))
        run(capsys, "capacity", "--channel", "ad", "--gamma", "0.5", "--out", str(second))
        assert first.read_bytes() == second.read_bytes()
        report = json.loads(first.read_text())
        assert "wall_time_s" not in report
        assert report["outputs"]["capacity_bits"] == capacity_amplitude_damping(0.5).capacity_bits


def test_module_entry_point_smoke():
    proc = subprocess.run(
        [sys.executable, "-m", "qchan", "capacity", "--channel", "dep", "--lambda", "0.5"],
        capture_output=True, text=True,
        cwd=str(pathlib.Path(__file__).parent.parent),
        env={"PYTHONPATH": "src", "PATH": "/usr/bin:/bin"},
    )
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert abs(report["outputs"]["capacity_bits"] - (1.0 - binary_entropy(0.25))) < 1e-15
