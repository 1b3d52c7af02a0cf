import json
import os

import numpy as np

from warpbench import cli


def write_scenario(tmp_path, payload, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


class TestScenarioValidation:
    def test_unknown_command(self, tmp_path, capsys):
        path = write_scenario(tmp_path, {"command": "nope"})
        assert cli.run_scenario(path, out=str(tmp_path / "out")) == 2
        assert "unknown command" in capsys.readouterr().err

    def test_unknown_keys_rejected(self, tmp_path):
        path = write_scenario(tmp_path, {"command": "sw-table", "junk": 1})
        out = tmp_path / "out"
        assert cli.run_scenario(path, out=str(out)) == 2
        assert not out.exists()

    def test_malformed_json_no_partial_outputs(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        out = tmp_path / "out"
        assert cli.run_scenario(str(path), out=str(out)) == 2
        assert not out.exists()

    def test_invalid_parameters_exit_2(self, tmp_path):
        path = write_scenario(tmp_path, {
            "command": "handle2", "lambda1": 0.2, "lambda2": 0.25,
            "a": 0.1, "b": 5.0, "eps": 0.1, "nu": 0.3})
        assert cli.run_scenario(path, out=str(tmp_path / "out")) == 2


class TestCommands:
    def test_wu_check_passes(self, tmp_path, capsys):
        path = write_scenario(tmp_path, {"command": "wu-check",
                                         "variant": "g00"})
        out = tmp_path / "out"
        assert cli.run_scenario(path, out=str(out)) == 0
        report = json.loads((out / "report.json").read_text())
        assert report["passed"]
        assert report["result"]["verdict"] == "pass"
        assert (out / "ricci.csv").exists()

    def test_sw_table_content(self, tmp_path):
        path = write_scenario(tmp_path, {"command": "sw-table"})
        out = tmp_path / "out"
        assert cli.run_scenario(path, out=str(out)) == 0
        report = json.loads((out / "report.json").read_text())
        assert report["result"]["omega9"]["matrix"] == [[1, 0], [1, 1]]
        assert report["result"]["total_classes"]["W1"] == "1 + a + (a^1)*"

    def test_conformal_margin(self, tmp_path):
        path = write_scenario(tmp_path, {"command": "conformal-margin",
                                         "c": 1.0, "C": 10.0})
        out = tmp_path / "out"
        assert cli.run_scenario(path, out=str(out)) == 0
        report = json.loads((out / "report.json").read_text())
        assert abs(report["result"]["margin"] - 0.87) < 1e-12

    def test_failing_margin_exit_1_and_named(self, tmp_path, capsys):
        path = write_scenario(tmp_path, {
            "command": "handle1", "n": 4, "K": 0.9, "lambda1": 0.5,
            "lambda2": 0.51, "eps1": 0.05, "eps2": 0.1, "delta": 0.05})
        assert cli.run_scenario(path, out=str(tmp_path / "out")) == 1
        err = capsys.readouterr().err
        assert "verification failed" in err

    def test_cone_family_emits_one_csv_per_sample(self, tmp_path):
        path = write_scenario(tmp_path, {
            "command": "cone", "n": 4, "K": 0.9, "eps1": 0.1, "eps2": 0.1,
            "delta": 0.02, "t_samples": [0.0, 0.5, 1.0]})
        out = tmp_path / "out"
        assert cli.run_scenario(path, out=str(out)) == 0
        csvs = sorted(p for p in os.listdir(out) if p.endswith(".csv"))
        assert len(csvs) == 3

    def test_handle1_sweeps_have_sorted_columns(self, tmp_path):
        path = write_scenario(tmp_path, {
            "command": "handle1", "n": 4, "K": 0.9, "lambda1": 0.985,
            "lambda2": 0.99, "eps1": 0.01, "eps2": 0.1, "delta": 0.05})
        out = tmp_path / "out"
        assert cli.run_scenario(path, out=str(out)) == 0
        header = (out / "cap_profile.csv").read_text().splitlines()[0]
        cols = header.split(",")
        assert cols[0] == "t"
        assert cols[1:] == sorted(cols[1:])

    def test_scan_command(self, tmp_path):
        path = write_scenario(tmp_path, {
            "command": "scan", "predicate": "s1",
            "box": {"lam": [0.4, 0.55]}, "resolution": 3, "budget": 8})
        out = tmp_path / "out"
        assert cli.run_scenario(path, out=str(out), seed=5) == 0
        report = json.loads((out / "report.json").read_text())
        assert report["result"]["entries"]


class TestDeterminism:
    def test_reports_byte_identical_across_runs(self, tmp_path):
        path = write_scenario(tmp_path, {"command": "projective",
                                         "d": 2, "n": 2, "s": 0.5})
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        assert cli.run_scenario(path, out=str(out1)) == 0
        assert cli.run_scenario(path, out=str(out2)) == 0
        assert (out1 / "report.json").read_bytes() == \
            (out2 / "report.json").read_bytes()
        assert (out1 / "ricci.csv").read_bytes() == \
            (out2 / "ricci.csv").read_bytes()


class TestEmitPlotData:
    def test_empty_report_writes_nothing(self, tmp_path):
        paths = cli.emit_plot_data({"sweeps": {}}, str(tmp_path))
        assert paths == []
        assert list(tmp_path.iterdir()) == []

    def test_sweep_round_trip(self, tmp_path):
        sweeps = {"demo": {"t": np.linspace(0, 1, 5),
                           "columns": {"b": np.arange(5.0),
                                       "a": np.ones(5)}}}
        paths = cli.emit_plot_data({}, str(tmp_path), sweeps)
        assert len(paths) == 1
        rows = np.loadtxt(paths[0], delimiter=",", skiprows=1)
        header = open(paths[0]).readline().strip()
        assert header == "t,a,b"
        assert rows.shape == (5, 3)
