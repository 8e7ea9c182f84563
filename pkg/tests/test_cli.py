import csv
import io
import subprocess
import sys

import pytest

from endofridge import cli, harness

PHYSICAL = ["--omega-h", "0.1", "--th", "2", "--tc", "1", "--gamma-h", "1e-3", "--gamma-c", "1e-6"]


def run(argv):
    out = io.StringIO()
    code = cli.main(argv, stdout=out)
    return code, out.getvalue()


def parse(text):
    return dict(line.split("=", 1) for line in text.splitlines())


class TestSolve:
    def test_prints_state_and_currents(self, tmp_path):
        target = tmp_path / "one.csv"
        code, text = run(["solve", *PHYSICAL, "--omega-c", "0.03", "--lambda", "1e-4", "--csv", str(target)])
        assert code == 0
        kv = parse(text)
        for key in ("n1", "n2", "n3", "nc", "Q_h", "Q_c", "power", "cop", "sigma", "first_law_residual"):
            assert key in kv
        assert float(kv["Q_c"]) > 0
        rows = list(csv.reader(io.StringIO(target.read_bytes().decode(), newline="")))
        assert rows[0] == list(kv) and rows[1] == list(kv.values())

    def test_missing_option(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["solve", *PHYSICAL])
        assert exc.value.code == 2
        assert "--omega-c" in capsys.readouterr().err

    def test_domain_error(self, capsys):
        code, _ = run(["solve", *PHYSICAL, "--omega-c", "0.2"])
        assert code == 2
        assert capsys.readouterr().err.startswith("error:")


class TestOptimize:
    def test_report(self, tmp_path):
        code, text = run(["optimize", *PHYSICAL, "--d", "3", "--tol", "1e-8", "--csv", str(tmp_path / "o.csv")])
        assert code == 0
        kv = parse(text)
        assert 0 < float(kv["omega_c"]) < 0.05
        assert float(kv["cop_ratio"]) == pytest.approx(0.6, rel=0.01)
        assert "bracket_lo" in kv and "window_hi" in kv
        assert (tmp_path / "o.csv").exists()

    def test_empty_window(self, capsys):
        code, _ = run(["optimize", *PHYSICAL, "--lambda", "0.06"])
        assert code == 2
        assert "window" in capsys.readouterr().err


class TestSweep:
    def test_writes_csv_and_summary(self, tmp_path):
        out = tmp_path / "s.csv"
        code, text = run(["sweep", "--samples", "4", "--seed", "3", "--out", str(out)])
        assert code == 0
        kv = parse(text)
        assert kv["count"] == "4" and kv["failures"] == "0"
        records, _ = harness.run_sweep(harness.SweepSpec(samples=4, seed=3))
        assert out.read_bytes().decode() == harness.records_to_csv(records)

    def test_requires_out(self):
        with pytest.raises(SystemExit):
            cli.main(["sweep", "--samples", "1"])

    def test_bad_range(self, tmp_path, capsys):
        code, _ = run(["sweep", "--samples", "1", "--th-min", "5", "--th-max", "1", "--out", str(tmp_path / "x.csv")])
        assert code == 2
        assert "t_hot" in capsys.readouterr().err


class TestCurve:
    def test_default(self):
        code, text = run(["curve", "--d", "3"])
        assert code == 0
        rows = list(csv.reader(io.StringIO(text, newline="")))
        assert rows[0] == ["eps_carnot", "cop_ratio"]
        assert len(rows) == 102
        assert rows[1] == ["0.0", "0.75"]
        assert rows[11] == ["1.0", repr(0.6)]

    def test_single_point(self):
        _, text = run(["curve", "--d", "1", "--eps-c-min", "2", "--points", "1"])
        assert text.splitlines()[1] == "2.0,0.25"


class TestSelftest:
    def test_exit_status(self):
        code, text = run(["selftest", "--samples", "10"])
        assert code == 0
        assert text.count("PASS") == 8


class TestConfigFile:
    def test_values_fill_missing_flags(self, tmp_path):
        cfg = tmp_path / "run.conf"
        cfg.write_text("# baths\nomega-h = 0.1\nth = 2\ntc = 1\ngamma_h = 1e-3\n--gamma-c = 1e-6\nomega_c = 0.03\n")
        code, text = run(["solve", "--config", str(cfg)])
        assert code == 0
        ref = run(["solve", *PHYSICAL, "--omega-c", "0.03"])[1]
        assert text == ref

    def test_flags_win(self, tmp_path):
        cfg = tmp_path / "run.conf"
        cfg.write_text("d = 1\npoints = 3\n")
        _, text = run(["curve", "--config", str(cfg), "--d", "3"])
        lines = text.splitlines()
        assert len(lines) == 4
        assert lines[1] == "0.0,0.75"

    @pytest.mark.parametrize("body", ["nonsense\n", "bogus = 1\n", "points = many\n", "lambda_mode = cubic\n"])
    def test_bad_files(self, tmp_path, body):
        cfg = tmp_path / "bad.conf"
        cfg.write_text(body)
        cmd = "sweep" if "lambda_mode" in body else "curve"
        with pytest.raises(SystemExit) as exc:
            cli.main([cmd, "--config", str(cfg)])
        assert exc.value.code == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            cli.main(["curve", "--config", str(tmp_path / "none.conf")])
        assert exc.value.code == 2

    def test_read_config(self, tmp_path):
        cfg = tmp_path / "c.conf"
        cfg.write_text("a-b = 1 # trailing\n\n  --c_d=x\n")
        assert cli.read_config(str(cfg)) == {"a_b": "1", "c_d": "x"}


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "endofridge", "curve", "--d", "3", "--points", "2"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[-1] == "10.0,0.21428571428571427"


def test_no_subcommand():
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2
