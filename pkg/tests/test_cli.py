import csv
import io
import json
import os
import subprocess
import sys
from math import sqrt

import numpy as np
import pytest

from adiabatic.cli import RunConfig, fmt, main, parse_flow, render_csv
from adiabatic.errors import ParseError, ZeroVector
from adiabatic.torus import FlowSpec


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def read_csv(text):
    lines = text.split("\n")
    assert lines[0] == "# schema=1"
    return list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))


class TestParseFlow:
    def test_rational(self):
        f = parse_flow("3/4")
        assert f.integer_direction == (3, 4)
        np.testing.assert_allclose(f.direction, [0.6, 0.8], atol=1e-16)

    def test_reduces(self):
        assert parse_flow("6/12/4").integer_direction == (3, 6, 2)

    def test_negative(self):
        assert parse_flow("5/-12").integer_direction == (5, -12)

    def test_numeric(self):
        f = parse_flow("num:0.70710678118654752,0.70710678118654752")
        assert not f.is_rational
        np.testing.assert_allclose(f.direction, [1 / sqrt(2)] * 2, atol=1e-16)

    def test_zero(self):
        with pytest.raises(ZeroVector):
            parse_flow("0/0")

    @pytest.mark.parametrize("text, pos", [("3/x", 2), ("a/4", 0), ("1/2/3/4", 0), ("num:1,zz", 6)])
    def test_position(self, text, pos):
        with pytest.raises(ParseError) as err:
            parse_flow(text)
        assert err.value.position == pos

    def test_numeric_not_unit(self):
        with pytest.raises(ParseError):
            parse_flow("num:1,1")

    def test_round_trip(self):
        for text in ("3/4", "1/2/2", "num:0.6,0.8"):
            f = parse_flow(text)
            assert parse_flow(str(f)) == f


class TestRunConfig:
    @pytest.mark.parametrize("cfg", [
        RunConfig("sweep", flow=FlowSpec.rational(3, 4), modes=5, tmin=1e-4),
        RunConfig("carriere", coverage=(-1.0, 1.0, 0.1), bound=3),
        RunConfig("fdstudy", flow=parse_flow("num:0.6,0.8"), mode=(2, 1), N=(16, 32)),
        RunConfig("perturb", trials=5, dim=4, seed=3, output="x.json", format="csv"),
    ])
    def test_round_trip(self, cfg):
        d = cfg.to_dict()
        assert RunConfig.from_dict(json.loads(json.dumps(d))) == cfg

    def test_default_format(self):
        assert RunConfig("sweep").format == "csv"
        assert RunConfig("perturb").format == "json"


class TestFormatting:
    def test_float_digits(self):
        assert fmt(0.1) == "0.10000000000000001"
        assert float(fmt(1 / 3)) == 1 / 3
        assert fmt(-0.0) == "0"

    def test_csv_layout(self):
        text = render_csv(["a", "b"], [(1, 2.5)])
        assert text == "# schema=1\na,b\n1,2.5\n"


class TestSweep:
    def test_basic_branch(self, capsys):
        code, out = run(["sweep", "--flow", "3/4", "--modes", "8", "--tmin", "1e-6"], capsys)
        assert code == 0
        assert out.split("\n")[1] == "mode_m,mode_n,sign,t,eigenvalue,class"
        rows = [r for r in read_csv(out) if (r["mode_m"], r["mode_n"], r["sign"]) == ("4", "-3", "1")]
        assert len(rows) == 7
        assert all(float(r["eigenvalue"]) == 5.0 and r["class"] == "convergent" for r in rows)

    def test_t3_header(self, capsys):
        code, out = run(["sweep", "--flow", "3/6/2", "--modes", "1", "--tmin", "1e-4"], capsys)
        assert code == 0 and out.split("\n")[1].startswith("mode_m,mode_n,mode_k,sign")

    def test_short_grid_exits_two(self, capsys):
        code, out = run(["sweep", "--flow", "3/6/2", "--modes", "1", "--tmin", "1e-2"], capsys)
        assert code == 2
        assert "ambiguous" in out

    def test_json(self, capsys):
        code, out = run(["sweep", "--flow", "3/4", "--modes", "2", "--format", "json"], capsys)
        d = json.loads(out)
        assert code == 0
        assert list(d)[0] == "config" and d["config"]["flow"] == "3/4"
        assert d["verification"]["part1"] and d["verification"]["part2"]


class TestCommands:
    def test_carriere_coverage(self, capsys):
        code, out = run(["carriere", "--coverage", "-50", "50", "0.01", "--bound", "200"], capsys)
        d = json.loads(out)
        assert code == 0 and d["coverage"] == 1.0 and d["points"] == 10001

    def test_carriere_mu(self, capsys):
        code, out = run(["carriere", "--mu", "4.0", "--bound", "3"], capsys)
        d = json.loads(out)
        assert d["status"] == "continuous" and d["witness"] == [0, 1]

    def test_perturb(self, capsys):
        code, out = run(["perturb", "--trials", "200", "--dim", "12", "--seed", "7"], capsys)
        d = json.loads(out)
        assert code == 0
        assert len(d["trials"]) == 200 and all(t["holds"] for t in d["trials"])

    def test_modes(self, capsys):
        code, out = run(["modes", "--flow", "3/4", "--modes", "1", "--t", "0.1"], capsys)
        rows = read_csv(out)
        row = next(r for r in rows if (r["mode_m"], r["mode_n"]) == ("1", "0"))
        assert float(row["lambda_plus"]) == pytest.approx(sqrt(36.64), rel=1e-15)

    def test_fdstudy(self, capsys):
        code, out = run(["fdstudy", "--flow", "3/4", "--mode", "1,0", "--format", "json"], capsys)
        d = json.loads(out)
        assert code == 0 and abs(d["order"] - 2.0) <= 0.1 and len(d["rows"]) == 4


class TestUsageErrors:
    @pytest.mark.parametrize("argv, flag", [
        (["sweep", "--flow", "0/0"], "--flow"),
        (["sweep", "--flow", "3/4", "--tmin", "3e-6"], "--tmin"),
        (["carriere"], "--coverage"),
        (["carriere", "--coverage", "1", "0", "0.1"], "--coverage"),
        (["perturb", "--dim", "1"], "--dim"),
        (["fdstudy", "--flow", "1/2/2"], "--flow"),
        (["fdstudy", "--flow", "3/4", "--N", "12"], "--N"),
        (["sweep", "--flow", "3/4", "--format", "xml"], "--format"),
    ])
    def test_exit_one_names_flag(self, argv, flag, capsys):
        with pytest.raises(SystemExit) as err:
            main(argv)
        assert err.value.code == 1
        assert flag in capsys.readouterr().err

    def test_no_partial_file(self, tmp_path, capsys):
        out = tmp_path / "x.json"
        with pytest.raises(SystemExit):
            main(["carriere", "--coverage", "1", "0", "0.1", "--output", str(out)])
        assert os.listdir(tmp_path) == []

    def test_bad_thread_env(self, monkeypatch, capsys):
        monkeypatch.setenv("ADIABATIC_THREADS", "zero")
        with pytest.raises(SystemExit) as err:
            main(["perturb", "--trials", "1"])
        assert err.value.code == 1


class TestFiles:
    def test_deterministic_files(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for p in (a, b):
            assert main(["sweep", "--flow", "3/4", "--modes", "3", "-o", str(p)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert b"\r" not in a.read_bytes()
        assert sorted(os.listdir(tmp_path)) == ["a.csv", "b.csv"]

    def test_threads_do_not_change_output(self, tmp_path, monkeypatch):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        main(["perturb", "--trials", "30", "--dim", "6", "-o", str(a)])
        monkeypatch.setenv("ADIABATIC_THREADS", "4")
        main(["perturb", "--trials", "30", "--dim", "6", "-o", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_module_entry_point(self, tmp_path):
        out = tmp_path / "c.json"
        res = subprocess.run([sys.executable, "-m", "adiabatic", "carriere", "--mu", "1.0", "--bound", "2",
                              "-o", str(out)], capture_output=True, text=True)
        assert res.returncode == 0
        assert json.loads(out.read_text())["witness"] == [1, 1]
