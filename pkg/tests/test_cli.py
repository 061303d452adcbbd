import json
import math
import subprocess
import sys

import numpy as np
import pytest

from lctpr import SampledFunction, Signal, forward, preset, same_class
from lctpr import io
from lctpr.cli import main


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, x in {
        "delta": Signal(0, [1.0]),
        "x": Signal(-1, [1 + 0.5j, -0.3, 2j, 0.7 - 1j, 1.2]),
        "x2": Signal(0, [1, -4]),
    }.items():
        paths[name] = tmp_path / f"{name}.json"
        io.write_signal(paths[name], x)
    paths["ind"] = tmp_path / "ind.json"
    io.write_function(paths["ind"], SampledFunction(-1, 1, np.ones(4096)))
    paths["gauss"] = tmp_path / "gauss.json"
    io.write_function(paths["gauss"], SampledFunction.from_callable(lambda t: np.exp(-2 * t**2), -3, 3, 2048))
    return paths


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


class TestSignalFile:
    def test_roundtrip(self, tmp_path):
        x = Signal(-3, [1 / 3 + 0.1j, 2e-300, -np.pi])
        io.write_signal(tmp_path / "s.json", x)
        y = io.read_signal(tmp_path / "s.json")
        assert y.start == x.start and np.array_equal(y.values, x.values)

    def test_function_roundtrip(self, tmp_path):
        f = SampledFunction(-0.1, 0.7, [1 / 7, 2j, 3])
        io.write_function(tmp_path / "f.json", f)
        g = io.read_function(tmp_path / "f.json")
        assert (g.t0, g.t1) == (f.t0, f.t1) and np.array_equal(g.samples, f.samples)

    @pytest.mark.parametrize("text", [
        "not json",
        '{"format_version": 2, "start": 0, "values": [[1, 0]]}',
        '{"format_version": 1, "start": 0.5, "values": [[1, 0]]}',
        '{"format_version": 1, "start": 0, "values": []}',
        '{"format_version": 1, "start": 0, "values": [[1]]}',
        '{"format_version": 1, "start": 0, "values": [[0, 0], [1, 0]]}',
    ])
    def test_bad_files(self, tmp_path, text):
        (tmp_path / "bad.json").write_text(text)
        with pytest.raises(io.FileFormatError):
            io.read_signal(tmp_path / "bad.json")

    def test_seventeen_digits(self):
        assert io.dumps([0.1]) == "[0.10000000000000001]"


class TestTransform:
    def test_delta_fourier(self, files, capsys):
        code, out, _ = run(["transform", files["delta"], "--preset", "fourier", "--points", 8], capsys)
        assert code == 0
        lines = out.split("\n")
        assert lines[0] == "omega,re,im,abs" and out.endswith("\n") and "\r" not in out
        mags = [float(r.split(",")[3]) for r in lines[1:] if r]
        assert len(mags) == 8 and np.allclose(mags, (2 * np.pi) ** -0.5, rtol=1e-15)

    def test_abcd_equals_preset(self, files, capsys):
        _, a, _ = run(["transform", files["x"], "--abcd", "0,1,-1,0"], capsys)
        _, b, _ = run(["transform", files["x"], "--preset", "fourier"], capsys)
        assert a == b

    def test_frft_matches_library(self, files, capsys):
        _, out, _ = run(["transform", files["x"], "--preset", "frft:0.7853981633974483"], capsys)
        rows = np.array([[float(v) for v in r.split(",")] for r in out.strip().split("\n")[1:]])
        x = io.read_signal(files["x"])
        ref = forward(x, preset("frft", math.pi / 4), rows[:, 0])
        assert len(rows) == 4 * x.N
        assert np.allclose(rows[:, 1] + 1j * rows[:, 2], ref, rtol=0, atol=1e-15)

    def test_degenerate_frft(self, files, capsys):
        code, _, err = run(["transform", files["x"], "--preset", f"frft:{math.pi!r}"], capsys)
        assert code == 3 and "b" in err and "zero" in err

    def test_bad_determinant_and_parse(self, files, capsys):
        assert run(["transform", files["x"], "--abcd", "1,1,1,1"], capsys)[0] == 3
        assert run(["transform", files["x"], "--abcd", "1,1,1"], capsys)[0] == 2
        assert run(["transform", files["x"].with_name("missing.json"), "--preset", "fourier"], capsys)[0] == 2


class TestEnumerate:
    def test_n2(self, files, capsys):
        code, out, _ = run(["enumerate", files["x2"], "--preset", "frft:0.4"], capsys)
        rep = json.loads(out)
        assert code == 0 and rep["count"] == 1 and len(rep["classes"]) == 1

    def test_n1(self, files, capsys):
        rep = json.loads(run(["enumerate", files["delta"], "--preset", "fourier"], capsys)[1])
        assert rep["count"] == 1 and rep["classes"][0]["values"][0][0] > 0
        assert rep["classes"][0]["values"][0][1] == 0

    def test_n5(self, files, capsys, tmp_path):
        rng = np.random.default_rng(2)
        x = Signal(0, rng.standard_normal(5) + 1j * rng.standard_normal(5))
        io.write_signal(tmp_path / "r.json", x)
        code, out, _ = run(["enumerate", tmp_path / "r.json", "--abcd", "1,0.5,-2,0"], capsys)
        rep = json.loads(out)
        assert code == 0 and 1 <= rep["count"] <= 8
        assert all(v["pass"] for v in rep["verification"])
        p = preset("fourier").__class__(1, 0.5, -2, 0)
        classes = [io.signal_from_dict(c) for c in rep["classes"]]
        assert any(same_class(c, x, p) for c in classes)

    def test_pairing_error_exit(self, files, capsys):
        # at zero tolerance a rounding-level miss of 1/conj(g) leaves a zero unpaired
        io.write_signal(files["x"].with_name("dbl.json"), Signal(0, [1, 0.3 - 2j, -1.5, 0.7j]))
        code, _, err = run(["enumerate", files["x"].with_name("dbl.json"), "--preset", "fourier",
                            "--pair-tol", "0"], capsys)
        assert code == 4 and "enumerate" in err


class TestVerifyAndTrivials:
    def test_trivials_roundtrip(self, files, capsys, tmp_path):
        out_dir = tmp_path / "out"
        code, out, _ = run(["trivials", files["x"], "--preset", "frft:0.7853981633974483",
                            "rotate:3.14159", "shift:2", "reflect", "--out-dir", out_dir], capsys)
        assert code == 0
        rep = json.loads(out)["outputs"]
        assert [r["variant"] for r in rep] == ["rotate:3.14159", "shift:2", "reflect"]
        for r in rep:
            c2, o2, _ = run(["verify", files["x"], r["path"], "--preset", "frft:0.7853981633974483"], capsys)
            assert c2 == 0 and json.loads(o2)["pass"]

    def test_rotate_delta(self, files, capsys, tmp_path):
        run(["trivials", files["delta"], "--preset", "fourier", "rotate:3.14159", "--out-dir", tmp_path], capsys)
        y = io.read_signal(tmp_path / "delta.rotate_3.14159.json")
        assert abs(y.values[0] + 1) < 1e-5

    def test_shift_fourier_plain(self, files, capsys, tmp_path):
        run(["trivials", files["x"], "--preset", "fourier", "shift:2", "--out-dir", tmp_path], capsys)
        y = io.read_signal(tmp_path / "x.shift_2.json")
        x = io.read_signal(files["x"])
        assert y.start == x.start + 2 and np.array_equal(y.values, x.values)

    def test_verify_scaled_fails(self, files, capsys, tmp_path):
        x = io.read_signal(files["x"])
        io.write_signal(tmp_path / "2x.json", Signal(x.start, 2 * x.values))
        code, out, _ = run(["verify", files["x"], tmp_path / "2x.json", "--preset", "fourier"], capsys)
        assert code == 1 and json.loads(out)["max_rel_err"] == pytest.approx(1.0)

    def test_bad_variant(self, files, capsys, tmp_path):
        code, _, _ = run(["trivials", files["x"], "--preset", "fourier", "flip", "--out-dir", tmp_path], capsys)
        assert code == 2


class TestContinuousCheck:
    def test_prop31_rotate(self, files, capsys):
        code, out, _ = run(["continuous-check", files["ind"], "--preset", "fourier", "prop31",
                            "--variant", "rotate:2.1"], capsys)
        assert code == 0 and json.loads(out)["max_deviation"] < 1e-12

    def test_prop31_shift(self, files, capsys):
        rep = json.loads(run(["continuous-check", files["ind"], "--preset", "fresnel:0.5", "prop31",
                              "--variant", "shift:0.7", "--nodes", 4096], capsys)[1])
        assert rep["max_deviation"] < 1e-7 and rep["nodes"] == 4096

    def test_autocorr(self, files, capsys):
        rep = json.loads(run(["continuous-check", files["gauss"], "--preset", "frft:0.7853981633974483",
                              "autocorr", "--nodes", 2048], capsys)[1])
        assert rep["max_deviation"] < 1e-5 and len(rep["deviation"]) == 16

    def test_degenerate(self, files, capsys):
        assert run(["continuous-check", files["ind"], "--abcd", "1,0,0,1", "autocorr"], capsys)[0] == 3


def test_deterministic_subprocess(files):
    cmd = [sys.executable, "-m", "lctpr", "enumerate", str(files["x"]), "--preset", "frft:0.3"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["count"] >= 1
