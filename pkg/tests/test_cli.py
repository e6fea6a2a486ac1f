import json
import subprocess
import sys

import numpy as np
import pytest

from csquant import cli, fock, frame, measure


def run(args, capsys):
    code = cli.main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_cs_mode(capsys):
    code, out, _ = run(["cs", "--symbol", "z*zbar", "--dim", "8"], capsys)
    assert code == 0
    a = fock.operator_from_json(json.loads(out))
    assert np.allclose(a, np.diag(np.arange(1, 9)), atol=1e-12)


def test_cs_side_outputs(tmp_path, capsys):
    spec, grid = tmp_path / "spec.csv", tmp_path / "grid.csv"
    code, _, _ = run(["cs", "--symbol", "q^2 + p^2", "--dim", "40", "--spectrum", str(spec),
                      "--lower-grid", str(grid), "--points", "3"], capsys)
    assert code == 0
    rows = spec.read_text().splitlines()
    assert rows[0] == "index,re,im" and len(rows) == 41
    assert float(rows[1].split(",")[1]) == pytest.approx(2.0)
    assert len(grid.read_text().splitlines()) == 10


def test_csv_operator_format(capsys):
    code, out, _ = run(["cs", "--symbol", "1", "--dim", "3", "--format", "csv"], capsys)
    lines = out.splitlines()
    assert code == 0 and lines[0] == "row,col,re,im" and len(lines) == 10


def test_finite_mode(tmp_path, capsys):
    lower = tmp_path / "lower.csv"
    code, out, _ = run(["finite", "--n", "5", "--symbol", "1,0,0,0,0", "--lower", str(lower)], capsys)
    assert code == 0
    a = fock.operator_from_json(json.loads(out))
    assert np.allclose(a, 0.4 * np.diag([1.0, 0.0]))
    vals = [float(r.split(",")[1]) for r in lower.read_text().splitlines()[1:]]
    assert vals[1] == pytest.approx(0.4 * 0.0954915028125263)


def test_finite_rejects_two_arms(capsys):
    code, out, err = run(["finite", "--n", "2", "--symbol", "1,1"], capsys)
    assert code == cli.EXIT_CONTRACT and out == "" and "N >= 3" in err


def test_prime_mode(capsys):
    code, out, _ = run(["prime", "--region", "disk:r=1", "--dim", "6"], capsys)
    a = fock.operator_from_json(json.loads(out))
    assert code == 0 and a[0, 0].real == pytest.approx(1 - np.exp(-1))
    code, _, err = run(["prime", "--region", "blob:r=1"], capsys)
    assert code == cli.EXIT_CONTRACT and "blob" in err


def test_general_mode(tmp_path, capsys):
    m = tmp_path / "m.json"
    vals = tmp_path / "f.json"
    code, out, _ = run(["measure", "polygon", "--n", "5"], capsys)
    m.write_text(out)
    vals.write_text(json.dumps({"0": 1, "1": 2, "2": [0, 1], "3": 0, "4": 0}))
    code, out, err = run(["general", "--measure", str(m), "--symbol-values", str(vals)], capsys)
    assert code == 0 and "resolution ok" in err
    want = frame.quantize_finite(np.array([1, 2, 1j, 0, 0]), frame.build_frame(5))
    assert np.allclose(fock.operator_from_json(json.loads(out)), want)


def test_general_rejects_perturbed_measure(tmp_path, capsys):
    pm = measure.measure_to_json(measure.polygon_measure(frame.build_frame(5)))
    pm["atoms"][0]["weight"] *= 1.1
    m, vals, out_path = tmp_path / "m.json", tmp_path / "f.json", tmp_path / "out.json"
    m.write_text(json.dumps(pm))
    vals.write_text("[1, 1, 1, 1, 1]")
    args = ["general", "--measure", str(m), "--symbol-values", str(vals), "--out", str(out_path)]
    code, _, err = run(args, capsys)
    assert code == cli.EXIT_CONTRACT and "FAILED" in err
    assert not out_path.exists()
    code, _, _ = run(args + ["--override"], capsys)
    assert code == 0 and out_path.exists()


def test_ordering_mode(capsys):
    code, out, _ = run(["ordering", "--symbol", "q*p^2", "--dim", "12"], capsys)
    rep = json.loads(out)
    assert code == 0
    assert rep["differences"]["weyl_symmetric"]["nested_symmetric"] < 1e-12
    code, _, err = run(["ordering", "--symbol", "q*p", "--schemes", "weird"], capsys)
    assert code == cli.EXIT_PARSE


def test_parse_error_exit_code(tmp_path, capsys):
    out_path = tmp_path / "o.json"
    code, out, err = run(["cs", "--symbol", "q +* p", "--out", str(out_path)], capsys)
    assert code == cli.EXIT_PARSE
    assert "column" in err and out == ""
    assert not out_path.exists()


def test_quadrature_contract_exit_code(capsys):
    code, _, err = run(["cs", "--symbol", "z^4*zbar^4", "--dim", "16", "--radial", "4"], capsys)
    assert code == cli.EXIT_CONTRACT and "radial" in err


def test_truncation_exit_code(capsys):
    args = ["scan", "semiclassical", "--symbol", "z*zbar", "--z", "2", "--hbar-list", "0.05", "--dim", "16"]
    code, out, err = run(args, capsys)
    assert code == cli.EXIT_TRUNCATION and out == "" and "tail bound" in err
    with pytest.warns(fock.TruncationWarning):
        code, out, _ = run(["--allow-truncation"] + args, capsys)
    assert code == 0 and out.startswith("hbar,")


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["cs"])
    assert info.value.code == cli.EXIT_USAGE


def test_scans(capsys):
    code, out, _ = run(["scan", "trajectory", "--z", "1", "--dim", "48"], capsys)
    rows = out.splitlines()
    assert code == 0 and rows[0] == "t,quantum,classical,deviation" and len(rows) == 101
    assert max(float(r.split(",")[3]) for r in rows[1:]) < 1e-8
    code, out, _ = run(["scan", "semiclassical", "--z", "1+1i", "--dim", "48"], capsys)
    errs = [float(r.split(",")[5]) for r in out.splitlines()[1:]]
    assert errs == pytest.approx([0.5, 0.25, 0.125], rel=1e-10)
    code, out, _ = run(["scan", "semiclassical", "--hbar-list", ""], capsys)
    assert code == 0 and len(out.splitlines()) == 1
    code, out, _ = run(["scan", "lower-grid", "--dim", "40", "--points", "2"], capsys)
    assert code == 0 and len(out.splitlines()) == 5
    # a radius-2 grid does not fit in an 8-level space
    code, _, _ = run(["scan", "lower-grid", "--dim", "8", "--points", "2"], capsys)
    assert code == cli.EXIT_TRUNCATION


def test_measure_export_coherent(capsys):
    code, out, _ = run(["measure", "coherent", "--dim", "4", "--radial", "3", "--angular", "5"], capsys)
    obj = json.loads(out)
    assert code == 0 and len(obj["atoms"]) == 15 and obj["dim"] == 4


def test_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    code, out, _ = run(["cs", "--symbol", "1", "--dim", "3"], capsys)
    assert code == 0 and out == ""
    assert json.loads((tmp_path / "cs.json").read_text())["dim"] == 3
    run(["scan", "trajectory", "--points", "3"], capsys)
    assert (tmp_path / "scan.csv").exists()


def test_deterministic_output(capsys):
    args = ["cs", "--symbol", "q*p^2 + z^3", "--dim", "10"]
    _, first, _ = run(args, capsys)
    _, second, _ = run(args, capsys)
    assert first == second


def test_verify_subset(capsys):
    code, out, _ = run(["verify", "--suite", "overlap-law", "--suite", "cs-unit"], capsys)
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3 and lines[-1] == "2/2 suites passed"
    code, out, err = run(["verify", "--suite", "no-such-suite"], capsys)
    assert code == cli.EXIT_PARSE and out == "" and "frame-resolution" in err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "csquant", "finite", "--n", "3", "--symbol", "1,1,1"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert np.allclose(fock.operator_from_json(json.loads(res.stdout)), np.eye(2))
