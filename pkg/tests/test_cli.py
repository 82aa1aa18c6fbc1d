import json

import numpy as np
import pytest

from riesz_clifford.cli import PROBE_HEADER, main
from riesz_clifford.polyspace import OperatorTuple
from riesz_clifford.quant import jordan_product
from riesz_clifford.serialize import matrix_from_json, write_operator_file

from conftest import hermitian


@pytest.fixture
def pair_file(tmp_path, rng):
    T = OperatorTuple([hermitian(rng), hermitian(rng)])
    path = tmp_path / "pair.json"
    write_operator_file(path, T)
    return path, T


def test_verify_algebra(capsys):
    assert main(["verify", "--suite", "algebra", "--seed", "7"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["schema"] == "riesz-clifford/run-report/1"
    assert rep["config"]["seed"] == 7
    assert all(c["passed"] for c in rep["result"]["algebra"])
    assert "wall_time" not in rep


def test_verify_orthogonality_report(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "orthogonality", "--max-degree", "3", "--out", str(out)]) == 0
    check = json.loads(out.read_text())["result"]["orthogonality"][0]
    assert check["residual"] <= 1e-6


def test_verify_failure_and_usage(capsys):
    assert main(["verify", "--suite", "quantization", "--tol", "weyl_exponential=1e-30"]) == 1
    assert main(["verify", "--suite", "nope"]) == 2
    assert main(["verify", "--tol", "unknown=1"]) == 2
    assert main(["verify", "--tol", "broken"]) == 2


def test_seed_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("RC_SEED", "11")
    main(["verify", "--suite", "algebra"])
    assert json.loads(capsys.readouterr().out)["config"]["seed"] == 11
    main(["verify", "--suite", "algebra", "--seed", "3"])
    assert json.loads(capsys.readouterr().out)["config"]["seed"] == 3
    monkeypatch.setenv("RC_SEED", "abc")
    assert main(["verify", "--suite", "algebra"]) == 2


def test_include_timing(capsys):
    main(["verify", "--suite", "algebra", "--include-timing"])
    assert json.loads(capsys.readouterr().out)["wall_time"] > 0


def test_quantize(pair_file, tmp_path, capsys):
    path, T = pair_file
    out = tmp_path / "q.json"
    assert main(["quantize", "x1 x2", str(path), "--out", str(out)]) == 0
    assert "hermiticity residual" in capsys.readouterr().out
    Q = matrix_from_json(json.loads(out.read_text())["matrix"])
    assert np.allclose(Q, jordan_product(T[0], T[1]))
    assert main(["quantize", "x1^2", str(path)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert np.allclose(matrix_from_json(rep["result"]["matrix"]), T[0] @ T[0])


def test_quantize_errors(pair_file, tmp_path, capsys):
    path, _ = pair_file
    assert main(["quantize", "x1^", str(path)]) == 2
    err = capsys.readouterr().err
    assert "position 3" in err
    assert main(["quantize", "x3", str(path)]) == 2
    assert main(["quantize", "x1", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"matrices": [[[[0, 0], [1, 0]], [[0, 0], [0, 0]]]]}))
    assert main(["quantize", "x1", str(bad)]) == 2
    assert "T1" in capsys.readouterr().err


def test_calculus_both_routes(pair_file, capsys):
    path, T = pair_file
    assert main(["calculus", "--poly", "1", str(path), "--route", "both"]) == 0
    captured = capsys.readouterr()
    rep = json.loads(captured.out)
    assert rep["diagnostics"]["route_disagreement"] <= 1e-7
    assert "route disagreement" in captured.err


def test_calculus_generator(pair_file, capsys):
    path, T = pair_file
    assert main(["calculus", "--poly", "x1", str(path), "--route", "integral"]) == 0
    rep = json.loads(capsys.readouterr().out)
    M = matrix_from_json(rep["result"]["integral"]["matrix"])
    assert np.abs(M - T[0]).max() <= 1e-7


def test_calculus_coeff_file(pair_file, tmp_path, capsys):
    path, T = pair_file
    coeffs = tmp_path / "f.json"
    coeffs.write_text(json.dumps({"n": 2, "terms": [{"alpha": [1, 1], "coeff": 2.0}]}))
    assert main(["calculus", "--coeffs", str(coeffs), str(path), "--route", "taylor"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert np.allclose(matrix_from_json(rep["result"]["taylor"]["matrix"]), 2 * jordan_product(T[0], T[1]))


def test_calculus_radius_guard(pair_file, capsys):
    path, _ = pair_file
    assert main(["calculus", "--poly", "x1", str(path), "--route", "integral", "--radius", "0.01"]) == 2
    assert "radius below spectral bound" in capsys.readouterr().err


def test_probe(pair_file, capsys):
    path, _ = pair_file
    assert main(["probe", str(path), "--radii", "0.5,1.5,2,4", "--relative", "--degree", "8"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert tuple(lines[0].split(",")) == PROBE_HEADER
    rows = [l.split(",") for l in lines[1:]]
    assert len(rows) == 4 * 9
    # decay ratio between the last two degrees shrinks as the radius grows
    ratios = []
    for k in range(4):
        block = rows[9 * k: 9 * k + 9]
        ratios.append(float(block[-1][2]) / float(block[-2][2]))
    assert ratios[1] > ratios[2] > ratios[3]


def test_probe_zero_tuple(tmp_path, capsys):
    path = tmp_path / "zero.json"
    write_operator_file(path, OperatorTuple([np.zeros((2, 2))] * 2))
    assert main(["probe", str(path), "--radii", "0.5,1,3", "--degree", "3"]) == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert all(r.endswith("converging") for r in rows)
    assert main(["probe", str(path), "--radii", "1", "--relative"]) == 2
