import csv
import io
import json
import subprocess
import sys

import mpmath
import pytest

from qentropy.certify import Certificate
from qentropy.cli import main
from qentropy.entropy import Packing
from qentropy.lpspace import INF, LpSpace, PointSet, all_bit_vectors, hypercube_system
from qentropy.serial import from_hexfloat


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def interval_csv(tmp_path):
    path = tmp_path / "interval.csv"
    path.write_text(PointSet(LpSpace(1, INF), [[0], [0.5], [1]]).to_csv())
    return path


@pytest.fixture
def cube4_csv(tmp_path):
    path = tmp_path / "cube4.csv"
    path.write_text(PointSet(LpSpace(4, 1), all_bit_vectors(4)).to_csv())
    return path


def test_entropy_pack(capsys, interval_csv):
    code, out, _ = run(capsys, "entropy", "pack", interval_csv, "--k", 2)
    assert code == 0
    d = json.loads(out)
    assert d["phi"] == 0.25 and d["indices"] == [0, 1, 2] and d["exact"]


def test_entropy_maximal(capsys, cube4_csv):
    code, out, _ = run(capsys, "entropy", "maximal", cube4_csv, "--delta", 0.25)
    assert code == 0
    assert len(json.loads(out)["indices"]) == 16


def test_entropy_cover_and_estimate(capsys, interval_csv):
    code, out, _ = run(capsys, "entropy", "cover", interval_csv, "--k", 1)
    assert code == 0 and json.loads(out)["radius"] == 0.5
    code, out, _ = run(capsys, "entropy", "estimate", interval_csv, "--k", 2)
    assert code == 0 and json.loads(out)["phi_exact"] == 0.25


def test_entropy_infeasible_falls_back(capsys, tmp_path):
    import numpy as np

    path = tmp_path / "big.csv"
    path.write_text(PointSet(LpSpace(6, 2), np.random.default_rng(5).normal(size=(40, 6))).to_csv())
    code, out, _ = run(capsys, "entropy", "pack", path, "--k", 12, "--node-budget", 5)
    assert code == 2
    d = json.loads(out)
    assert not d["exact"] and len(d["indices"]) == 13 and d["phi_lower"] > 0


def test_entropy_input_errors(capsys, tmp_path):
    code, _, err = run(capsys, "entropy", "pack", tmp_path / "missing.csv", "--k", 1)
    assert code == 1 and "cannot read" in err
    bad = tmp_path / "bad.csv"
    bad.write_text("p,N\ninf,2\n0,0\n1,x\n")
    code, _, err = run(capsys, "entropy", "pack", bad, "--k", 1)
    assert code == 1 and "row 4" in err


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["entropy", "bogus", "x.csv"])
    assert exc.value.code == 1


def test_certify_prop2(capsys):
    code, out, _ = run(capsys, "certify", "prop2", "--N", 1000, "--n", 4, "--mode", "volume")
    assert code == 0
    d = json.loads(out)
    assert d["bound"] == 0.125 and d["bound_exact"] == "1/8"
    assert Certificate.from_json(out).to_json() == out.rstrip("\n")

    code, out, _ = run(capsys, "certify", "prop2", "--N", 1000, "--n", 200)
    assert code == 3
    d = json.loads(out)
    assert d["bound"] is None and not d["holds"]

    code, _, _ = run(capsys, "certify", "prop2", "--N", 0, "--n", 1)
    assert code == 1


def test_certify_zero(capsys, tmp_path):
    path = tmp_path / "one.csv"
    path.write_text(PointSet(LpSpace(2, 1), [[1, 1]]).to_csv())
    code, out, _ = run(capsys, "certify", "zero", "--points", path)
    assert code == 0
    d = json.loads(out)
    assert (d["bound"], d["bound_upper"]) == (0, 0)


def test_certify_prop1(capsys, tmp_path):
    L = 8
    pts = tmp_path / "cube.csv"
    pts.write_text(hypercube_system(L).image().to_csv())
    words = [w for w in range(2**L) if bin(w).count("1") % 2 == 0]
    pk = tmp_path / "pk.json"
    pk.write_text(Packing(tuple(words), 1 / 8).to_json())
    code, out, _ = run(capsys, "certify", "prop1", "--points", pts, "--packing", pk, "--n", 1, "--L", L)
    assert code == 3
    assert json.loads(out)["params"]["L"] == L

    system = tmp_path / "sys.json"
    system.write_text(hypercube_system(L).to_json())
    code, _, _ = run(capsys, "certify", "prop1", "--points", pts, "--packing", pk, "--n", 1, "--system", system)
    assert code == 3

    # points that are not the hypercube image must not pass the implicit system check
    other = tmp_path / "other.csv"
    other.write_text(PointSet(LpSpace(L, 1), 2 * all_bit_vectors(L)).to_csv())
    code, out, _ = run(capsys, "certify", "prop1", "--points", other, "--packing", pk, "--n", 1, "--L", L)
    assert code == 3 and "condition_i" in Certificate.from_json(out).failed()


def test_simulate(capsys):
    code, out, _ = run(capsys, "simulate", "--L", 4, "--n", 1, "--count", 50, "--seed", 7)
    assert code == 0
    d = json.loads(out)
    assert d["passed"] == d["count"] == 50
    assert all(r["max_degree"] <= 2 for r in d["runs"])

    code, out, _ = run(capsys, "simulate", "--L", 2, "--n", 0)
    assert code == 0 and json.loads(out)["runs"][0]["max_degree"] == 0

    assert run(capsys, "simulate", "--L", 11, "--n", 1)[0] == 1
    assert run(capsys, "simulate", "--L", 4, "--n", 5)[0] == 1


def test_simulate_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(capsys, "simulate", "--L", 5, "--n", 2, "--count", 5, "--seed", 3, "-o", path)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert run(capsys, "simulate", "--L", 5, "--n", 2, "--count", 5, "--seed", 4, "-o", tmp_path / "c.json")[0] == 0
    assert (tmp_path / "c.json").read_bytes() != a.read_bytes()


def test_constants(capsys, monkeypatch):
    code, out, _ = run(capsys, "constants")
    assert code == 0
    d = json.loads(out)
    assert d["c1"] == pytest.approx(0.139326, abs=5e-7)
    assert d["c"] == min(d["c_terms"])
    assert from_hexfloat(d["c_hex"]) == min(from_hexfloat(h) for h in d["c_terms_hex"])
    assert "provenance" in d

    _, out256, _ = run(capsys, "constants", "--precision-bits", 256)
    d256 = json.loads(out256)
    assert mpmath.nstr(from_hexfloat(d["c1_hex"]), 30) == mpmath.nstr(from_hexfloat(d256["c1_hex"]), 30)

    monkeypatch.setenv("QENTROPY_PRECISION_BITS", "256")
    _, out_env, _ = run(capsys, "constants")
    assert out_env == out256
    monkeypatch.setenv("QENTROPY_PRECISION_BITS", "lots")
    assert run(capsys, "constants")[0] == 1


def test_codes(capsys):
    code, out, _ = run(capsys, "codes", "binomial-sum", "--N", 4, "--m", 2)
    assert code == 0 and json.loads(out)["value"] == "11"
    code, out, _ = run(capsys, "codes", "packing", "--N", 8, "--d", 2)
    assert code == 0 and len(json.loads(out)["words"]) == 128


def test_report(capsys):
    code, out, _ = run(capsys, "report", "--N-range", "1000,2000", "--n-range", "1:9:4")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["N"], r["n"]) for r in rows] == [("1000", "1"), ("1000", "5"), ("1000", "9"),
                                                 ("2000", "1"), ("2000", "5"), ("2000", "9")]
    assert [r["certified"] for r in rows] == ["1", "0", "0", "1", "1", "0"]


def test_output_file_and_entry_point(tmp_path):
    path = tmp_path / "cert.json"
    res = subprocess.run([sys.executable, "-m", "qentropy.cli", "certify", "prop2", "--N", "1000", "--n", "4",
                          "-o", str(path)], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == ""
    assert json.loads(path.read_text())["bound"] == 0.125
    res = subprocess.run([sys.executable, "-m", "qentropy.cli", "certify", "prop2", "--N", "1000", "--n", "4",
                          "--output", "-"], capture_output=True, text=True)
    assert res.stdout == path.read_text()
