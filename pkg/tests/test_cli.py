import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest

from xpq import cli, report
from xpq.cyclotomic import root_of_unity
from xpq.furstenberg import CatalogEntry, catalog

DOCS = Path(__file__).resolve().parent.parent / "docs"


def schema(name):
    return json.loads((DOCS / f"{name}.schema.json").read_text())


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_orbits_command(capsys):
    code, out, _ = run(["orbits", "--p", "2", "--q", "3", "--modulus", "5"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["orbits"] == [[0], [1, 2, 3, 4]]
    jsonschema.validate(doc, schema("orbits"))
    code, out, _ = run(["orbits", "--p", "2", "--q", "3", "--modulus", "1"], capsys)
    assert json.loads(out)["orbits"] == [[0]]


def test_input_errors_exit_2(capsys):
    code, _, err = run(["orbits", "--p", "2", "--q", "3", "--modulus", "6"], capsys)
    assert code == 2 and "gcd" in err
    assert run(["orbits", "--p", "1", "--q", "3", "--modulus", "5"], capsys)[0] == 2
    assert run(["catalog", "--p", "2", "--q", "3", "--max-modulus", "20000"], capsys)[0] == 2
    assert run(["verify", "--p", "2", "--q", "3", "--max-modulus", "5", "--tolerance", "0"], capsys)[0] == 2
    assert run(["moments", "--p", "2", "--q", "3", "--modulus", "5", "--orbit-rep", "1",
                "--range", "x"], capsys)[0] == 2
    assert run(["bogus"], capsys)[0] == 2


def test_force_lifts_cap(monkeypatch, capsys):
    monkeypatch.setattr(cli, "MAX_MODULUS_CAP", 5)
    assert run(["catalog", "--p", "2", "--q", "3", "--max-modulus", "7"], capsys)[0] == 2
    assert run(["catalog", "--p", "2", "--q", "3", "--max-modulus", "7", "--force"], capsys)[0] == 0


def test_catalog_command(tmp_path, capsys):
    out = tmp_path / "c.json"
    assert run(["catalog", "--p", "2", "--q", "3", "--max-modulus", "7", "--out", str(out)], capsys)[0] == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, schema("catalog"))
    assert [e["M"] for e in doc["entries"]] == [1, 5, 7]
    run(["catalog", "--p", "2", "--q", "3", "--max-modulus", "1", "--out", str(out)], capsys)
    assert len(json.loads(out.read_text())["entries"]) == 1


def test_catalog_byte_identical(tmp_path, capsys):
    paths = []
    for n, threads in enumerate(["1", "8", "8"]):
        path = tmp_path / f"c{n}.json"
        run(["catalog", "--p", "2", "--q", "3", "--max-modulus", "150", "--threads", threads,
             "--out", str(path)], capsys)
        paths.append(path.read_bytes())
    assert paths[0] == paths[1] == paths[2]


def test_verify_command(tmp_path, capsys):
    out = tmp_path / "v.json"
    code, _, _ = run(["verify", "--p", "2", "--q", "3", "--max-modulus", "25", "--out", str(out)], capsys)
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, schema("verify"))
    assert code == 0 and doc["summary"]["passed"]
    assert all(all(e["checks"].values()) for e in doc["entries"])
    assert not doc["multiplicatively_dependent"] and doc["reduction_unique"]


def test_verify_float_agrees_with_exact(capsys):
    _, ex, _ = run(["verify", "--p", "2", "--q", "3", "--max-modulus", "40"], capsys)
    code, fl, _ = run(["verify", "--p", "2", "--q", "3", "--max-modulus", "40", "--mode", "float",
                       "--tolerance", "1e-12"], capsys)
    a, b = json.loads(ex), json.loads(fl)
    jsonschema.validate(b, schema("verify"))
    assert code == 0 and b["mode"] == "float"
    assert [e["checks"] for e in a["entries"]] == [e["checks"] for e in b["entries"]]
    assert [e["commutant_dim"] for e in a["entries"]] == [e["commutant_dim"] for e in b["entries"]]


def test_verify_fault_injection(monkeypatch, capsys):
    good = catalog(2, 3, 13)

    def corrupted(p, q, M_max, exact=True, threads=None):
        out = list(good)
        e = out[3]
        bad = CatalogEntry(5, q, e.M, e.orbit, exact)  # claims x5 while the rep uses x2
        object.__setattr__(bad, "rep", e.rep)
        object.__setattr__(bad, "sys", e.sys)
        out[3] = bad
        return out

    monkeypatch.setattr(report, "catalog", corrupted)
    code, out, err = run(["verify", "--p", "2", "--q", "3", "--max-modulus", "13"], capsys)
    doc = json.loads(out)
    assert code == 1
    assert doc["summary"]["first_failure"] == {"M": good[3].M, "orbit_representative": 1,
                                               "check": "relations"}
    assert "relations" in err


def test_multiplicative_dependence_flag(capsys):
    _, out, _ = run(["catalog", "--p", "2", "--q", "8", "--max-modulus", "9"], capsys)
    assert json.loads(out)["multiplicatively_dependent"]
    _, out, _ = run(["verify", "--p", "4", "--q", "6", "--max-modulus", "11"], capsys)
    doc = json.loads(out)
    assert doc["summary"]["passed"]


def test_moments_command(capsys):
    code, out, _ = run(["moments", "--p", "2", "--q", "3", "--modulus", "5", "--orbit-rep", "1",
                        "--range", "5", "--psd-order", "4"], capsys)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("moments"))
    assert code == 0
    assert [m["value"] for m in doc["moments"]] == ["1/1", "-1/4", "-1/4", "-1/4", "-1/4", "1/1"]
    assert doc["psd"]["psd"] and doc["psd"]["exact"]
    code, out, _ = run(["moments", "--p", "2", "--q", "3", "--modulus", "23", "--orbit-rep", "1",
                        "--range", "0..3", "--psd-order", "6"], capsys)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("moments"))
    assert doc["moments"][0]["value"] == "1/1"
    assert doc["moments"][1]["value"]["root_order"] == 23
    code, out, _ = run(["moments", "--p", "2", "--q", "3", "--modulus", "7", "--orbit-rep", "3",
                        "--mode", "float"], capsys)
    doc = json.loads(out)
    jsonschema.validate(doc, schema("moments"))
    assert doc["moments"][0]["value"] == {"re": pytest.approx(1.0, abs=1e-15), "im": 0.0}


def test_serialization_round_trip():
    x = root_of_unity(5, 2) * Fraction(3, 7)
    enc = report.scalar(x)
    assert enc["root_order"] == 5
    from xpq.cyclotomic import from_exponents
    coeffs = [Fraction(c) for c in enc["coefficients"]]
    assert from_exponents(5, coeffs + [Fraction(0)] * (5 - len(coeffs))) == x
    assert report.parse_scalar(report.scalar(Fraction(-2, 3))) == Fraction(-2, 3)
    assert report.parse_scalar(report.scalar(0.1 + 0.2j)) == 0.1 + 0.2j
    text = report.dumps({"a": 0.1, "b": [1, 2], "c": None, "d": 1e-300, "e": 2.0})
    assert '"a": 0.10000000000000001' in text and '"e": 2.0' in text
    assert json.loads(text)["d"] == 1e-300
    with pytest.raises(ValueError):
        report.dumps({"x": float("nan")})


def test_python_dash_m_entry_point():
    res = subprocess.run([sys.executable, "-m", "xpq", "orbits", "--p", "2", "--q", "3",
                          "--modulus", "7"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["orbits"] == [[0], [1, 2, 3, 4, 5, 6]]
