import json
import math

import numpy as np
import pytest

from brake_index.cli import main
from brake_index.io import ParseError, parse_coefficient_path, parse_matrix


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_signature_rotation(tmp_path, capsys):
    c, s = math.cos(0.7), math.sin(0.7)
    f = _write(tmp_path, "m.json", [[c, -s], [s, c]])
    assert main(["signature", f]) == 0
    assert json.loads(capsys.readouterr().out)["signature"] == 0


def test_signature_normal_forms(tmp_path, capsys):
    f = _write(tmp_path, "m.json", {"normal_forms": [{"kind": "R", "theta": 0.7}, {"kind": "D", "lam": 2}]})
    assert main(["signature", f]) == 0


def test_malformed_json_exit_2(tmp_path):
    assert main(["signature", _write(tmp_path, "bad.json", "{oops")]) == 2


def test_bad_shape_exit_2(tmp_path):
    assert main(["signature", _write(tmp_path, "bad.json", [[1, 2, 3]])]) == 2


def test_unknown_verb_exit_2():
    assert main(["frobnicate"]) == 2


def test_index_rotation(tmp_path, capsys):
    f = _write(tmp_path, "p.json", {"kind": "rotation", "tau": 2 * math.pi, "n": 1})
    assert main(["index", f]) == 0
    out = json.loads(capsys.readouterr().out)
    assert (out["index"], out["nullity"], out["family"]) == (1, 1, "L0")


def test_index_theta_turns(tmp_path, capsys):
    f = _write(tmp_path, "p.json", {"constant": [[1, 0], [0, 1]], "tau": 1.5 * math.pi})
    assert main(["index", f, "--family", "omegaL0", "--theta", "1/4"]) == 0
    assert json.loads(capsys.readouterr().out)["index"] == 1


def test_omega_profile_csv(tmp_path, capsys):
    f = _write(tmp_path, "p.json", {"kind": "rotation", "tau": 2.0})
    assert main(["omega-index", f, "--profile", "--resolution", "16"]) == 0
    assert capsys.readouterr().out.startswith("theta_start,theta_end,index")


def test_verify_bott_and_determinism(tmp_path, capsys):
    f = _write(tmp_path, "p.json", {"constant": [[1, 0], [0, 0.5]], "tau": 2.0})
    assert main(["verify-bott", f, "--k", "2", "--m", "2"]) == 0
    first = capsys.readouterr().out
    assert main(["verify-bott", f, "--k", "2", "--m", "2"]) == 0
    assert capsys.readouterr().out == first
    assert all(r["agree"] for r in json.loads(first))


def test_iterate_periodic(tmp_path, capsys):
    f = _write(tmp_path, "p.json", {"kind": "rotation", "tau": 1.0})
    assert main(["iterate", f, "--sense", "periodic", "--m", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["tau"] == pytest.approx(3.0)


def test_galerkin_verb(tmp_path, capsys):
    f = _write(tmp_path, "c.json", {"constant": [[1, 0], [0, 1]], "tau": 2 * math.pi})
    out = tmp_path / "r.json"
    assert main(["galerkin", f, "--space", "E", "--csv", str(tmp_path / "s.csv"), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["record"]["index"] == 1
    assert (tmp_path / "s.csv").read_text().startswith("m,d,plus,zero,minus")


def test_orbit_verb(tmp_path):
    f = _write(tmp_path, "h.json", {"kind": "harmonic"})
    rep = tmp_path / "r.json"
    code = main(["orbit", f, "--T", str(4 * math.pi), "--q0", "1", "--spotcheck", "brake",
                 "--csv", str(tmp_path / "o.csv"), "--out", str(rep)])
    assert code == 0
    doc = json.loads(rep.read_text())
    assert doc["k"] == 2 and doc["spotchecks"][0]["passed"]


def test_verify_all_small(tmp_path, capsys):
    out = tmp_path / "suite.json"
    assert main(["verify-all", "--seed", "5", "--cases", "2", "--n", "2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["ok"] and all(v == 2 for v in doc["total"].values())


def test_parse_helpers():
    with pytest.raises(ParseError):
        parse_matrix([[1.0, 0.0, 0.0]])
    B = parse_coefficient_path({"constant": np.eye(2).tolist(), "tau": 1.0})
    assert B.tau == 1.0
