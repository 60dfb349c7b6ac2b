import json
from pathlib import Path

import pytest

from palfkit.ainfcat import AInfCategory
from palfkit.cli import main
from palfkit.data import load_category, load_json

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", ["pi1", "pi2", "pi3"])
def test_golden_reports(capsys, name):
    code, out, _ = run(capsys, "report", name)
    assert code == 0
    assert out == (GOLDEN / ("%s.report.json" % name)).read_text(encoding="utf-8")


def test_golden_values():
    pi1, pi2, pi3 = (json.loads((GOLDEN / ("%s.report.json" % n)).read_text()) for n in ("pi1", "pi2", "pi3"))
    assert pi1["fs_category"]["category"]["mu"] == []
    assert [len(p["domains"]) for p in pi1["fs_category"]["polygons"]] == [2]
    assert pi2["fs_category"]["category"]["mu"] == [{"args": ["p23", "p12"], "arity": 2, "out": {"p13": "1"}}]
    assert pi3["fs_category"]["polygons"] == []
    degs = {g["label"]: g["degree"] for g in pi3["fs_category"]["category"]["generators"]}
    assert degs["p13"] == -2
    assert [r["invariants"]["total_space_h1"]["group"] for r in (pi1, pi2, pi3)] == ["Z^4", "Z^3", "Z^3 + Z/2"]
    hh = [(r["hochschild"]["groups"]["0"]["dim"], r["hochschild"]["groups"]["1"]["dim"]) for r in (pi1, pi2, pi3)]
    assert hh == [(1, 1), (1, 0), (2, 1)]


def test_validate_exit_codes(capsys, tmp_path):
    assert run(capsys, "validate", "pi2")[0] == 0
    doc = load_json("pi1.diagram.json")
    doc["crossings"][0]["curves"] = ["L1", "L1"]
    bad = tmp_path / "self.json"
    bad.write_text(json.dumps(doc))
    code, out, err = run(capsys, "validate", str(bad))
    assert code == 1 and "p12" in err and "self_crossing" in out
    broken = tmp_path / "broken.json"
    broken.write_text('{"format": "palfkit-diagram", "curves": [')
    code, _, err = run(capsys, "validate", str(broken))
    assert code == 2 and "invalid JSON" in err
    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps({k: v for k, v in doc.items() if k != "arcs"}))
    assert run(capsys, "validate", str(missing))[0] == 2


def test_validate_category(capsys):
    code, out, _ = run(capsys, "validate", "a2")
    assert code == 0 and json.loads(out)["ainf_relation"]["ok"]


@pytest.mark.parametrize("argv", [
    ("nope", "pi1"),
    ("hh", "a1", "--degrees", "3..1"),
    ("hh", "a1", "--degrees", "x"),
    ("hh", "a1", "--field", "fp:8"),
    ("hh", "no-such-file.json"),
    ("category", "a1"),
    ("category", "pi1", "--max-mult", "-1"),
])
def test_bad_usage(capsys, argv):
    assert run(capsys, *argv)[0] == 2


@pytest.mark.parametrize("name, dims", [("a1", (1, 1)), ("a2", (1, 0)), ("a3", (2, 1))])
@pytest.mark.parametrize("field", ["q", "fp:7"])
def test_hh_command(capsys, name, dims, field):
    code, out, _ = run(capsys, "hh", name, "--degrees", "-2..2", "--field", field)
    doc = json.loads(out)
    assert code == 0 and doc["field"] == field
    assert (doc["groups"]["0"]["dim"], doc["groups"]["1"]["dim"]) == dims
    assert doc["differential_squares_to_zero"]


def test_category_round_trip(capsys, tmp_path):
    target = tmp_path / "cat.json"
    code, _, _ = run(capsys, "category", "pi3", "--out", str(target))
    assert code == 0
    doc = json.loads(target.read_text())
    cat = AInfCategory.from_json(doc["category"])
    assert AInfCategory.from_json(cat.to_json()).canonical() == cat.canonical()
    (tmp_path / "only.json").write_text(json.dumps(doc["category"]))
    code, out, _ = run(capsys, "hh", str(tmp_path / "only.json"))
    assert [json.loads(out)["groups"][r]["dim"] for r in ("0", "1")] == [2, 1]
    # shipped tables round-trip as well
    for n in ("a1", "a2", "a3"):
        c = load_category(n)
        assert AInfCategory.from_json(json.loads(c.canonical())).canonical() == c.canonical()


def test_incomplete_enumeration(capsys):
    code, out, err = run(capsys, "category", "pi1", "--max-mult", "0")
    doc = json.loads(out)
    assert code == 0 and doc["complete"] is False and doc["banner"].startswith("INCOMPLETE")
    assert run(capsys, "category", "pi1", "--max-mult", "0", "--strict")[0] == 3


def test_invariants_command(capsys):
    code, out, _ = run(capsys, "invariants", "pi1")
    doc = json.loads(out)
    assert doc["milnor_lattice"]["rank"] == 3
    assert doc["total_space_h1"]["group"] == "Z^4"
    assert doc["comparison"]["match"]
    code, out, _ = run(capsys, "invariants", "annulus")
    doc = json.loads(out)
    assert doc["milnor_lattice"]["pairing"] == [[0, 0], [0, 0]]
    assert doc["total_space_h1"]["group"] == doc["total_space_h1_cellular"]["group"]


def test_deterministic_and_thread_independent(capsys, monkeypatch):
    first = run(capsys, "report", "pi1")[1]
    assert run(capsys, "report", "pi1")[1] == first
    monkeypatch.setenv("PALFKIT_THREADS", "4")
    assert run(capsys, "report", "pi1")[1] == first
    base = run(capsys, "category", "annulus")[1]
    monkeypatch.setenv("PALFKIT_THREADS", "1")
    assert run(capsys, "category", "annulus")[1] == base
