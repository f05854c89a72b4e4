import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from somoslab import analysis, confinement, diophantine, geometry, linearize, repro
from somoslab.cli import run
from somoslab.engine import iterate_exact
from somoslab.recdsl import catalog

SCHEMAS = Path(__file__).resolve().parent.parent / "docs" / "schemas" / "v1"


def schema(name):
    return json.loads((SCHEMAS / f"{name}.json").read_text())


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def validated(capsys, name, *argv, code=0):
    rc, out, _ = call(capsys, *argv)
    assert rc == code
    doc = json.loads(out)
    jsonschema.validate(doc, schema(name))
    return doc


# -- spec examples ------------------------------------------------------------------

def test_iterate_somos4(capsys):
    rc, out, _ = call(capsys, "iterate", "--rec", "somos4", "--params", "alpha=1,beta=1",
                      "--seed", "1,1,1,1", "--n", "9")
    assert rc == 0
    assert out.strip() == "2,3,7,23,59,314,1529,8209,83313"


def test_harvest_fifty(capsys):
    doc = validated(capsys, "solution_batch", "dioph", "--c", "1", "--beta", "1", "--harvest", "50")
    assert len(doc["solutions"]) == 50
    assert diophantine.verify_batch(doc) == []


def test_somos8_laurent_failure(capsys):
    doc = validated(capsys, "laurent_report", "check-laurent", "--rec", "somos8", "--n", "30", code=1)
    assert doc["first_failure"] == 16
    assert doc["witness"]


# -- exit codes -------------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["dioph", "--c", "0", "--beta", "-1"],
    ["iterate", "--rec", "nosuch"],
    ["iterate", "--rec", "somos4", "--seed", "1,1,1"],
    ["iterate", "--rec", "somos4", "--params", "alpha=x"],
    ["iterate", "--rec", "somos4"],
    ["iterate"],
    ["eds", "--x2", "2", "--x3", "3", "--x4", "5"],
    ["reconstruct", "--case", "c0", "--seed", "1,1,-1,2", "--beta", "1", "--n", "3"],
    ["bogus"],
])
def test_usage_errors_exit_two(capsys, argv):
    rc, out, err = call(capsys, *argv)
    assert rc == 2
    assert err


def test_parse_error_in_file(tmp_path, capsys):
    f = tmp_path / "bad.rec"
    f.write_text("x[n+2] = x[n+1] + +\n")
    rc, _, err = call(capsys, "iterate", "--rec-file", str(f))
    assert rc == 2 and "line 1" in err


def test_recurrence_file(tmp_path, capsys):
    f = tmp_path / "lin.rec"
    f.write_text("param a=2\nx[n+2] = a*x[n+1] - x[n]\n")
    rc, out, _ = call(capsys, "iterate", "--rec-file", str(f), "--seed", "0,1", "--n", "4", "--all")
    assert rc == 0 and out.strip() == "0,1,2,3,4,5"


@pytest.mark.parametrize("argv", [
    ["invariant", "--name", "C0"],
    ["poisson", "--check", "involution", "--c", "1", "--a", "J2", "--b", "J3"],
    ["poisson", "--check", "casimir", "--structure", "s4", "--f", "K1"],
    ["lax", "--printed"],
])
def test_failed_verification_exits_one(capsys, argv):
    rc, out, _ = call(capsys, *argv)
    assert rc == 1
    doc = json.loads(out)
    jsonschema.validate(doc, schema("verdict"))
    assert doc["verdict"] is False and doc["witness"]


@pytest.mark.parametrize("argv", [
    ["invariant", "--name", "J"],
    ["invariant", "--name", "J3"],
    ["invariant", "--name", "Jt1"],
    ["poisson", "--check", "map", "--c", "3"],
    ["poisson", "--check", "map", "--structure", "planar", "--rec", "u-map"],
    ["poisson", "--check", "casimir", "--structure", "s4", "--f", "u1"],
    ["poisson", "--check", "involution", "--c", "1", "--a", "J1", "--b", "J2"],
    ["poisson", "--check", "jacobi", "--structure", "s4"],
    ["poisson", "--check", "det", "--c", "5"],
    ["lax"],
    ["reduce", "--kind", "hirota_embed"],
    ["reduce", "--kind", "two_form_pullback"],
])
def test_verdicts(capsys, argv):
    validated(capsys, "verdict", *argv)


# -- other subcommands ---------------------------------------------------------------------

def test_orbit_json(capsys):
    doc = validated(capsys, "orbit", "iterate", "--rec", "viallet-tau", "--n", "5", "--format", "json")
    assert doc["values"][6:] == ["2", "5", "29", "1241", "3642581"]


def test_orbit_jsonl(capsys):
    rc, out, _ = call(capsys, "iterate", "--rec", "viallet", "--seed", "2,3", "--n", "2", "--format", "jsonl")
    rows = [json.loads(line) for line in out.splitlines()]
    assert rows[-1] == {"n": 3, "value": "34/45", "status": "ok"}
    assert all(set(r) == {"n", "value", "status"} for r in rows)


def test_pole_exit(capsys):
    rc, out, _ = call(capsys, "iterate", "--rec", "viallet", "--seed", "1,0", "--n", "3")
    assert rc == 1 and "pole" in out


def test_degrees(capsys):
    doc = validated(capsys, "degrees", "degrees", "--c", "3", "--n", "10", "--format", "json")
    assert doc["measured"] == doc["tropical"] == [0, 0, 0, 0, 1, 1, 4, 5, 12, 15, 33]
    rc, out, _ = call(capsys, "degrees", "--c", "2", "--n", "6")
    assert rc == 0 and out.splitlines()[0] == "n\tmeasured\ttropical"


def test_entropy(capsys):
    doc = validated(capsys, "entropy", "entropy", "--c", "3")
    assert doc["ok"] and doc["relative_error"] < 0.02


def test_heights(capsys):
    doc = validated(capsys, "growth", "heights", "--rec", "viallet-tau", "--n", "13")
    assert doc["classification"] == "exponential"


def test_linearize(capsys):
    doc = validated(capsys, "linearization", "linearize", "--case", "c1", "--beta", "1")
    assert doc["J1"] == "9" and doc["verified_up_to"] == 30
    doc = validated(capsys, "linearization", "linearize", "--case", "c0", "--beta", "1")
    assert doc["Q"] == ["2", "2", "3"]


def test_reconstruct(capsys):
    rc, out, _ = call(capsys, "reconstruct", "--case", "c1", "--beta", "1", "--n", "3")
    assert rc == 0 and out.strip() == "41"


def test_pencil(capsys):
    rc, out, _ = call(capsys, "dioph", "--c", "1", "--beta", "1", "--pencil", "1,2,3,5")
    assert rc == 0 and json.loads(out)["lhs"] == "9"
    rc, _, _ = call(capsys, "dioph", "--c", "1", "--beta", "1", "--pencil", "1,1,1,3")
    assert rc == 1


def test_dioph_verify_file(tmp_path, capsys):
    path = tmp_path / "batch.json"
    path.write_text(diophantine.harvest(0, 2, 10).dumps())
    rc, out, _ = call(capsys, "dioph", "--verify", str(path))
    assert rc == 0 and json.loads(out) == {"checked": 10, "failures": []}
    doc = json.loads(path.read_text())
    doc["solutions"][3] = [1, 2, 3, 4]
    path.write_text(json.dumps(doc))
    rc, _, _ = call(capsys, "dioph", "--verify", str(path))
    assert rc == 1


def test_eds(capsys):
    doc = validated(capsys, "eds", "eds", "--x2", "2", "--x3", "3", "--x4", "8", "--n", "30")
    assert doc["divisibility"] and doc["upto"] == 30


def test_fib(capsys):
    rc, out, _ = call(capsys, "fib")
    doc = json.loads(out)
    assert rc == 0 and doc["ok"]
    assert [r["n"] for r in doc["identity"]] == list(range(4, 13))


def test_confine(capsys):
    rc, out, _ = call(capsys, "confine", "--kind", "viallet")
    doc = json.loads(out)
    assert rc == 0 and doc["agree"] and doc["confined"]
    for rep in doc["reports"]:
        jsonschema.validate(rep, schema("pattern_report"))
        assert rep["pattern"] == "e,e^-1,e^-2,e^-1,e"
    rc, out, _ = call(capsys, "confine", "--subst", "hv_tau")
    assert rc == 0 and json.loads(out)["verified"]


def test_plot_data_csv(capsys):
    rc, out, _ = call(capsys, "plot-data", "--rec", "hv", "--params", "a=1", "--seed", "1/2,1/3", "--n", "50")
    rows = list(csv.reader(io.StringIO(out)))
    assert rc == 0
    assert rows[0] == ["u_n", "u_{n+1}"]
    assert len(rows) == 52
    assert all(a[1] == b[0] for a, b in zip(rows[1:], rows[2:]))


def test_out_directory(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("SOMOSLAB_OUT", str(tmp_path / "results"))
    rc, out, _ = call(capsys, "fib", "--out", "fib.json")
    assert rc == 0 and out == ""
    assert json.loads((tmp_path / "results" / "fib.json").read_text())["ok"]
    absolute = tmp_path / "abs.json"
    call(capsys, "fib", "--out", str(absolute))
    assert absolute.exists()


def test_repro_subset(capsys):
    rc, out, _ = call(capsys, "repro", "--only", "1,10", "--format", "json")
    doc = json.loads(out)
    assert rc == 0
    jsonschema.validate(doc, schema("repro"))
    assert [d["criterion"] for d in doc] == [1, 10]


# -- determinism ------------------------------------------------------------------------------

@pytest.mark.parametrize("argv", [
    ["check-laurent", "--rec", "family(2)", "--n", "9"],
    ["dioph", "--c", "0", "--beta", "3", "--harvest", "20"],
    ["poisson", "--check", "involution", "--c", "1", "--a", "J2", "--b", "J3"],
    ["iterate", "--rec", "hv", "--params", "a=3/5", "--seed", "1/2,2/3", "--format", "json"],
])
def test_byte_identical_runs(argv):
    outs = [subprocess.run([sys.executable, "-m", "somoslab", *argv], capture_output=True).stdout
            for _ in range(2)]
    assert outs[0] == outs[1] and outs[0]


# -- field bijection with module reports ------------------------------------------------------------

def _props(name):
    s = schema(name)
    return set((s.get("items") or s)["properties"])


def test_schema_fields_match_reports():
    orbit = iterate_exact(catalog("somos4"), [1, 1, 1, 1], {"alpha": 1, "beta": 1}, 3)
    assert set(orbit.to_json()) == _props("orbit")
    assert set(analysis.check_laurent(catalog("somos4"), 5).to_json()) == _props("laurent_report")
    rec = iterate_exact(catalog("viallet-tau"), [1] * 6, {}, 10)
    assert set(analysis.height_growth(rec).to_json()) == _props("growth")
    assert set(diophantine.harvest(1, 1, 3).to_json()) == _props("solution_batch")
    rep = confinement.detect_pattern(catalog("hv"), confinement.hv_base(), {"a": 1})
    assert set(rep.to_json()) == _props("pattern_report")
    v = geometry.verify_conserved(catalog("dana-scott"), geometry.quantity("C0"))
    assert set(v.to_json()) | {"detail"} == _props("verdict")
    lin = linearize.invariant_values("c1", [1, 1, 1, 1], 1).to_json(30)
    assert set(lin) | {"Q"} == _props("linearization")
    res = repro.run_criterion(1)
    assert set(res.to_json()) == _props("repro")
