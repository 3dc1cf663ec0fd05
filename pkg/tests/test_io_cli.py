import json
import random
import subprocess
import sys

import pytest
from hypothesis import given

from synkernel import cli
from synkernel import io as wsio
from synkernel.examples import (
    default_tower,
    perturbed_theta,
    quadratic_tower,
    ramified_tower,
    random_complex,
    random_module,
    tate_curve,
)
from synkernel.modules import N_PHI_RELATION, same_structure, validate
from synkernel.selftest import selftest

from conftest import seeds

TOWERS = [default_tower(), quadratic_tower(), ramified_tower()]


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, json.loads(out or err)


# parsing


def test_builtin_unit_document_parses():
    ws = wsio.load_builtin("unit.json")
    assert ws.names() == ["unit"]
    assert validate(ws.lookup("unit")).ok


def test_builtin_workspace_parses():
    ws = wsio.load_builtin("workspace.json")
    assert {"square", "row", "id_u0", "cone_zero"} <= set(ws.names())


def test_bad_monodromy_is_rejected_with_axiom():
    doc = {"modules": {"bad": {"dim": 2, "phi": [[1, 0], [0, 1]], "N": [[0, 0], [1, 0]],
                               "filtration": [{"index": 0, "basis": [[1, 0], [0, 1]]}]}}}
    with pytest.raises(wsio.DocumentError) as exc:
        wsio.parse_obj(doc)
    assert exc.value.axiom == N_PHI_RELATION
    assert exc.value.pointer == "/modules/bad"


def test_floats_are_rejected():
    doc = {"modules": {"u": {"dim": 1, "phi": [[1.5]], "filtration": [{"index": 0, "basis": [[1]]}]}}}
    with pytest.raises(wsio.DocumentError) as exc:
        wsio.parse_obj(doc)
    assert exc.value.pointer.startswith("/modules/u/phi")


def test_syntax_error_is_reported():
    with pytest.raises(wsio.DocumentError) as exc:
        wsio.parse(b"{not json")
    assert "syntax" in exc.value.message


def test_unknown_reference_is_reported():
    doc = {"complexes": {"c": {"lo": 0, "terms": ["missing"], "differentials": []}}}
    with pytest.raises(wsio.DocumentError) as exc:
        wsio.parse_obj(doc)
    assert exc.value.pointer.startswith("/complexes/c/terms")


def test_fractions_round_trip():
    doc = {"modules": {"u": {"dim": 1, "phi": [["3/5"]], "filtration": [{"index": 2, "basis": [[1]]}]}}}
    ws = wsio.parse_obj(doc)
    again = wsio.parse(wsio.emit(ws))
    assert same_structure(again.lookup("u"), ws.lookup("u"))
    assert wsio.emit_obj(again)["modules"]["u"]["phi"] == [["3/5"]]


@given(seeds)
def test_emit_parse_is_identity_on_canonical_form(seed):
    rng = random.Random(seed)
    t = TOWERS[seed % 3]
    ws = wsio.WorkspaceDocument(t)
    ws.modules["m"] = random_module(t, rng, 3)
    c = random_complex(t, rng)
    ws.complexes["c"] = c
    ws.phcs["h"] = perturbed_theta(c, rng)
    text = wsio.emit(ws)
    again = wsio.parse(text)
    assert wsio.emit(again) == text
    assert same_structure(again.lookup("m"), ws.modules["m"])


# CLI


def test_cli_ext_unit_unit(capsys):
    code, rep = run(capsys, "ext", "unit", "unit")
    assert code == 0 and rep["H"] == [1, 1, 0]


def test_cli_syn_unit_twist_one(capsys):
    code, rep = run(capsys, "syn", "unit", "--twist", "1")
    assert code == 0 and rep["H_syn"] == [0, 2, 1]


def test_cli_examples_emits_tate_curve(capsys):
    code, rep = run(capsys, "examples", "tate-curve")
    assert code == 0
    ws = wsio.parse_obj({k: v for k, v in rep.items() if k != "verdict"})
    assert same_structure(ws.lookup("tate-curve"), tate_curve(ws.tower))


def test_cli_examples_lists_names(capsys):
    code, rep = run(capsys, "examples")
    assert code == 0 and "unit(n)" in rep["examples"]


def test_cli_non_admissible_fails(capsys):
    code, rep = run(capsys, "invariants", "non-admissible")
    assert code == 1 and rep["verdict"] == "fail"


def test_cli_tate_invariants(capsys):
    code, rep = run(capsys, "invariants", "tate-curve")
    assert code == 0
    assert (rep["invariants"]["tate-curve"]["t_N"], rep["invariants"]["tate-curve"]["t_H"]) == ("1", "1")


def test_cli_eigen_inapplicable_is_a_failure(capsys):
    code, rep = run(capsys, "invariants", "elliptic-good")
    assert code == 1 and "error" in rep["invariants"]["elliptic-good"]["admissibility"]
    code, _ = run(capsys, "invariants", "elliptic-good", "--mode", "random")
    assert code == 0


@pytest.mark.parametrize("argv", [
    ["les", "tate-curve", "--twist", "1"],
    ["leray", "unit", "--twist", "1"],
    ["split", "elliptic-good", "--twist", "1"],
    ["witness", "tate-curve", "unit(1)", "--seed", "3"],
    ["witness", "unit", "random-complex", "--seed", "4"],
    ["validate", "unit", "tate-curve"],
])
def test_cli_verdict_verbs_pass(capsys, argv):
    code, rep = run(capsys, *argv)
    assert code == 0 and rep["verdict"] == "pass"


def test_cli_split_rejects_monodromy(capsys):
    code, rep = run(capsys, "split", "tate-curve")
    assert code == 1


def test_cli_file_workspace(capsys):
    path = str(wsio.builtin_path("workspace.json"))
    code, rep = run(capsys, "validate", "--file", path)
    assert code == 0 and rep["validate"]["id_u0"]["ext_class"]["cocycle"]
    code, rep = run(capsys, "simplicial", "square", "--file", path)
    assert code == 0 and rep["cohomology"] == [0, 0, 0]
    code, rep = run(capsys, "ext", "u0", "cone_zero", "--file", path)
    assert rep["H"] == [1, 2, 1, 0]


def test_cli_bad_file_reports_pointer(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"modules": {"x": {"dim": 1, "phi": [[0]], "filtration": [{"index": 0, "basis": [[1]]}]}}}))
    code, rep = run(capsys, "validate", "--file", str(bad))
    assert code == 2 and rep["error"]["pointer"] == "/modules/x"


def test_cli_unknown_name(capsys):
    code, rep = run(capsys, "syn", "no-such-thing")
    assert code == 2 and "unknown name" in rep["error"]


def test_cli_unknown_verb():
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_cli_selftest_is_deterministic(capsys):
    _, a = run(capsys, "selftest", "--seed", "7", "--trials", "2")
    _, b = run(capsys, "selftest", "--seed", "7", "--trials", "2")
    strip = lambda r: [(s["suite"], s["passed"], s["ok"]) for s in r["suites"]]
    assert strip(a) == strip(b) and a["ok"]


def test_selftest_zero_trials_is_vacuous():
    rep = selftest(0, 0)
    assert rep["ok"] and all(s["trials"] == 0 for s in rep["suites"])


def test_console_script_runs():
    out = subprocess.run([sys.executable, "-m", "synkernel.cli", "ext", "unit", "unit(1)"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert json.loads(out.stdout)["H"] == [0, 2, 1]


def test_examples_output_round_trips(tmp_path, capsys):
    assert cli.main(["examples", "unit", "tate-curve"]) == 0
    path = tmp_path / "ex.json"
    path.write_text(capsys.readouterr().out)
    assert cli.main(["validate", "--file", str(path)]) == 0
    assert json.loads(capsys.readouterr().out)["verdict"] == "pass"
