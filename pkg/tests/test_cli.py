import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rht import cli
from rht.errors import InvariantViolation

from conftest import CORPUS

SCHEMA = json.loads(resources.files("rht").joinpath("schema/output.schema.json").read_text())
VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def c(name):
    return str(CORPUS / name)


def run_json(capsys, *argv):
    code = cli.run([*argv, "--json"])
    out = json.loads(capsys.readouterr().out)
    VALIDATOR.validate(out)
    return code, out


INVOCATIONS = [
    ["check", c("h5.lie")],
    ["check", c("nojacobi.lie")],
    ["check", c("h3.cdga")],
    ["check", c("ddbar_fail.bicomplex")],
    ["check", c("bad_omega.ring")],
    ["cohomology", c("h5.lie")],
    ["cohomology", c("h7.lie"), "--degrees", "1..3"],
    ["cohomology", c("h3.cdga")],
    ["minimal1", c("h5.lie"), "--stages", "3"],
    ["minimal1", c("f5.lie")],
    ["formal1", c("h3.lie")],
    ["formal1", c("h5.lie")],
    ["formal1", c("heis5.ring")],
    ["massey", c("h3.lie"), "x1", "x1", "x2"],
    ["massey", c("h5.lie")],
    ["malcev", c("h5.lie")],
    ["malcev", c("f5.lie"), "--depth", "3"],
    ["heisenberg", c("h7.lie")],
    ["heisenberg", c("h3r2.lie")],
    ["heisenberg", c("abelian4.lie")],
    ["sasaki", "--ring", "heis5"],
    ["sasaki", "--ring", c("sigma2xT2.ring"), "--pipeline"],
    ["sasaki", "--ring", "heis3", "--mhd"],
    ["sasaki", "--ring", "heis5", "--hodge-split"],
    ["sasaki", "--ring", c("bad_omega.ring")],
    ["ddbar", c("ddbar_square.bicomplex")],
    ["ddbar", c("ddbar_fail.bicomplex")],
    ["bottchern", c("ddbar_fail.bicomplex")],
]


@pytest.mark.parametrize("argv", INVOCATIONS, ids=lambda a: " ".join(x.rsplit("/", 1)[-1] for x in a))
def test_outputs_validate_and_assert_is_pure(capsys, argv):
    code, out = run_json(capsys, *argv)
    assert code == 0
    assert out["command"] == argv[0]
    code_a, out_a = run_json(capsys, *argv, "--assert")
    assert out_a == out
    assert code_a == (1 if out["verdict"] is False else 0)


def test_formal1_h5(capsys):
    _, out = run_json(capsys, "formal1", c("h5.lie"))
    assert out["one_formal"] is True and out["h2_dims"] == [6, 5, 5]
    _, out = run_json(capsys, "formal1", c("h3.lie"))
    assert out["one_formal"] is False and out["h2_dims"] == [1, 0, 2]


def test_massey_h3(capsys):
    _, out = run_json(capsys, "massey", c("h3.lie"), "x1", "x1", "x2")
    assert out["nonzero_mod_indeterminacy"] is True


def test_massey_scan_h5_vanishes(capsys):
    # the scan's verdict is "some triple is nonzero"
    _, out = run_json(capsys, "massey", c("h5.lie"))
    assert out["verdict"] is False
    assert out["nonzero"] == 0 and out["defined"] == len(out["triples"]) > 0


def test_cohomology_values(capsys):
    _, out = run_json(capsys, "cohomology", c("h7.lie"))
    assert out["betti"][:3] == [1, 6, 14]
    _, out = run_json(capsys, "cohomology", c("h7.lie"), "--degrees", "2..3")
    assert out["degrees"] == [2, 3]
    assert out["verdict"] is None


def test_sasaki_mhd_report(capsys):
    _, out = run_json(capsys, "sasaki", "--ring", "heis5", "--mhd")
    assert out["passed"] is True
    assert out["spectral"]["E1_columns"] == {"-1": [1, 4, 6, 4, 1], "0": [1, 4, 6, 4, 1]}
    assert out["spectral"]["E2_totals"] == [1, 4, 5, 5, 4, 1]


def test_check_false_verdicts(capsys):
    code, out = run_json(capsys, "check", c("nojacobi.lie"), "--assert")
    assert code == 1 and out["verdict"] is False
    _, out = run_json(capsys, "check", c("h5.lie"))
    assert out["verdict"] is True


@pytest.mark.parametrize("argv, fragment", [
    (["cohomology", c("nojacobi.lie")], "Jacobi"),
    (["cohomology", "/nonexistent.lie"], ""),
    (["sasaki", "--ring", c("bad_omega.ring"), "--pipeline"], "omega"),
    (["sasaki", "--ring", "nosuchring"], "--ring"),
    (["ddbar", c("h5.lie")], "bicomplex"),
    (["massey", c("h3.lie"), "x1", "x2"], ""),
    (["cohomology", c("h5.lie"), "--degrees", "3..1"], ""),
])
def test_input_errors_exit_2(capsys, argv, fragment):
    code, out = run_json(capsys, *argv)
    assert code == 2
    assert out["verdict"] is None and out["error"]["message"]
    assert fragment in json.dumps(out)


def test_parse_error_has_location(tmp_path, capsys):
    f = tmp_path / "bad.lie"
    f.write_text("lie g {\n  basis a b;\n  bracket [b,a] = a;\n}\n")
    code, out = run_json(capsys, "check", str(f))
    assert code == 2
    (d,) = out["error"]["diagnostics"]
    assert (d["line"], d["column"]) == (3, 3)


def test_max_dim_cap(monkeypatch, capsys):
    monkeypatch.setenv("RHT_MAX_DIM", "9")
    code, out = run_json(capsys, "cohomology", c("h5.lie"))
    assert code == 2 and "RHT_MAX_DIM" in out["error"]["message"]
    monkeypatch.setenv("RHT_MAX_DIM", "30")
    assert run_json(capsys, "cohomology", c("h7.lie"))[0] == 2
    monkeypatch.setenv("RHT_MAX_DIM", "abc")
    assert run_json(capsys, "cohomology", c("h3.lie"))[0] == 2
    monkeypatch.delenv("RHT_MAX_DIM")
    assert run_json(capsys, "cohomology", c("h7.lie"))[0] == 0


def test_invariant_violation_exit_3(monkeypatch, capsys):
    def boom(args):
        raise InvariantViolation("d^2 != 0 after reduction")
    monkeypatch.setitem(cli.COMMANDS, "cohomology", boom)
    code, out = run_json(capsys, "cohomology", c("h3.lie"))
    assert code == 3 and out["error"]["kind"] == "internal"


def test_text_output(capsys):
    assert cli.run(["formal1", c("h5.lie")]) == 0
    text = capsys.readouterr().out
    assert "one_formal: true" in text


@given(st.sampled_from([True, False, None]), st.booleans(), st.dictionaries(st.text(max_size=5), st.integers()))
def test_exit_code_depends_only_on_verdict(verdict, assert_, extra):
    report = {**extra, "verdict": verdict}
    assert cli.exit_code(report, assert_) == (1 if assert_ and verdict is False else 0)


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "rht.cli", "formal1", c("h5.lie"), "--json"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["h2_dims"] == [6, 5, 5]
