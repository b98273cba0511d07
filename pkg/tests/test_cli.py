import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from homcone.cli import RunConfig, UsageError, main, render_structured, run

ROOT = Path(__file__).resolve().parents[1]
SCHEMA = json.loads((ROOT / "schemas" / "report.schema.json").read_text())
OUTSIDE = str(ROOT / "data" / "spin1_outside.json")


def structured(argv, tmp_path, name="report.json"):
    out = tmp_path / name
    code = main([*argv, "--format", "structured", "--output", str(out)])
    report = json.loads(out.read_text())
    jsonschema.validate(report, SCHEMA)
    assert report["exit_code"] == code
    return code, report


def test_certify_not_homogeneous(tmp_path):
    code, rep = structured(["certify", "--p", "3", "--n", "5"], tmp_path)
    assert code == 0
    assert rep["result"]["verdict"] == "NotHomogeneous"


def test_certify_inconclusive_exit_code(tmp_path):
    code, rep = structured(["certify", "--p", "inf", "--n", "3", "--samples", "2000"], tmp_path)
    assert code == 2 and rep["result"]["verdict"] == "Inconclusive"


def test_check_axioms_builtin(tmp_path):
    code, rep = structured(["check-axioms", "builtin:spin", "--m", "2"], tmp_path)
    assert code == 0 and rep["result"]["passed"]


def test_check_axioms_failure_exit(tmp_path):
    from homcone.algebra import BigradedAlgebra
    from homcone.builtins import spin
    from homcone.descriptor import write_algebra
    A = spin(2)
    inv = {k: (-v if k[0] != k[1] else v) for k, v in A.involution.items()}
    path = tmp_path / "bad.talg"
    write_algebra(BigradedAlgebra(2, A.block_dims, A.products, inv, name="bad"), path)
    code, rep = structured(["check-axioms", str(path)], tmp_path)
    assert code == 1 and rep["result"]["failed"] == ["v"]


def test_membership_outside(tmp_path):
    code, rep = structured(["membership", "builtin:spin", "--m", "1", "--element", OUTSIDE], tmp_path)
    assert code == 1 and rep["result"]["status"] == "Outside"


def test_factor_and_transport(tmp_path):
    from homcone.builtins import spin
    from homcone.descriptor import write_element
    A = spin(1)
    x, y = tmp_path / "x.json", tmp_path / "y.json"
    write_element(A.identity(), x)
    write_element(A.element({(1, 1): [2.0], (1, 2): [1.0], (2, 1): [1.0], (2, 2): [1.0]}), y)
    code, rep = structured(["factor", "builtin:spin", "--m", "1", "--element", str(y)], tmp_path)
    assert code == 0 and rep["result"]["gammas"] == [1.0, 1.0]
    code, rep = structured(
        ["transport", "builtin:spin", "--m", "1", "--element", str(x), "--target", str(y)], tmp_path
    )
    assert code == 0 and rep["result"]["residual"] <= 1e-10
    code, rep = structured(
        ["transport", "builtin:spin", "--m", "1", "--element", str(x), "--target", OUTSIDE], tmp_path
    )
    assert code == 1 and rep["result"]["transportable"] is False


def test_classify_emits_matrix(tmp_path):
    code, rep = structured(["classify", str(ROOT / "data" / "spin3.talg")], tmp_path)
    assert code == 0 and rep["result"]["kind"] == "Lorentz(5)"
    assert rep["result"]["S_shape"] == [5, 5] and len(rep["result"]["S_row_major"]) == 25
    code, rep = structured(["classify", "builtin:vinberg"], tmp_path)
    assert code == 1


def test_face_and_pcone_check(tmp_path):
    code, rep = structured(["face", "builtin:vinberg"], tmp_path)
    assert code == 0 and rep["result"]["certifies_not_strictly_convex"]
    code, rep = structured(["pcone-check", "--p", "inf", "--n", "3", "--samples", "5000"], tmp_path)
    assert code == 0 and rep["result"]["strictly_convex"] is False
    assert rep["result"]["witness"] == {"x": [1.0, 1.0], "y": [1.0, -1.0]}
    code, rep = structured(["pcone-check", "--p", "3", "--n", "3", "--samples", "5000",
                            "--point", "0.9,1,0"], tmp_path)
    assert code == 1 and rep["result"]["point"]["status"] == "Outside"


def test_lyaprank_report(tmp_path):
    argv = ["lyaprank", "--cone", "pcone", "--p", "3", "--n", "5", "--pairs", "2000", "--seed", "7"]
    code, rep = structured(argv, tmp_path)
    assert code == 0 and rep["result"]["rank"] == 1
    assert len(rep["result"]["singular_value_tail"]) == 5
    code, rep = structured(["lyaprank", "--cone", "lorentz", "--n", "4"], tmp_path)
    assert rep["result"]["rank"] == rep["result"]["expected"] == 7


def test_usage_errors_exit_64(tmp_path, capsys):
    assert main(["frobnicate"]) == 64
    assert main(["certify", "--p", "3"]) == 64
    assert "error" in capsys.readouterr().err
    code, rep = structured(["classify", str(tmp_path / "missing.talg")], tmp_path)
    assert code == 64 and "not found" in rep["result"]["error"]
    code, rep = structured(["lyaprank", "--cone", "lorentz", "--n", "5", "--pairs", "10"], tmp_path)
    assert code == 64
    code, rep = structured(["certify", "--p", "0.5", "--n", "3"], tmp_path)
    assert code == 64


def test_malformed_descriptor_location(tmp_path):
    path = tmp_path / "broken.talg"
    path.write_text('{"rank": 1, "blocks": [{"i": 1, "j": 1, "dim": 2}], "products": [], "involution": []}')
    code, rep = structured(["check-axioms", str(path)], tmp_path)
    assert code == 64 and "axiom (i)" in rep["result"]["error"]


def test_nonpositive_tolerance_rejected():
    with pytest.raises(UsageError):
        RunConfig(command="face", source="builtin:vinberg", tol=0.0)
    assert main(["face", "builtin:vinberg", "--tol", "-1"]) == 64


def test_structured_report_is_deterministic(tmp_path):
    argv = ["certify", "--p", "1.5", "--n", "3", "--seed", "11"]
    _, a = structured(argv, tmp_path, "a.json")
    _, b = structured(argv, tmp_path, "b.json")
    a.pop("duration"), b.pop("duration")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_numbers_round_trip_bit_exactly():
    code, report = run(RunConfig(command="lyaprank", cone="pcone", p="3", n=4, seed=5))
    text = render_structured(report)
    parsed = json.loads(text)
    tail = report.result["singular_value_tail"]
    assert parsed["result"]["singular_value_tail"] == tail
    for v in tail:
        assert float(format(v, ".17g")) == v


def test_non_finite_values_serialized_as_strings():
    code, report = run(RunConfig(command="membership", source="builtin:spin", m=1, element=OUTSIDE))
    assert json.loads(render_structured(report))["result"]["residual"] == "inf"


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("HOMCONE_SEED", "4242")
    assert RunConfig(command="certify").seed == 4242


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "homcone", "check-axioms", "builtin:vinberg"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert "passed: True" in proc.stdout
