import json

import numpy as np
import pytest

from twonormlab.cli import main

GRAM_OK = {"kind": "gram", "dim": 2, "gram": [[2.0, 1.0], [1.0, 3.0]]}
GRAM_BAD = {"kind": "gram", "dim": 2, "gram": [[1.0, 2.0], [2.0, 1.0]]}
SPACE_R3 = {"kind": "gram", "dim": 3, "gram": np.eye(3).tolist()}
FUNC_LINE = {
    "b": [0.0, 0.0, 1.0],
    "c": [1.0, 0.0, 0.0],
    "domain": [[1.0, 0.0, 0.0]],
}
FAMILY = {
    "space": SPACE_R3,
    "b": [0.0, 0.0, 1.0],
    "coeffs": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.5, 0.5, 0.0]],
}


def _run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_axioms_pass_exit_zero(write_spec, capsys):
    path = write_spec("ok.json", GRAM_OK)
    code, out, err = _run(capsys, ["axioms", path, "--samples", "200"])
    assert code == 0
    report = json.loads(out)
    assert report["passed"] is True
    assert report["schema_version"] == "1"
    assert report["command"] == "axioms"
    assert len(report["axioms"]) == 5


def test_axioms_corrupted_gram_exit_one(write_spec, capsys):
    path = write_spec("bad.json", GRAM_BAD)
    code, out, err = _run(capsys, ["axioms", path, "--samples", "200"])
    assert code == 1
    report = json.loads(out)
    assert report["passed"] is False


def test_malformed_file_exit_two(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"kind": "gram", "gram": [[1,]]}')
    code, out, err = _run(capsys, ["axioms", str(path)])
    assert code == 2
    assert out == ""
    assert "error:" in err


def test_missing_file_exit_two(capsys):
    code, out, err = _run(capsys, ["axioms", "/no/such/file.json"])
    assert code == 2
    assert "error:" in err


def test_output_bytes_are_deterministic(write_spec, capsys):
    path = write_spec("ok.json", GRAM_OK)
    argv = ["axioms", path, "--samples", "150", "--seed", "7"]
    _, out1, _ = _run(capsys, argv)
    _, out2, _ = _run(capsys, argv)
    assert out1 == out2
    assert out1.endswith("\n")
    # keys are emitted sorted so the byte stream is stable
    report = json.loads(out1)
    assert list(report) == sorted(report)


def test_out_file_matches_stdout(write_spec, tmp_path, capsys):
    path = write_spec("ok.json", GRAM_OK)
    target = tmp_path / "report.json"
    code, out, _ = _run(capsys, ["axioms", path, "--samples", "100", "--out", str(target)])
    assert code == 0
    assert target.read_text() == out


def test_extend_fixture_exit_zero(write_spec, capsys):
    sp = write_spec("space.json", SPACE_R3)
    fn = write_spec("func.json", FUNC_LINE)
    code, out, _ = _run(capsys, ["extend", sp, fn])
    assert code == 0
    report = json.loads(out)
    assert report["command"] == "extend"
    assert report["norm_preserved"] is True
    assert len(report["steps"]) == 2
    assert report["final_coeffs"] == pytest.approx([1.0, 0.0, 0.0], abs=1e-9)


def test_extend_unbounded_functional_exit_one(write_spec, capsys):
    sp = write_spec("space.json", SPACE_R3)
    fn = write_spec("func.json", {"b": [0.0, 0.0, 1.0], "c": [0.0, 0.0, 1.0]})
    code, out, err = _run(capsys, ["extend", sp, fn])
    assert code == 1
    assert "error:" in err


def test_extend_alpha_rule_flag(write_spec, capsys):
    sp = write_spec("space.json", SPACE_R3)
    fn = write_spec("func.json", FUNC_LINE)
    code, out, _ = _run(capsys, ["extend", sp, fn, "--alpha-rule", "lower"])
    assert code == 0
    assert json.loads(out)["alpha_rule"] == "lower"


def test_verify_norm_suite(write_spec, capsys):
    path = write_spec("ok.json", GRAM_OK)
    code, out, _ = _run(capsys, ["verify", "norm", path, "--samples", "200"])
    assert code == 0
    report = json.loads(out)
    assert report["suite"] == "norm"
    assert report["passed"] is True
    ids = [c["id"] for c in report["checks"]]
    assert "thm-4.1" in ids
    assert ids.count("def-2.13") == 2
    for c in report["checks"]:
        assert c["passed"] is True


def test_verify_corrupted_gram_exit_one(write_spec, capsys):
    path = write_spec("bad.json", GRAM_BAD)
    code, out, _ = _run(capsys, ["verify", "norm", path, "--samples", "200"])
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_verify_family_suites(write_spec, capsys):
    path = write_spec("family.json", FAMILY)
    code, out, _ = _run(capsys, ["verify", "ubp", path, "--samples", "150"])
    assert code == 0
    report = json.loads(out)
    ids = {c["id"] for c in report["checks"]}
    assert "def-5.2" in ids
    code2, out2, _ = _run(capsys, ["verify", "weakstar", path, "--samples", "150"])
    assert code2 == 0
    assert json.loads(out2)["suite"] == "weakstar"


def test_verify_product_suite(write_spec, capsys):
    payload = {"kind": "product", "left": GRAM_OK, "right": SPACE_R3}
    path = write_spec("prod.json", payload)
    code, out, _ = _run(capsys, ["verify", "product", path, "--samples", "150"])
    assert code == 0
    ids = {c["id"] for c in json.loads(out)["checks"]}
    assert "thm-3.1" in ids
    assert "def-2.2" in ids


def test_verify_duality_suite_small(write_spec, capsys):
    path = write_spec("ok.json", GRAM_OK)
    code, out, _ = _run(capsys, ["verify", "duality", path, "--samples", "120"])
    assert code == 0
    ids = [c["id"] for c in json.loads(out)["checks"]]
    assert ids.count("thm-5.12") == 3
    assert "thm-5.13" in ids
    assert "thm-5.14" in ids


def test_tol_override_applies(write_spec, capsys):
    path = write_spec("ok.json", GRAM_OK)
    code, out, _ = _run(
        capsys,
        ["verify", "norm", path, "--samples", "150", "--tol", "norm_agree=0.5"],
    )
    assert code == 0
    assert json.loads(out)["tolerances"]["norm_agree"] == 0.5


def test_unknown_tol_name_exit_two(write_spec, capsys):
    path = write_spec("ok.json", GRAM_OK)
    code, _, err = _run(capsys, ["verify", "norm", path, "--tol", "bogus=1"])
    assert code == 2
    assert "error:" in err


def test_bad_tol_syntax_exit_two(write_spec, capsys):
    path = write_spec("ok.json", GRAM_OK)
    with pytest.raises(SystemExit) as exc:
        main(["verify", "norm", path, "--tol", "justaname"])
    assert exc.value.code == 2


def test_unknown_suite_exit_two(write_spec, capsys):
    path = write_spec("ok.json", GRAM_OK)
    with pytest.raises(SystemExit) as exc:
        main(["verify", "bogus", path])
    assert exc.value.code == 2


def test_family_file_for_space_suite_exit_two(write_spec, capsys):
    # subject type mismatch is a usage error, not a math failure
    path = write_spec("family.json", FAMILY)
    code, _, err = _run(capsys, ["verify", "norm", path])
    assert code == 2
    assert "error:" in err
