import json

import pytest

from dhga.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "sum2", "--n", "3", "--trials", "3")
    assert code == 0
    assert out.strip().splitlines()[-1].endswith("PASS (pass 3, fail 0, not applicable 0)")


def test_verify_json_is_byte_identical(tmp_path, capsys):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        code, _, _ = run(capsys, "verify", "spsi-soundness", "--n", "3", "4", "--trials", "3",
                         "--seed", "7", "--parity", "even", "--format", "json", "--out", str(p))
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    data = json.loads(paths[0].read_text())
    assert isinstance(data, list) and {r["kind"] for r in data} == {"spinor", "semispinor", "doublespinor"}


def test_verify_failure_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "tensor-invariance", "--n", "4", "--kind", "semispinor",
                       "--trials", "4")
    assert code == 1
    assert "FAIL" in out


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "nope"),
        ("verify", "sum2", "--n", "9"),
        ("verify", "sum2", "--n", "4", "--kind", "spinor"),
        ("eval", "e1e2", "--n", "3"),
        ("idempotent", "--n", "3", "--kind", "semispinor"),
    ],
)
def test_config_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as info:
        raise SystemExit(main(list(argv)))
    assert info.value.code == 2


def test_idempotent(capsys):
    code, out, _ = run(capsys, "idempotent", "--n", "3", "--kind", "spinor")
    assert code == 0
    assert out.strip() == "1/4 + 1/4*e0 + 1/4i*e12 + 1/4i*e012"


def test_eval_and_classify(capsys):
    assert run(capsys, "eval", "e21 + 2e12 + 3/6", "--n", "3")[1].strip() == "1/2 + e12"
    code, out, _ = run(capsys, "classify", "1 - e12", "--n", "3", "--allow-scale")
    assert code == 0 and out.startswith("Spin")
    code, out, err = run(capsys, "classify", "1 + e0", "--n", "3")
    assert code == 1 and "parity" in out + err


def test_adjoint_and_lift(tmp_path, capsys):
    code, out, _ = run(capsys, "adjoint", "e - e12", "--n", "3", "--format", "json")
    rows = json.loads(out)["rows"]
    assert rows[1] == ["0", "0", "1", "0"] and rows[2] == ["0", "-1", "0", "0"]
    f = tmp_path / "p.json"
    f.write_text(out)
    code, out, _ = run(capsys, "lift", str(f))
    assert code == 0 and out.startswith("e - e12")
    code, out, _ = run(capsys, "lift", str(f), "--backend", "float", "--format", "json")
    assert json.loads(out)["parity"] == "even"
