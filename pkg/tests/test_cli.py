import json

import pytest

from conftest import FIXTURES
from heckelab.cli import SCHEMA, main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_quadratic(capsys):
    code, out, _ = run(capsys, "compute", FIXTURES / "a1.json", "T[s1]*T[s1]")
    assert code == 0
    assert out.strip() == "(q^1 - 1)*T[s1] + q^1*T[e]"


def test_compute_theta_product(capsys):
    code, out, _ = run(capsys, "compute", FIXTURES / "a1.json", "th[1]*th[-1]")
    assert (code, out.strip()) == (0, "th[0]")


def test_compute_forced_algebra(capsys):
    code, out, _ = run(capsys, "compute", "--algebra", "bernstein", FIXTURES / "a1.json", "T[s1]*th[1]")
    assert code == 0
    assert out.strip() == "th[-1]*T[s1] + (q^1 - 1)*th[1] + (q^1 - 1)*th[0]"


def test_malformed_expression_exit_2(capsys):
    code, _, err = run(capsys, "compute", FIXTURES / "a1.json", "T[s1]**")
    assert code == 2 and "ParseError" in err


def test_missing_file_exit_2(capsys, tmp_path):
    code, _, err = run(capsys, "verify", tmp_path / "nope.json")
    assert code == 2 and "cannot read" in err


def test_invalid_json_exit_2(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(capsys, "verify", p)[0] == 2


def test_unknown_generator_exit_2(capsys):
    code, _, err = run(capsys, "compute", FIXTURES / "a1.json", "T[s7]")
    assert code == 2 and "error:" in err


def test_bad_labels_exit(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"datum": "A2", "labels": {"lambda": [1, 2]}}))
    code, _, err = run(capsys, "compute", p, "T[s1]")
    assert code == 3 and "BadLabels" in err


def test_verify_appendix_c(capsys):
    code, out, err = run(capsys, "verify", "--suite", "appendixC", "--max-terms", "3", FIXTURES / "a1.json")
    data = json.loads(out)
    assert code == 0 and data["ok"] and data["schema"] == SCHEMA
    assert all(c["verdict"] == "pass" for c in data["checks"])
    assert "suite appendixC: PASS" in err


def test_verify_negative_fixture(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "appendixD", FIXTURES / "d_n2.json")
    data = json.loads(out)
    assert code == 0
    verdict = next(c for c in data["checks"] if c["name"] == "verdict")
    assert verdict["witness"]["got"] == "Invalid"


def test_verify_failure_exit_1(capsys, tmp_path):
    cfg = json.loads((FIXTURES / "d_k0.json").read_text())
    cfg["expect"] = "Invalid"
    p = tmp_path / "wrong.json"
    p.write_text(json.dumps(cfg))
    code, out, err = run(capsys, "verify", p)
    assert code == 1 and not json.loads(out)["ok"]
    assert "[FAIL] appendixD/verdict" in err


def test_verify_out_file(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", "--out", out_file, FIXTURES / "d_k1.json")
    assert code == 0
    assert json.loads(out_file.read_text())["ok"]
    assert "suite all: PASS" in out


def test_reports_are_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        run(capsys, "verify", "--suite", "appendixB", "--seed", "7", "--max-terms", "3",
            "--out", f, FIXTURES / "a1_unequal.json")
    assert a.read_bytes() == b.read_bytes()


def test_seed_changes_nothing_in_verdicts(capsys):
    verdicts = []
    for seed in (0, 1):
        _, out, _ = run(capsys, "verify", "--suite", "appendixC", "--seed", seed, "--max-terms", "3",
                        FIXTURES / "a1.json")
        verdicts.append({c["name"]: c["verdict"] for c in json.loads(out)["checks"]})
    assert verdicts[0] == verdicts[1]


def test_quotient_rank_one_dump(capsys):
    code, out, _ = run(capsys, "quotient", FIXTURES / "q_a2_rank1.json")
    data = json.loads(out)
    assert code == 0 and data["ok"]
    assert len(data["quotient"]["basis"]) == 2
    assert "labels" in data["datum"]


def test_quotient_identity_echoes_gamma(capsys):
    cfg = json.loads((FIXTURES / "q_a1_identity.json").read_text())
    code, out, _ = run(capsys, "quotient", FIXTURES / "q_a1_identity.json")
    data = json.loads(out)
    assert code == 0
    grads = sorted(tuple(f["gradient"]) for f in data["quotient"]["system"]["families"])
    assert grads == sorted(tuple(g["root"]["gradient"]) for g in cfg["gamma"])


def test_quotient_invalid_gamma(capsys):
    code, out, _ = run(capsys, "quotient", FIXTURES / "q_c2_invalid.json")
    data = json.loads(out)
    assert code == 1 and not data["ok"]
    assert any(c["name"] == "extendable" and c["verdict"] == "fail" for c in data["checks"])


def test_unknown_suite_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "--suite", "nope", str(FIXTURES / "a1.json")])
