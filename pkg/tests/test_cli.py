import json

import pytest

from proofforge.cli import main
from proofforge.proofmodel import read_json

CHAIN = ("sub(A, only(r, C1))\n"
         "sub(C1, or(C2, C3))\n"
         "sub(C2, C3)\n"
         "sub(only(r, C3), B)\n")


@pytest.fixture
def chain_file(tmp_path):
    f = tmp_path / "chain.of"
    f.write_text(CHAIN)
    return str(f)


def test_classify(chain_file, capsys):
    assert main(["classify", chain_file]) == 0
    out = capsys.readouterr().out.splitlines()
    assert "sub(A, B)" in out and "sub(C1, C3)" in out


def test_classify_missing_file(capsys):
    assert main(["classify", "/nonexistent.of"]) == 1
    assert "cannot read" in capsys.readouterr().err


def test_classify_parse_error(tmp_path, capsys):
    f = tmp_path / "bad.of"
    f.write_text("sub(A,")
    assert main(["classify", str(f)]) == 1


def test_justify(chain_file, capsys):
    assert main(["justify", chain_file, "--goal", "sub(A, B)"]) == 0
    out = capsys.readouterr().out
    assert "sub(C2, C3)" in out


def test_justify_not_entailed(chain_file, capsys):
    assert main(["justify", chain_file, "--goal", "sub(B, A)"]) == 2


def test_justify_bad_goal(chain_file, capsys):
    assert main(["justify", chain_file, "--goal", "nonsense("]) == 1


@pytest.mark.parametrize("method", ["elim-heur", "elim-name-opt",
                                    "elim-size-opt", "detailed"])
def test_explain_writes_proof(chain_file, tmp_path, capsys, method):
    out = tmp_path / "proof.json"
    dot = tmp_path / "proof.dot"
    rc = main(["explain", chain_file, "--goal", "sub(A, B)",
               "--method", method, "--out", str(out), "--dot", str(dot)])
    assert rc == 0
    proof = read_json(out.read_text())
    assert proof.vertices
    assert dot.read_text().startswith("digraph")


def test_explain_prints_to_stdout_by_default(chain_file, capsys):
    rc = main(["explain", chain_file, "--goal", "sub(A, B)",
               "--method", "elim-heur"])
    assert rc == 0
    obj = json.loads(capsys.readouterr().out)
    assert obj["goal"] == "A ⊑ B"


def test_explain_elk_rejects_non_el_input(chain_file, capsys):
    rc = main(["explain", chain_file, "--goal", "sub(A, B)",
               "--method", "elk-size"])
    assert rc == 1
    assert "EL" in capsys.readouterr().err


def test_explain_elk_on_el_input(tmp_path, capsys):
    f = tmp_path / "el.of"
    f.write_text("sub(A, some(r, C))\nsub(C, D)\nsubrole(r, s)\n"
                 "sub(some(s, D), B)\n")
    rc = main(["explain", str(f), "--goal", "sub(A, B)",
               "--method", "elk-size"])
    assert rc == 0


def test_explain_not_entailed(chain_file, capsys):
    rc = main(["explain", chain_file, "--goal", "sub(B, A)",
               "--method", "elim-heur"])
    assert rc == 2


def test_explain_known_signature(chain_file, tmp_path, capsys):
    sig = tmp_path / "known.sig"
    sig.write_text("C1 C3\n")
    out = tmp_path / "proof.json"
    rc = main(["explain", chain_file, "--goal", "sub(A, B)",
               "--method", "detailed", "--known", str(sig),
               "--out", str(out)])
    assert rc == 0
    proof = read_json(out.read_text())
    assert any(v.known for v in proof.vertices)


def test_explain_timeout_env(chain_file, tmp_path, monkeypatch, capsys):
    # an absurdly small timeout must cancel; a partial result gives exit 3
    monkeypatch.setenv("PROOFFORGE_TIMEOUT_SECS", "0.0001")
    rc = main(["explain", chain_file, "--goal", "sub(A, B)",
               "--method", "elim-size-opt"])
    assert rc in (0, 3)  # racy by nature: cancelled or finished just in time


def test_forget(chain_file, capsys):
    assert main(["forget", chain_file, "--keep", "A,B"]) == 0
    assert capsys.readouterr().out.strip() == "sub(A, B)"


def test_forget_reports_stuck_names(tmp_path, capsys):
    f = tmp_path / "cyc.of"
    f.write_text("sub(A, some(r, A))\nsub(B, A)\n")
    assert main(["forget", str(f), "--keep", "B"]) == 0
    captured = capsys.readouterr()
    assert "A" in captured.err


def test_check_valid_and_invalid(chain_file, tmp_path, capsys):
    out = tmp_path / "proof.json"
    main(["explain", chain_file, "--goal", "sub(A, B)",
          "--method", "elim-heur", "--out", str(out)])
    assert main(["check", chain_file, "--proof", str(out),
                 "--goal", "sub(A, B)"]) == 0
    # tamper with the proof: swap the goal
    assert main(["check", chain_file, "--proof", str(out),
                 "--goal", "sub(B, A)"]) == 2


def test_check_rejects_malformed_json(chain_file, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["check", chain_file, "--proof", str(bad),
                 "--goal", "sub(A, B)"]) == 1
