import io
import json

import pytest

from regdist.cli import main
from regdist.proof import from_json


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_dist_text_report(capsys):
    code, out, err = run(capsys, "dist", "a*", "a+1")
    assert code == 0
    assert "distance: 1/4 (0.250000)" in out
    assert "witness: aa" in out
    assert "states: 4" in out
    assert "iterations: 3" in out


def test_dist_json_report(capsys):
    code, out, _ = run(capsys, "dist", "a*", "a+1", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["distance"] == {"exact": "1/4", "decimal": "0.250000"}
    assert doc["witness"] == "aa"
    assert doc["lambda"] == "1/2"
    assert doc["states"] == 4 and doc["pairs"] == 6 and doc["iterations"] == 3


def test_dist_reports_the_empty_witness_distinctly(capsys):
    code, out, _ = run(capsys, "dist", "a*", "0", "--json")
    assert json.loads(out)["witness"] == ""
    code, out, _ = run(capsys, "dist", "a*", "0")
    assert 'witness: ""' in out


def test_dist_reports_no_witness_as_null(capsys):
    code, out, _ = run(capsys, "dist", "a*", "a*;1", "--json")
    doc = json.loads(out)
    assert doc["witness"] is None and doc["distance"]["exact"] == "0"
    code, out, _ = run(capsys, "dist", "a*", "a*;1")
    assert "witness: -" in out


def test_dist_lambda_flag(capsys):
    code, out, _ = run(capsys, "dist", "a*", "a+1", "--lambda", "1/3")
    assert "distance: 1/9" in out
    code, out, _ = run(capsys, "dist", "a*", "a+1", "--lambda", "0.25")
    assert "distance: 1/16" in out


def test_dist_trace(capsys):
    code, out, _ = run(capsys, "dist", "a*", "a+1", "--trace")
    assert code == 0
    assert "step 0:" in out and "step 3:" in out
    assert "(0,1)=2" in out


def test_dist_verify(capsys):
    code, _, _ = run(capsys, "dist", "a*", "a+1", "--verify")
    assert code == 0


def test_dist_dot_output(capsys, tmp_path):
    target = tmp_path / "graph.dot"
    code, _, _ = run(capsys, "dist", "a*", "a+1", "--dot", str(target))
    assert code == 0
    text = target.read_text()
    assert text.startswith("digraph") and "doublecircle" in text


@pytest.mark.parametrize(
    "argv",
    [
        ("dist", "a*", "a+("),
        ("dist", "a*", "a+1", "--lambda", "3/2"),
        ("dist", "a*", "a+1", "--lambda", "zebra"),
        ("dist", "a*", "b", "--alphabet", "a"),
        ("prove", "a*", "a+1", "not-a-number"),
    ],
)
def test_bad_input_exits_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error:" in err


def test_prove_writes_a_checkable_certificate(capsys, tmp_path):
    target = tmp_path / "cert.json"
    code, out, _ = run(capsys, "prove", "a*", "a+1", "1/4", "-o", str(target))
    assert code == 0
    assert "wrote certificate: a* = a + 1 within 1/4" in out
    cert = from_json(target.read_text())
    assert str(cert.root.eps) == "1/4"

    code, out, _ = run(capsys, "check", str(target))
    assert code == 0
    assert out.strip() == "valid: a* = a + 1 within 1/4"


def test_prove_to_stdout_is_pure_json(capsys):
    code, out, _ = run(capsys, "prove", "a*", "a+1", "1/4")
    assert code == 0
    doc = json.loads(out)
    assert doc["version"] == 1


def test_prove_refusal_names_the_distance(capsys):
    code, _, err = run(capsys, "prove", "a*", "a+1", "1/8")
    assert code == 1
    assert "refused" in err
    assert "distance: 1/4" in err
    assert "witness: aa" in err


def test_prove_tight(capsys):
    code, out, _ = run(capsys, "prove", "a*", "a+1", "--tight")
    assert json.loads(out)["root"]["conclusion"]["eps"] == "1/4"
    code, _, err = run(capsys, "prove", "a*", "a+1", "1/4", "--tight")
    assert code == 2
    code, _, err = run(capsys, "prove", "a*", "a+1")
    assert code == 2


def test_prove_verify(capsys):
    code, out, _ = run(capsys, "prove", "a*", "a+1", "1/2", "--verify")
    assert code == 0


def test_check_rejects_tampering(capsys, tmp_path):
    target = tmp_path / "cert.json"
    run(capsys, "prove", "a*", "a+1", "1/4", "-o", str(target))
    doc = json.loads(target.read_text())
    doc["root"]["conclusion"]["eps"] = "1/8"
    target.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "check", str(target))
    assert code == 1
    assert out.startswith("invalid:")


def test_check_json_result(capsys, tmp_path):
    target = tmp_path / "cert.json"
    run(capsys, "prove", "a", "b", "1/2", "-o", str(target))
    code, out, _ = run(capsys, "check", str(target), "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc == {
        "valid": True,
        "conclusion": {"left": "a", "right": "b", "eps": "1/2"},
        "error": None,
    }


def test_check_reads_stdin(capsys, monkeypatch):
    code, cert_text, _ = run(capsys, "prove", "a", "b", "1/2")
    monkeypatch.setattr("sys.stdin", io.StringIO(cert_text))
    code, out, _ = run(capsys, "check", "-")
    assert code == 0 and out.startswith("valid:")


def test_check_malformed_documents_exit_2(capsys, tmp_path, monkeypatch):
    target = tmp_path / "junk.json"
    target.write_text("{nope")
    code, _, err = run(capsys, "check", str(target))
    assert code == 2
    code, _, err = run(capsys, "check", str(tmp_path / "missing.json"))
    assert code == 2


def test_batch_table(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("a*\ta+1\na*\t0\na\ta\n\na*\ta*;1\n"))
    code, out, _ = run(capsys, "batch", "-")
    assert code == 0
    assert out.splitlines() == [
        "a*\ta+1\t1/4\taa\t",
        'a*\t0\t1\t""\t',
        "a\ta\t0\t-\t",
        "a*\ta*;1\t0\t-\t",
    ]


def test_batch_keeps_going_past_bad_rows(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("a*\ta+1\na(\tb\nno tabs here\n"))
    code, out, _ = run(capsys, "batch", "-")
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "a*\ta+1\t1/4\taa\t"
    assert lines[1].split("\t")[2] == "-" and lines[1].split("\t")[4]
    assert "two tab-separated expressions" in lines[2]


def test_batch_empty_input(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(""))
    code, out, _ = run(capsys, "batch", "-")
    assert code == 0 and out == ""


def test_batch_file_io(capsys, tmp_path):
    src = tmp_path / "pairs.tsv"
    dst = tmp_path / "result.tsv"
    src.write_text("a*\ta+1\n")
    code, _, _ = run(capsys, "batch", str(src), "--lambda", "1/3", "-o", str(dst))
    assert code == 0
    assert dst.read_text() == "a*\ta+1\t1/9\taa\t\n"


def test_nf_prints_decomposition_then_certificate(capsys):
    code, out, _ = run(capsys, "nf", "a*", "--alphabet", "ab")
    assert code == 0
    first, rest = out.split("\n", 1)
    assert first == "a;(1;a*) + b;(0;a*) + 1"
    cert = from_json(rest)
    assert cert.root.left == from_json(rest).root.left


def test_nf_certificate_checks(capsys, tmp_path, monkeypatch):
    target = tmp_path / "nf.json"
    code, out, _ = run(capsys, "nf", "(a+1);b", "-o", str(target))
    assert code == 0
    assert out.strip() == "a;((1 + 0);b + 1;0) + b;((0 + 0);b + 1;1) + 0"
    monkeypatch.setattr("sys.stdin", io.StringIO(target.read_text()))
    code, out, _ = run(capsys, "check", "-")
    assert code == 0
