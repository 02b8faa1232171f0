import json
import subprocess
import sys

import pytest

from psts import io
from psts.cli import main
from psts.constructions import pappus, veblen, weave


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_build_weave(capsys):
    code, out, _ = run(capsys, "build", "weave", "3", "veblen")
    assert code == 0
    assert io.from_json(out) == weave(3, veblen())


def test_build_variants(capsys, tmp_path):
    code, out, _ = run(capsys, "build", "convolve", "single-line", "c3", "1")
    assert code == 0 and io.from_json(out).v == 9
    code, out, _ = run(capsys, "build", "poly", "4", "sigma0", "--format", "text")
    assert code == 0 and io.from_text(out).b == 12
    code, out, _ = run(capsys, "build", "bose", "1")
    assert code == 0 and io.from_json(out).b == 12
    code, out, _ = run(capsys, "build", "catalog", "ag", "2")
    assert code == 0 and io.from_json(out).v == 9
    path = tmp_path / "w.json"
    assert main(["build", "weave", "3", "ag(2)", "-o", str(path)]) == 0
    code, out, _ = run(capsys, "build", "complete", str(path))
    assert code == 0 and io.from_json(out).b == 117
    code, out, _ = run(capsys, "--input", str(path), "build", "quotient")
    assert code == 0 and io.from_json(out).v == 9
    code, out, _ = run(capsys, "build", "weave", "6", "single-line", "--eps", "2")
    assert code == 0 and io.from_json(out).b == 18


def test_analyze_and_stdin(capsys, monkeypatch):
    import io as stdio

    monkeypatch.setattr(sys, "stdin", stdio.StringIO("a b c\n"))
    code, out, _ = run(capsys, "analyze", "-")
    doc = json.loads(out)
    assert code == 0 and (doc["v"], doc["b"], doc["r"]) == (3, 1, 1)


def test_check_exit_codes(capsys):
    code, out, _ = run(capsys, "check", "pasch-free", "ag(2)")
    assert code == 0 and json.loads(out)["holds"]
    code, out, _ = run(capsys, "check", "moufangian", "pappus")
    doc = json.loads(out)
    assert code == 1 and not doc["holds"] and len(doc["witness"]) == 3
    code, _, _ = run(capsys, "check", "anti-4-polypappian", "veblen")
    assert code == 0


def test_detect(capsys):
    code, out, _ = run(capsys, "detect", "fano", "pg(3)", "--limit", "2")
    doc = json.loads(out)
    assert code == 0 and doc["count"] == 2 and len(doc["hits"][0]["points"]) == 7
    code, out, _ = run(capsys, "detect", "pasch", "ag(2)")
    assert code == 1 and json.loads(out)["count"] == 0


def test_iso_embed_aut(capsys):
    code, out, _ = run(capsys, "iso", "pappus", "slit(2)")
    doc = json.loads(out)
    assert code == 0 and doc["isomorphic"] and len(doc["map"]) == 9
    code, _, _ = run(capsys, "iso", "pappus", "mobius-8_3")
    assert code == 1
    code, out, _ = run(capsys, "embed", "veblen", "pg(2)")
    assert code == 0 and json.loads(out)["embeds"]
    code, _, _ = run(capsys, "embed", "veblen", "ag(2)")
    assert code == 1
    code, out, _ = run(capsys, "aut", "veblen")
    assert code == 0 and json.loads(out)["order"] == 24


def test_verify(capsys, tmp_path):
    junit = tmp_path / "r.xml"
    code, out, _ = run(capsys, "verify", "bose-equivalence", "eps-weaving-components", "--junit", str(junit))
    assert code == 0
    assert "PASS bose-equivalence" in out and "2/2 checks passed" in out
    assert junit.read_text().startswith("<testsuite")
    code, _, err = run(capsys, "verify", "bogus")
    assert code == 2 and "unknown check" in err


def test_export_dot(capsys):
    code, out, _ = run(capsys, "export", "dot", "veblen", "--mode", "line-node")
    assert code == 0 and out.startswith('graph "veblen"')


def test_usage_and_input_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2
    code, _, err = run(capsys, "build", "weave", "2", "veblen")
    assert code == 2 and "m >= 3" in err
    code, _, err = run(capsys, "analyze", "no-such-thing")
    assert code == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("a b c\na b\n")
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 2 and "bad.txt:2:1" in err
    bad.write_text("a b c\na b d\n")
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 2 and "not a partial Steiner triple system" in err
    code, _, _ = run(capsys, "build", "convolve", "veblen", "z5")
    assert code == 2
    code, _, _ = run(capsys, "detect", "hexagram", "veblen")
    assert code == 2


def test_seedless_accepted(capsys):
    code, out, _ = run(capsys, "--seedless", "aut", "pappus")
    assert code == 0 and json.loads(out)["order"] == 108


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "psts", "check", "pasch-free", "pappus"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["holds"]
