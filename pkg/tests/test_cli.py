import io
import json
import subprocess
import sys

import pytest

from ellmould.cli import CHECK_FAILED, OK, USAGE, main
from ellmould.mould import Mould, make_U, mould_ari, mould_swap


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_eval_a_image():
    assert run("eval", "eps(0)") == (OK, "b\n")


def test_eval_mould_rendering():
    code, text = run("eval", "[eps(4),eps(6)]", "--as", "mould")
    assert code == OK
    assert text == "depth 2: Delta_2*(-(u1 - u2)*(u1 + 2*u2)*(2*u1 + u2))\n"


def test_eval_json(tmp_path):
    path = tmp_path / "d.json"
    code, _ = run("eval", "eps(4)", "--as", "json", "--json", str(path))
    assert code == OK
    assert json.loads(path.read_text())["weight"] == 4


def test_eval_errors():
    assert run("eval", "eps(")[0] == USAGE
    assert run("eval", "eps(3)")[0] == USAGE
    assert run("eval", "phi0", "--as", "mould")[0] == USAGE


def test_relations_output():
    code, text = run("relations", "--weight", "14", "--depth", "2")
    assert code == OK
    assert text == "weight 14 depth 2: basis h(2,8), h(4,6); kernel (1, -3)\n"


def test_relations_lift(tmp_path):
    path = tmp_path / "r.json"
    code, text = run("relations", "--weight", "16", "--depth", "3", "--lift", "--json", str(path))
    assert code == OK
    assert "kernel (4, -25, 21)" in text
    assert "-231/20*[eps(4),[eps(4),eps(8)]]" in text
    assert "345/8*[eps(6),[eps(4),eps(6)]]" in text
    assert json.loads(path.read_text())["kernel"] == [["4", "-25", "21"]]


def test_relations_sweep():
    code, text = run("relations", "--sweep", "8..14", "--depth", "2")
    assert code == OK
    assert len(text.splitlines()) == 4


def test_relations_usage_errors():
    assert run("relations", "--depth", "2")[0] == USAGE
    assert run("relations", "--weight", "14", "--depth", "4")[0] == USAGE
    assert run("relations", "--weight", "6", "--depth", "2")[0] == USAGE
    assert run("relations", "--sweep", "8-12", "--depth", "2")[0] == USAGE


def test_maps():
    assert run("ma", "ab - ba") == (OK, "depth 1: -u1\n")
    assert run("psi", "eps(4)") == (OK, "depth 1: u1^2\n")
    assert run("ma", "a")[0] == USAGE
    assert run("ma")[0] == USAGE
    assert run("da", "ab - ba") == (OK, "depth 1: -1\n")


def test_mould_files(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps(make_U(2).to_json()))
    b.write_text(json.dumps(make_U(4).to_json()))
    code, text = run("mould", "ari", str(a), str(b))
    assert code == OK
    assert Mould.from_json(json.loads(text)) == mould_ari(make_U(2), make_U(4))
    s = tmp_path / "s.json"
    assert run("mould", "swap", str(a), "--json", str(s))[0] == OK
    assert Mould.from_json(json.loads(s.read_text())) == mould_swap(make_U(2))
    code, text = run("mould", "swap", str(s))
    assert Mould.from_json(json.loads(text)) == make_U(2)
    assert json.loads(run("mould", "alternal", str(a))[1]) == {"alternal": True}
    assert json.loads(run("mould", "singular", str(a))[1])["ok"] is True


def test_mould_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("mould", "swap", str(bad))[0] == USAGE
    assert run("mould", "swap", str(tmp_path / "missing.json"))[0] == USAGE
    good = tmp_path / "g.json"
    good.write_text(json.dumps(make_U(2).to_json()))
    assert run("mould", "ari", str(good))[0] == USAGE


def test_verify_core():
    code, text = run("verify", "--suite", "core", "--no-timings")
    assert code == OK
    assert "eps" in text and text.rstrip().endswith("core: ok")
    assert all(line.startswith("PASS") for line in text.splitlines()[:-1])


def test_verify_unknown_suite():
    assert run("verify", "--suite", "nope")[0] == USAGE


def test_exit_code_on_failed_check(monkeypatch):
    from ellmould import suites
    monkeypatch.setitem(suites.SUITES, "core", lambda: [("always-false", lambda: False)])
    code, text = run("verify", "--suite", "core", "--no-timings")
    assert code == CHECK_FAILED
    assert text.startswith("FAIL  always-false")


def test_output_is_deterministic():
    first = run("relations", "--weight", "16", "--depth", "3", "--lift")
    assert first == run("relations", "--weight", "16", "--depth", "3", "--lift")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ellmould", "eval", "eps(2)"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() != ""
    bad = subprocess.run([sys.executable, "-m", "ellmould", "bogus"], capture_output=True, text=True)
    assert bad.returncode == 2
