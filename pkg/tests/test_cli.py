import io
import json
import subprocess
import sys

import pytest

from exactcomp import cli


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_depprod_with_oracle_on_the_bundled_instance():
    code, out, _ = run("depprod", "--f", "f", "--g", "g", "--oracle")
    assert code == 0
    assert "iso: yes, classes per index: [2]" in out.splitlines()
    assert out.rstrip().endswith("ok")


def test_depprod_json_report(strategy):
    code, out, _ = run("--report", "json", "--strategy", str(strategy), "depprod",
                       "--f", "f", "--g", "g", "--oracle")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == "exactcomp.report/1" and rep["ok"]
    assert rep["strategy"] == str(strategy)
    iso = next(c for c in rep["checks"] if c["name"] == "oracle iso")
    assert iso["classes_per_index"] == iso["oracle"] == [2]


def test_collapsed_pair_from_an_instance_file(tmp_path):
    doc = json.loads((cli.resources.files("exactcomp.data") / cli.DEFAULT_INSTANCE).read_text())
    del doc["pairs"]["two_sections"]
    path = tmp_path / "collapsed.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run("--instance", str(path), "depprod", "--f", "f", "--g", "g", "--oracle")
    assert code == 0
    assert "iso: yes, classes per index: [3]" in out


def test_cetcs_passes_and_is_deterministic():
    args = ("--report", "json", "--max-size", "2", "cetcs")
    first, second = run(*args), run(*args)
    assert first[0] == 0
    assert first[1] == second[1]
    rep = json.loads(first[1])
    status = {c["name"]: c["status"] for c in rep["checks"]}
    assert status["C3"] == "skipped"
    assert all(s == "pass" for n, s in status.items() if n != "C3")


def test_cetcs_text_mentions_the_skip_reason():
    code, out, _ = run("--max-size", "2", "cetcs")
    assert code == 0
    assert "no NNO in finite world" in out


def test_bhk_command(strategy):
    code, out, _ = run("--strategy", str(strategy), "bhk",
                       "--formula", "exists y:Y. G(y, x)", "--context", "x:X")
    assert code == 0
    assert "satisfied by: ['x0', 'x1']" in out
    code, out, _ = run("bhk", "--formula", "forall y:Y. G(y, x) -> y = y", "--context", "x:X")
    assert code == 0


def test_fullness_command():
    code, out, _ = run("fullness", "--f", "f", "--g", "g")
    assert code == 0
    assert "codes: 2, rows: 4" in out


def test_base_and_complete_commands():
    code, out, _ = run("--max-size", "2", "check-base")
    assert code == 0 and "relation SameX: equivalence" in out and "relation G" not in out
    code, out, _ = run("--max-size", "2", "complete")
    assert code == 0
    assert "SameX: 2 elements, 1 classes" in out


@pytest.mark.parametrize("argv, fragment", [
    (("bhk", "--formula", "x = "), "unexpected end"),
    (("bhk", "--formula", "x = y", "--context", "x:X, y:Y"), "error:"),
    (("depprod", "--f", "f", "--g", "nope"), "unknown map 'nope'"),
    (("--instance", "/nonexistent/doc.json", "cetcs"), "no such instance file"),
])
def test_errors_exit_two(argv, fragment):
    code, out, err = run(*argv)
    assert code == 2 and out == ""
    assert fragment in err


def test_bad_instance_exits_two_with_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"sets": {"X": ["a"]},\n "maps": {"f": {"dom": "X", "cod": "X", "table": {"a": "b"}}}}')
    code, _, err = run("--instance", str(path), "complete")
    assert code == 2
    assert "'b' is not an element of 'X'" in err and "line 2" in err


def test_usage_errors_exit_two(capsys):
    assert run("frobnicate")[0] == 2
    assert run("depprod", "--f", "f")[0] == 2
    assert run("--strategy", "lavish", "cetcs")[0] == 2
    assert run()[0] == 2


def test_failing_check_exits_one(monkeypatch):
    monkeypatch.setattr(cli, "check_image_sufficiency", lambda fam, seed=0: False)
    code, out, _ = run("fullness", "--f", "f", "--g", "g")
    assert code == 1
    assert "image sufficiency: fail" in out
    assert out.rstrip().endswith("FAILED")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "exactcomp", "depprod", "--f", "f", "--g", "g", "--oracle"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "iso: yes, classes per index: [2]" in proc.stdout
