import json
import shutil
import subprocess

import pytest

from ut3check import finite
from ut3check.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def structured(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "structured")
    return code, json.loads(out)


@pytest.mark.parametrize("argv, code", [
    (["verify", "theta-classes", "--identity", "z4"], 0),
    (["verify", "mixed", "--dim", "2", "--identity", "z4new"], 0),
    (["verify", "mixed", "--dim", "3", "--identity", "z4"], 1),
    (["verify", "unitriangular", "--dim", "3", "--identity", "class2"], 0),
    (["verify", "unitriangular", "--dim", "4", "--identity", "class3"], 0),
    (["verify", "unitriangular", "--dim", "4", "--identity", "class2"], 1),
    (["verify", "diag-hom", "--alphabet", "0pm1"], 0),
    (["verify", "embedding"], 0),
    (["check-finite", "--semigroup", "ta21", "--identity", "z4"], 1),
    (["check-finite", "--semigroup", "d3", "--identity", "x1 x2 = x2 x1"], 0),
    (["rees", "criterion", "--identity", "z4"], 0),
    (["rees", "iso"], 0),
    (["rees", "corpus", "--size", "200"], 0),
    (["derive", "--check", "case8"], 0),
    (["isoterm", "--semigroup", "ta21", "--zimin", "2", "--max-len", "7"], 0),
    (["free-scan", "--generators", "t2", "--max-len", "12"], 0),
    (["malcev-report", "--alphabet", "01"], 0),
    (["zimin", "3"], 0),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


@pytest.mark.parametrize("argv", [
    ["verify", "theta-classes", "--identity", "x1 = "],
    ["verify", "theta-classes", "--identity", "nosuchname"],
    ["verify", "theta-classes", "--patterns", "12"],
    ["check-finite", "--semigroup", "missing.json"],
    ["zimin", "0"],
    ["isoterm", "--word", "x1 ?"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and err.startswith("ut3check: error:")


def test_cap_exit_code(capsys):
    assert run(capsys, "verify", "mixed", "--dim", "3", "--identity", "z4", "--cap", "100")[0] == 3
    assert run(capsys, "free-scan", "--max-len", "12", "--cap", "10")[0] == 3


def test_zimin_output(capsys):
    _, out, _ = run(capsys, "zimin", "3")
    assert "x1 x2 x1 x3 x1 x2 x1" in out


def test_structured_records(capsys):
    code, records = structured(capsys, "verify", "theta-classes", "--identity", "z4")
    assert code == 0
    names = [r["check"] for r in records]
    assert names[0] == "theta-classes" and "theta-classes/pattern 101" in names
    assert all(r["duration"] is None for r in records)
    assert all({"check", "status", "details", "duration"} <= set(r) <= {"check", "status", "details", "witness", "duration"}
               for r in records)


def test_structured_timing(capsys):
    _, records = structured(capsys, "rees", "iso", "--timing")
    assert all(isinstance(r["duration"], (float, type(None))) for r in records)


def test_mixed_witness_in_structured_output(capsys):
    code, records = structured(capsys, "verify", "mixed", "--dim", "3", "--identity", "z4")
    assert code == 1
    num = records[0]["witness"]["numeric"]
    assert all(x in (0, 1, 2) for m in num["matrices"].values() for row in m for x in row)


def test_out_file_and_roundtrip(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "derive", "--out", str(path), "--format", "structured")
    assert code == 0 and out == ""
    text = path.read_text()
    assert json.dumps(json.loads(text), indent=2, sort_keys=True) + "\n" == text


def test_check_finite_from_file(tmp_path, capsys):
    path = tmp_path / "ta.json"
    finite.dump(finite.ta21(), path)
    code, out, _ = run(capsys, "check-finite", "--semigroup", str(path))
    assert code == 0 and "6 elements" in out
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"elements": ["a", "b"], "table": [[1, 0], [0, 0]]}))
    assert run(capsys, "check-finite", "--semigroup", str(bad))[0] == 2


def test_free_scan_from_file(tmp_path, capsys):
    path = tmp_path / "gens.json"
    path.write_text(json.dumps([[[1]]]))
    assert run(capsys, "free-scan", "--generators", str(path), "--max-len", "3")[0] == 1


def test_paper_suite_text_has_summary(capsys):
    code, out, _ = run(capsys, "paper-suite")
    assert code == 0 and "23/23 checks pass" in out


@pytest.mark.skipif(shutil.which("ut3check") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["ut3check", "zimin", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "x1 x2 x1" in proc.stdout
