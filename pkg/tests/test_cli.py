import json
import subprocess
import sys

import pytest

from algphase.cli import demo_flagship, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    main(["build", "heisenberg:n=1,k=2", "-o", str(tmp_path / "P.json")])
    main(["build", "heisenberg:n=1,k=1", "-o", str(tmp_path / "R.json")])
    return tmp_path


def test_build_then_invariants(capsys, files):
    code, out, _ = run(capsys, "invariants", str(files / "P.json"))
    d = json.loads(out)
    assert code == 0
    assert d["dim"] == 32 and d["layer_dims"] == [32, 24, 8, 0] and d["dichotomy"] == "Weak(2)"


def test_build_extension_and_small_phases(capsys, tmp_path):
    for spec in ("unit", "dual"):
        assert main(["build", spec, "-o", str(tmp_path / f"{spec}.json")]) == 0
    assert main(["build", "heisenberg:n=1,k=1", "--bdim", "2", "-o", str(tmp_path / "e.json")]) == 0
    code, out, _ = run(capsys, "invariants", str(tmp_path / "e.json"))
    assert json.loads(out)["layer_dims"] == [10, 2, 0]


def test_validate_corrupted_phase(capsys, files):
    d = json.loads((files / "R.json").read_text())
    d["mul"][9][2][0] ^= 1
    bad = files / "bad.json"
    bad.write_text(json.dumps(d))
    code, out, err = run(capsys, "validate", str(bad))
    assert code == 1 and "FAIL" in out and "invalid:" in err
    code, _, err = run(capsys, "invariants", str(bad))
    assert code == 1


def test_malformed_file_exits_one(capsys, tmp_path):
    (tmp_path / "x.json").write_text('{"dim": 2}')
    code, _, err = run(capsys, "validate", str(tmp_path / "x.json"))
    assert code == 1 and "missing key" in err


def test_usage_errors_exit_two(capsys):
    for argv in (["frobnicate"], ["build"], ["rep", "enumerate", "x", "--maxdim", "9"], ["demo"]):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
    capsys.readouterr()


def test_quotient_extend_and_iso(capsys, files):
    q, e = files / "q.json", files / "e.json"
    assert main(["quotient", str(files / "P.json"), "-o", str(q)]) == 0
    assert main(["extend", str(files / "P.json"), "--bdim", "1", "-o", str(e)]) == 0
    w = files / "w.json"
    code, out, _ = run(capsys, "iso", str(q), str(files / "R.json"), "--witness", str(w))
    assert code == 0 and out.strip() == "yes"
    code, out, _ = run(capsys, "iso", str(q), str(files / "R.json"), "--check", str(w))
    assert code == 0 and out.strip() == "certified"
    code, out, _ = run(capsys, "iso", str(files / "P.json"), str(e))
    assert out.startswith("no")


def test_reps_and_reconstruct(capsys, files):
    reg = files / "reg.json"
    assert main(["rep", "regular", str(files / "P.json"), "-o", str(reg)]) == 0
    assert run(capsys, "validate", str(reg))[0] == 0
    code, out, _ = run(capsys, "rep", "enumerate", str(files / "R.json"), "--maxdim", "2")
    assert json.loads(out)["counts"] == {"1": 1, "2": 22}
    rec = files / "rec.json"
    assert main(["reconstruct", "--reps", str(reg), "-o", str(rec)]) == 0
    code, out, _ = run(capsys, "iso", str(rec), str(files / "R.json"))
    assert out.strip() == "yes"


def test_testing_object_and_report(capsys, files):
    code, out, _ = run(capsys, "testing-object", str(files / "P.json"))
    d = json.loads(out)
    assert code == 0 and d["rep"]["mdim"] == 8 and d["certificate"]["certified"]
    code, out, _ = run(capsys, "report", str(files / "P.json"))
    assert json.loads(out)["schema"] == "algphase/1"


def test_demo_report():
    r = demo_flagship(1, 1)
    assert r["summary"] == {"pass": len(r["checks"]), "fail": 0, "unknown": 0}
    r2 = demo_flagship(1, 2)
    gap = next(c for c in r2["checks"] if c["check"] == "kernel gap P_ext vs P")
    assert gap["gap"] == 2 and gap["status"] == "pass"


def test_demo_with_zero_budget(capsys):
    code, out, err = run(capsys, "demo", "flagship", "--budget", "0")
    assert code == 0 and "UNKNOWN" in out and "warning" in err
    assert "FAIL" not in out


def test_module_entry_point_is_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "algphase", "demo", "flagship", "--n", "1", "--bdim", "1"]
    a = subprocess.run(cmd + ["-o", str(tmp_path / "a.json")], capture_output=True, check=True)
    b = subprocess.run(cmd + ["-o", str(tmp_path / "b.json")], capture_output=True, check=True)
    assert a.stdout == b.stdout
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
