import json

import pytest

from seqsat import cli
from seqsat.dimacs import emit_dimacs
from seqsat.core import Formula
from seqsat.solution import SolveReport, SolveStatus
from golden import CLAUSES

FIVE_CELLS = Formula(((1, 2, 3), (-1, -2, 3), (1, -2, -3), (-1, 2, -3), (1, 2, -3)))


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, f in {
        "example": Formula(CLAUSES),
        "contra": Formula(((1,), (-1,))),
        "five": FIVE_CELLS,
    }.items():
        p = tmp_path / f"{name}.cnf"
        p.write_text(emit_dimacs(f))
        out[name] = str(p)
    g = tmp_path / "garbage.txt"
    g.write_text("this is not dimacs\n")
    out["garbage"] = str(g)
    return out


def run(argv, capsys):
    code = cli.main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_decide_example(files, capsys):
    code, out, _ = run(["decide", files["example"]], capsys)
    assert code == 10
    assert "c solved in preprocessing" in out
    assert "v 2 -1 0" in out.splitlines()


def test_decide_claimed(files, capsys):
    code, out, _ = run(["decide", files["five"], "--stats"], capsys)
    assert code == 10
    assert "s SATISFIABLE (claimed)" in out
    stats = json.loads(out.strip().splitlines()[-1])
    assert stats["runs"][0]["sset_pairs_compared"] == 45


def test_decide_unsat(files, capsys):
    code, out, _ = run(["decide", files["contra"]], capsys)
    assert code == 20 and "s UNSATISFIABLE" in out


def test_decide_garbage(files, capsys):
    code, _, err = run(["decide", files["garbage"]], capsys)
    assert code == 1 and err


def test_decide_missing_file(tmp_path, capsys):
    code, _, err = run(["decide", str(tmp_path / "nope.cnf")], capsys)
    assert code == 1 and "cannot read" in err


def test_unknown_flag_is_an_error(files, capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["decide", files["example"], "--bogus"])
    assert info.value.code == 1


def test_policy_flags(files, capsys):
    code, out, _ = run(["decide", files["five"], "--single-pass", "--no-phi", "--lifo", "--no-preprocess", "--explain"], capsys)
    assert code == 10


def test_solve(files, capsys):
    code, out, _ = run(["solve", files["example"]], capsys)
    assert code == 10 and "s SATISFIABLE" in out and "v 2 -1 0" in out
    code, out, _ = run(["solve", files["five"]], capsys)
    assert code == 10 and any(l.startswith("v ") for l in out.splitlines())
    code, out, _ = run(["solve", files["contra"]], capsys)
    assert code == 20 and not any(l.startswith("v ") for l in out.splitlines())


def test_solve_stalled(files, capsys, monkeypatch, tmp_path):
    monkeypatch.setattr(cli, "solve", lambda f, p: SolveReport(SolveStatus.STALLED, reason="forced"))
    monkeypatch.setenv("SEQSAT_FINDINGS_DIR", str(tmp_path / "found"))
    code, out, _ = run(["solve", files["five"]], capsys)
    assert code == 30
    assert "FINDING" in out and "s UNKNOWN" in out
    written = list((tmp_path / "found").glob("stalled-*.cnf"))
    assert len(written) == 1 and str(written[0]) in out


def test_audit(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({"id": "tiny", "exhaustive": {"max_vars": 2, "max_clauses": 2}}))
    out_file = tmp_path / "r.json"
    code, _, err = run(["audit", str(spec), "--out", str(out_file)], capsys)
    assert code == 0
    rep = json.loads(out_file.read_text())
    assert rep["instances"] == 36 and rep["soundness_ok"]
    assert "tiny" in err


def test_audit_bad_spec(tmp_path, capsys):
    spec = tmp_path / "spec.json"
    spec.write_text('{"id": "x", "random": "nope"')
    code, _, err = run(["audit", str(spec)], capsys)
    assert code == 1 and "spec" in err
    code, _, _ = run(["audit", "no-such-builtin"], capsys)
    assert code == 1


def test_audit_builtin_limit(capsys):
    code, out, _ = run(["audit", "exhaustive", "--limit", "20"], capsys)
    assert code == 0 and json.loads(out)["instances"] == 20


def test_fuzz(capsys):
    code, out, _ = run(["fuzz", "--count", "25", "--seed", "3", "--vars", "3:5", "--clauses", "2:9", "--confluence"], capsys)
    assert code == 0
    assert json.loads(out)["instances"] == 25
    code, _, _ = run(["fuzz", "--vars", "1:2"], capsys)
    assert code == 1
    with pytest.raises(SystemExit):
        cli.main(["fuzz", "--vars", "x"])


def test_stats(files, tmp_path, capsys):
    code, out, _ = run(["stats", files["five"]], capsys)
    assert code == 0
    assert json.loads(out)["pairs_per_run"] == 45
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf x\n")
    code, out, _ = run(["stats", str(tmp_path)], capsys)
    assert code == 1
    bad.unlink()
    # non-DIMACS suffixes are skipped in directory mode
    csv_path = tmp_path / "rows.csv"
    code, out, _ = run(["stats", str(tmp_path), "--csv", str(csv_path)], capsys)
    assert code == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0].startswith("name,") and len(lines) == 4


def test_stats_scaling(capsys):
    code, out, _ = run(["stats", "--scaling", "--sizes", "15,30"], capsys)
    assert code == 0
    d = json.loads(out)
    assert d["within_bound"] and len(d["instances"]) == 2
    code, _, _ = run(["stats", "--scaling", "--sizes", "10"], capsys)
    assert code == 1
    code, _, _ = run(["stats"], capsys)
    assert code == 1
