import csv
import json
import subprocess
import sys

import pytest

from bddlat.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_alpha_command(capsys):
    code, out, _ = run(capsys, "alpha", "--p", "2", "--C", "inf")
    assert code == 0
    assert json.loads(out)["value"] == pytest.approx(1.05006, abs=1e-5)
    code, out, _ = run(capsys, "alpha", "--p", "3", "--C", "2")
    assert json.loads(out)["value"] == pytest.approx(1.1418, abs=1e-4)


def test_alpha_rejects_small_p(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["alpha", "--p", "0.5", "--C", "2"])
    assert exc.value.code == 2


def test_curve_command(tmp_path, capsys):
    out = tmp_path / "c.csv"
    code, _, _ = run(capsys, "curve", "--p-min", "4.2", "--p-max", "4.35", "--step", "0.01",
                     "--C", "2", "inf", "--out", str(out))
    assert code == 0
    rows = list(csv.DictReader(out.open()))
    assert list(rows[0]) == ["p", "C", "alpha_star", "upper_bound", "alt_upper_bound"]
    for C in ("2", "inf"):
        series = [r for r in rows if r["C"] == C]
        vals = [float(r["alpha_star"]) for r in series]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert all(float(r["alpha_star"]) <= float(r["upper_bound"]) for r in series)
    inf_rows = {round(float(r["p"]), 2): float(r["alpha_star"]) for r in rows if r["C"] == "inf"}
    assert inf_rows[4.27] > 2**-0.5 > inf_rows[4.29]


def test_curve_marks_undefined_alt_bound(tmp_path, capsys):
    out = tmp_path / "c.csv"
    run(capsys, "curve", "--p-min", "1.5", "--p-max", "1.5", "--step", "1", "--C", "inf", "--out", str(out))
    (row,) = list(csv.DictReader(out.open()))
    assert row["alt_upper_bound"] == "n/a"


def test_curve_unwritable(capsys):
    code, _, err = run(capsys, "curve", "--p-min", "2", "--p-max", "2", "--out", "/nonexistent/dir/x.csv")
    assert code == 2


def _write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_reduce_inf_deterministic(tmp_path, capsys):
    src = _write(tmp_path, "g.json", {"kind": "gapcvp", "p": "inf", "basis": [["2"]], "target": ["1"]})
    o1, o2 = tmp_path / "o1.json", tmp_path / "o2.json"
    assert run(capsys, "reduce", "--in", src, "--seed", "1", "--out", str(o1))[0] == 0
    assert run(capsys, "reduce", "--in", src, "--seed", "2", "--out", str(o2))[0] == 0
    assert o1.read_bytes() == o2.read_bytes()
    out = json.loads(o1.read_text())
    assert out["kind"] == "bdd" and len(out["basis"][0]) == 2


def test_reduce_seeded_byte_identical(tmp_path, capsys):
    src = _write(tmp_path, "g.json", {"kind": "gapcvp", "p": "2", "basis": [["2", "0"], ["0", "2"]],
                                      "target": ["1", "0"]})
    paths = [tmp_path / f"o{k}.json" for k in range(3)]
    traces = [tmp_path / f"t{k}.json" for k in range(3)]
    for k, seed in enumerate((7, 7, 8)):
        code, _, _ = run(capsys, "reduce", "--in", src, "--C", "2", "--policy", "random",
                         "--seed", str(seed), "--out", str(paths[k]), "--trace", str(traces[k]))
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert traces[0].read_bytes() == traces[1].read_bytes()
    assert paths[0].read_bytes() != paths[2].read_bytes()
    trace = json.loads(traces[0].read_text())
    assert trace["draw"]["q"] >= 10 * 4
    assert json.loads(paths[0].read_text())["kind"] == "bdd"


def test_reduce_errors(tmp_path, capsys):
    assert run(capsys, "reduce", "--in", str(tmp_path / "missing.json"))[0] == 2
    bad = _write(tmp_path, "b.json", {"kind": "gapcvp"})
    assert run(capsys, "reduce", "--in", bad)[0] == 2
    bdd = _write(tmp_path, "k.json", {"kind": "bdd", "p": "2", "basis": [["1"]], "target": ["0"], "alpha": "1"})
    assert run(capsys, "reduce", "--in", bdd)[0] == 2
    src = _write(tmp_path, "g.json", {"kind": "gapcvp", "p": "2", "basis": [["2"]], "target": ["1"]})
    code, _, err = run(capsys, "reduce", "--in", src, "--C", "2", "--alpha", "1.2")
    assert code == 3 and "alpha" in err


def test_reduce_reports_weak_sparsification(tmp_path, capsys, monkeypatch):
    import bddlat.reductions as red

    monkeypatch.setattr(red, "compute_S_bound", lambda p, n, r: red.SBound(10**6, True))
    src = _write(tmp_path, "g.json", {"kind": "gapcvp", "p": "2", "basis": [["2"]], "target": ["1"]})
    code, _, err = run(capsys, "reduce", "--in", src, "--C", "2")
    assert code == 3 and "10 S" in err


def test_count_command(capsys):
    code, out, _ = run(capsys, "count", "--n", "2", "--p", "2", "--r", "1")
    rep = json.loads(out)
    assert code == 0 and rep["count"] == 5 and rep["bound"] >= 5
    _, out, _ = run(capsys, "count", "--n", "3", "--p", "2", "--r-pth", "3/4", "--center", "half")
    assert json.loads(out)["count"] == 8
    _, out, _ = run(capsys, "count", "--n", "3", "--p", "2", "--r", "0.8661", "--center", "half")
    assert json.loads(out)["count"] == 8
    # 0.866 is just below sqrt(3)/2, so no binary vector qualifies under exact comparison
    _, out, _ = run(capsys, "count", "--n", "3", "--p", "2", "--r", "0.866", "--center", "half")
    assert json.loads(out)["count"] == 0
    _, out, _ = run(capsys, "count", "--n", "4", "--p", "inf", "--r", "1", "--open")
    assert json.loads(out)["count"] == 0
    assert run(capsys, "count", "--n", "2", "--p", "2")[0] == 2


def test_verify_mo(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "mo")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["suites"]["mo"]["violations"] == 0


def test_verify_pipeline(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "pipeline", "--trials", "10", "--seed", "3")
    rep = json.loads(out)
    assert code == 0 and rep["suites"]["pipeline"]["false_positives"] == 0


def test_verify_sparsify_small(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "sparsify", "--trials", "1500", "--seed", "1")
    rep = json.loads(out)["suites"]["sparsify"]
    assert code == 0 and rep["lower"] >= 0.025


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "bddlat", "alpha", "--p", "5"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["value"] == pytest.approx(0.672558, abs=1e-5)
