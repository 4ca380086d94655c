import csv
import io
import json
import os
import subprocess
import sys

import jsonschema
import pytest

from gaussmax import schemas
from gaussmax.cli import _glue_negatives, parse_grid, run

FAST = ["--coarse-grid", "12", "--refine-rounds", "3"]


def invoke(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def report(capsys, *argv, expect=0):
    code, out, err = invoke(capsys, *argv)
    assert code == expect, err
    doc = json.loads(out)
    jsonschema.validate(doc, schemas.BY_SUBCOMMAND[argv[0]])
    assert doc["meta"]["subcommand"] == argv[0]
    return doc


def test_apply_example(capsys):
    doc = report(capsys, "apply", "--fn", "hermite:2", "--s", "0.3", "--y", "1",
                 "--method", "substitution", "--order", "20")
    assert doc["value"] == pytest.approx(1.09762, abs=1e-5)
    assert doc["method"] == "substitution"


def test_verify_example(capsys):
    doc = report(capsys, "verify", "--lemma", "L3", "--samples", "100000", "--dim", "2",
                 "--seed", "1")
    assert doc["violations"] == 0 and doc["lemma_id"] == "L3" and doc["seed"] == 1


def test_scan_example(capsys):
    doc = report(capsys, "scan", "--cone", "1,1", "--dim", "1", "--xs", "-3:3:0.5",
                 "--corpus", "default", *FAST)
    assert doc["passed"] is True
    assert doc["max_ratio"] <= doc["proof_constant"]
    assert len(doc["reports"]) == 5 and len(doc["reports"][0]["points"]) == 13


def test_kernel_and_rule(capsys):
    doc = report(capsys, "kernel", "--t", "1", "--x", "0", "--y", "0")
    assert doc["value"] == pytest.approx(1.07541, abs=1e-5)
    doc = report(capsys, "rule", "--order", "3", "--dim", "2")
    assert len(doc["weights"]) == 9 and sum(doc["weights"]) == pytest.approx(1.0)


def test_maximal_both_ops(capsys):
    hl = report(capsys, "maximal", "--op", "hl", "--fn", "ball:0,1", "--x", "0", *FAST)
    assert hl["value"] == pytest.approx(1.0)
    nt = report(capsys, "maximal", "--op", "nt", "--fn", "bump:0,0.5", "--x", "0.7",
                "--cone", "reduced", *FAST)
    assert nt["meta"]["parameters"]["cone"]["variant"] == "reduced"
    assert set(nt["argmax"]) == {"y", "t"}


def test_verify_all(capsys):
    doc = report(capsys, "verify", "--lemma", "all", "--samples", "2000", "--dim", "3")
    assert [r["lemma_id"] for r in doc["reports"]] == ["L1a", "L1b", "L2", "L3", "L3shift", "L4"]
    assert doc["violations"] == 0


def test_csv_outputs(capsys):
    code, out, _ = invoke(capsys, "rule", "--order", "2", "--dim", "2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["x0", "x1", "weight"] and len(rows) == 5
    code, out, _ = invoke(capsys, "scan", "--xs", "0;1", "--corpus", "ball:0,1", "--format", "csv",
                          *FAST)
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["x0", "nt", "hl", "ratio", "function"]
    assert [r[-1] for r in rows[1:]] == ["ball:0,1", "ball:0,1"]
    code, out, _ = invoke(capsys, "verify", "--lemma", "L2", "--samples", "1000", "--format", "csv")
    assert out.splitlines()[0] == "lemma_id,samples,violations,worst_margin,seed"


@pytest.mark.parametrize("argv", [
    ["apply", "--fn", "nope:1", "--s", "1", "--y", "0"],
    ["apply", "--fn", "bump:0,1", "--s", "0", "--y", "0"],
    ["apply", "--fn", "bump:0,1", "--s", "1", "--y", "0,0", "--dim", "1"],
    ["rule", "--order", "0"],
    ["kernel", "--t", "1", "--x", "0", "--y", "0", "--bogus"],
    ["verify", "--lemma", "L3", "--samples", "10"],
    ["verify", "--lemma", "L3", "--seed", "-1"],
    ["scan", "--xs", "0:1", "--corpus", "default"],
    ["scan", "--xs", "0", "--corpus", "hermite:2"],
    ["scan", "--xs", "0", "--cone", "1"],
    ["maximal", "--op", "nt", "--fn", "bump:0,1", "--x", "0", "--shrink", "2"],
    ["apply", "--fn", "bump:0,1", "--s", "1", "--y", "0", "--dim", "4"],
    [],
])
def test_usage_errors(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 2 and out == ""
    assert err.startswith("gaussmax: error:") and err.count("\n") == 1


def test_scan_failure_exit(capsys, monkeypatch):
    import gaussmax.verify as V
    real = V.cone_constant

    def tiny(cone, d):
        # a constant no scan can satisfy
        from dataclasses import replace
        return replace(real(cone, d), log_C_total=-1.0, C_total=0.37)

    monkeypatch.setattr(V, "cone_constant", tiny)
    code, out, _ = invoke(capsys, "scan", "--xs", "0", "--corpus", "bump:0,0.5", *FAST)
    assert code == 1 and json.loads(out)["passed"] is False


def test_output_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = invoke(capsys, "kernel", "--t", "0.5", "--x", "1", "--y", "-1", "-o", str(path))
    assert code == 0 and out == ""
    jsonschema.validate(json.loads(path.read_text()), schemas.KERNEL_REPORT)


def test_grid_parsing():
    pts = parse_grid("-1:1:0.5", 1)
    assert [p.tolist() for p in pts] == [[-1.0], [-0.5], [0.0], [0.5], [1.0]]
    assert len(parse_grid("0:1:0.5", 2)) == 9
    assert [p.tolist() for p in parse_grid("1,2;-3,0.5", 2)] == [[1.0, 2.0], [-3.0, 0.5]]
    assert _glue_negatives(["--x", "-1,2", "-o", "f"]) == ["--x=-1,2", "-o", "f"]


def _cli(args, env=None):
    full = dict(os.environ, **(env or {}))
    return subprocess.run([sys.executable, "-m", "gaussmax", *args], capture_output=True,
                          text=True, env=full, timeout=600)


def test_workers_env_and_flag():
    argv = ["scan", "--xs", "-1:1:1", "--corpus", "default", *FAST]
    serial = _cli(argv + ["--workers", "1"])
    via_env = _cli(argv, {"GAUSSMAX_WORKERS": "2"})
    assert serial.returncode == 0 and serial.stdout == via_env.stdout
    # the flag wins over the environment
    flagged = _cli(argv + ["--workers", "1"], {"GAUSSMAX_WORKERS": "bogus"})
    assert flagged.returncode == 0 and flagged.stdout == serial.stdout
    broken = _cli(argv, {"GAUSSMAX_WORKERS": "bogus"})
    assert broken.returncode == 2


def test_numpy_backend_matches():
    argv = ["apply", "--fn", "bump:0.3,0.5", "--s", "0.4", "--y", "0.2", "--method", "kernel",
            "--tol", "1e-9", "--dim", "1"]
    fast = _cli(argv)
    slow = _cli(argv, {"GAUSSMAX_DISABLE_NUMBA": "1"})
    assert fast.returncode == slow.returncode == 0
    a, b = json.loads(fast.stdout), json.loads(slow.stdout)
    assert abs(a["value"] - b["value"]) <= 1e-12
    backend = subprocess.run([sys.executable, "-c", "from gaussmax import _kernels; "
                              "print(_kernels.BACKEND)"], capture_output=True, text=True,
                             env=dict(os.environ, GAUSSMAX_DISABLE_NUMBA="1"))
    assert backend.stdout.strip() == "numpy"
