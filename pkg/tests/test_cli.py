import json
import math
import subprocess
import sys

import pytest

from tightwp import clear_caches
from tightwp.cli import EXIT_CHECK, EXIT_INPUT, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(autouse=True)
def _cache(cache_dir):
    return cache_dir


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_v11_latex(capsys):
    code, out, _ = run(capsys, "volumes", "-g", "1", "-n", "1", "--basis", "wp", "--format", "latex")
    assert code == EXIT_OK and out == "\\frac{L_1^2}{48} + \\frac{\\pi^2}{12}\n"


def test_v03(capsys):
    assert run(capsys, "volumes", "-g", "0", "-n", "3")[:2] == (EXIT_OK, "1\n")


@pytest.mark.parametrize("argv", [["volumes", "-g", "0", "-n", "2"], ["volumes", "-g", "1", "-n", "0"],
                                  ["tight", "-g", "0", "-n", "1"], ["volumes", "-g", "1"],
                                  ["nonsense"], ["jt", "-g", "1", "-n", "1", "--beta", "-1"],
                                  ["tight", "-g", "1", "-n", "1", "--defects", "1", "--mu", "x.json"]])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_tight_moments(capsys):
    code, out, _ = run(capsys, "tight", "-g", "0", "-n", "4", "--basis", "moments")
    assert code == EXIT_OK
    assert out == "M0^-2 * (L1^2/2 + L2^2/2 + L3^2/2 + L4^2/2 - m1)\n"
    code, out, _ = run(capsys, "tight", "-g", "0", "-n", "4", "--format", "json")
    data = json.loads(out)
    assert data["prefactor_exponent"] == -2 and data["text"] == "L1^2/2 + L2^2/2 + L3^2/2 + L4^2/2 - m1"


def test_tight_defects(capsys):
    assert run(capsys, "tight", "-g", "0", "-n", "3", "--defects", "0")[1] == "1\n"
    code, out, _ = run(capsys, "tight", "-g", "1", "-n", "1", "--defects", "1")
    assert code == EXIT_OK
    assert out == "L1^2*L2^2/96 + L2^4/192 + L1^2*pi^2/24 + L2^2*pi^2/12 + pi^4/4\n"
    assert run(capsys, "tight", "--half-tight", "1")[1] == "1\n"


def test_csv_and_json(capsys):
    _, out, _ = run(capsys, "volumes", "-g", "1", "-n", "1", "--format", "csv")
    assert out.splitlines() == ["coeff,pi2,b1", "1/48,0,1", "1/12,1,0"]
    _, out, _ = run(capsys, "volumes", "-g", "1", "-n", "1", "--format", "json")
    assert json.loads(out)["text"] == "L1^2/48 + pi^2/12"


def test_intersection(capsys):
    assert run(capsys, "intersection", "-g", "2", "-d", "4")[1] == "1/1152\n"


def test_deterministic_and_cache_transparent(capsys, cache_dir):
    argv = ["volumes", "-g", "2", "-n", "2", "--basis", "moments", "--format", "json"]
    cold = run(capsys, *argv)[1]
    assert any(cache_dir.iterdir())
    clear_caches()
    warm = run(capsys, *argv)[1]
    uncached = run(capsys, "--no-cache", *argv)[1]
    assert cold == warm == uncached


def test_weight_file_errors(capsys, tmp_path):
    bad = write(tmp_path, "bad.json", {"atoms": [{"kind": "cone", "angle": 4.0, "weight": 0.1},
                                                 {"kind": "geodesic", "weight": 0.1}],
                                       "mode": {"formal": -2}})
    code, _, err = run(capsys, "moments", "--mu", bad)
    assert code == EXIT_INPUT
    assert "/atoms/0/angle" in err and "/atoms/1" in err and "/mode" in err
    code, _, err = run(capsys, "moments", "--mu", write(tmp_path, "broken.json", "{"))
    assert code == EXIT_INPUT and "invalid JSON" in err
    code, _, err = run(capsys, "moments", "--mu", str(tmp_path / "missing.json"))
    assert code == EXIT_INPUT


def test_moments_numeric_and_formal(capsys, tmp_path):
    f = write(tmp_path, "w.json", {"atoms": [{"kind": "cusp", "weight": 0.001}], "fzzt": None,
                                   "mode": "numeric"})
    code, out, _ = run(capsys, "moments", "--mu", f, "-K", "2")
    data = json.loads(out)
    assert code == EXIT_OK and len(data["M"]) == 3 and float(data["diagnostics"]["residual"]) <= 1e-12
    code, out, _ = run(capsys, "moments", "--mu", f, "-K", "1", "--formal", "2")
    assert json.loads(out)["R"] == ["0", "1/1000", "pi^2/1000000"]


def test_tight_with_weight(capsys, tmp_path):
    f = write(tmp_path, "w.json", {"atoms": [{"kind": "cusp", "weight": 1}], "mode": {"formal": 1}})
    code, out, _ = run(capsys, "tight", "-g", "0", "-n", "3", "--mu", f)
    assert code == EXIT_OK and out == "w^0: 1\nw^1: 2*pi^2\n"


def test_jt(capsys, tmp_path):
    code, out, _ = run(capsys, "jt", "-g", "1", "-n", "1", "--beta", "1")
    data = json.loads(out)
    assert code == EXIT_OK and data["prefactor_exponent"] == 1
    assert abs(float(data["value"]) - (1 + math.pi ** 2) / (12 * math.sqrt(math.pi))) < 1e-14
    f = write(tmp_path, "heavy.json", {"atoms": [{"kind": "geodesic", "length": 1.0, "weight": 0.05}]})
    code, _, err = run(capsys, "jt", "-g", "1", "-n", "1", "--beta", "1", "--mu", f)
    assert code == EXIT_CHECK and "critical mass" in err
    f = write(tmp_path, "formal.json", {"atoms": [], "mode": {"formal": 2}})
    assert run(capsys, "jt", "-g", "1", "-n", "1", "--beta", "1", "--mu", f)[0] == EXIT_INPUT


@pytest.mark.parametrize("suite", ["ring", "string-dilaton", "jt"])
def test_check_suites(capsys, suite):
    code, out, _ = run(capsys, "check", "--suite", suite)
    report = json.loads(out)
    assert code == EXIT_OK and report["passed"] and report["failed"] == 0


def test_check_paths(capsys):
    code, out, _ = run(capsys, "check", "--suite", "paths", "--max-complexity", "6")
    assert code == EXIT_OK and json.loads(out)["count"] > 0


def test_check_failure_exit_code(capsys, monkeypatch):
    from tightwp import checks
    monkeypatch.setitem(checks._RUNNERS, "ring", lambda c: [checks._record("ring", "forced", False)])
    assert run(capsys, "check", "--suite", "ring")[0] == EXIT_CHECK


def test_module_entry_point(cache_dir):
    res = subprocess.run([sys.executable, "-m", "tightwp", "volumes", "-g", "0", "-n", "4"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "L1^2/2 + L2^2/2 + L3^2/2 + L4^2/2 + 2*pi^2\n"
    res = subprocess.run([sys.executable, "-m", "tightwp", "volumes", "-g", "0", "-n", "2"],
                         capture_output=True, text=True)
    assert res.returncode == 2
