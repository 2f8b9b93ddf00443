from __future__ import annotations

import subprocess
import sys

import pytest

from cgilao import __version__
from cgilao.bench import read_csv
from cgilao.cli import main
from cgilao.domains import parse_grounded


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_fig2(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "fig2", "--algo", "cg-ilao", "--heuristic", "det",
                       "--epsilon", "1e-4")
    assert code == 0
    assert "v_s0 = 4\n" in out


def test_solve_tw_vi(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "tw:1,2", "--algo", "vi", "--heuristic", "zero")
    assert code == 0 and "status: solved" in out


def test_unknown_algo_is_usage_error(capsys):
    code, _, err = run(capsys, "solve", "--problem", "fig2", "--algo", "nosuch")
    assert code == 2 and "--algo" in err


@pytest.mark.parametrize(
    "argv, flag",
    [
        (["solve", "--problem", "fig2", "--algo", "vi", "--epsilon", "0"], "--epsilon"),
        (["solve", "--problem", "fig2", "--algo", "vi", "--heuristic", "pert:1.5"], "--heuristic"),
        (["solve", "--problem", "fig2", "--algo", "vi", "--timeout", "-1"], "--timeout"),
        (["solve", "--problem", "tw:7", "--algo", "vi"], "tw:7"),
        (["bench", "--problems", "fig2", "--algos", "vi", "--seeds", "0"], "--seeds"),
        (["nosuch"], "invalid choice"),
        ([], "required"),
    ],
)
def test_usage_errors_name_the_flag(capsys, argv, flag):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert flag in err and len(err.strip().splitlines()) == 1


def test_timeout_is_a_solve_failure(capsys):
    code, out, _ = run(capsys, "solve", "--problem", "tw:1,2", "--algo", "ilao", "--timeout", "0")
    assert code == 1 and "status: timeout" in out


def test_version_and_help(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and __version__ in out
    code, out, _ = run(capsys, "--help")
    assert code == 0 and "verify" in out and "density" in out


def test_gen_round_trips(capsys, tmp_path):
    path = tmp_path / "tw.json"
    code, _, _ = run(capsys, "gen", "--problem", "tw:1,2", "--out", str(path))
    assert code == 0
    assert parse_grounded(path.read_text()).num_states == 28
    code, out, _ = run(capsys, "solve", "--problem", f"file:{path}", "--algo", "ilao")
    assert code == 0 and "v_s0 = " in out


def test_bench_writes_csv(capsys, tmp_path):
    path = tmp_path / "runs.csv"
    code, out, _ = run(capsys, "bench", "--problems", "fig2", "tw:1,2", "--algos", "ilao", "cg-ilao",
                       "--heuristics", "det", "--seeds", "2", "--out", str(path))
    assert code == 0 and "8 runs, 8 solved" in out
    assert len(read_csv(path.read_text())) == 8


def test_bench_to_stdout_is_deterministic(capsys):
    argv = ["bench", "--problems", "tw:1,2", "--algos", "lrtdp", "--heuristics", "pert:0.5", "--seeds", "2"]

    def rows():
        code, out, _ = run(capsys, *argv)
        assert code == 0
        parsed = read_csv(out)
        for r in parsed:
            r.pop("wall_time_s")
        return parsed

    assert rows() == rows()


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--problem", "tw:2,2", "--algo", "cg-ilao")
    assert code == 0
    assert "vi lp-certificate: pass" in out and out.rstrip().endswith("verify: pass")


def test_verify_fails_loudly_on_timeout(capsys):
    code, out, _ = run(capsys, "verify", "--problem", "tw:1,2", "--algo", "vi", "--timeout", "0")
    assert code == 1 and "verify: FAIL" in out


def test_density(capsys):
    code, out, _ = run(capsys, "density", "--problem", "tw:2,3")
    assert code == 0 and "fraction with density <= 0.5" in out


def test_density_rejects_vi(capsys):
    code, _, err = run(capsys, "density", "--problem", "fig2", "--algo", "vi")
    assert code == 2 and "--algo" in err


def test_identical_argv_gives_identical_output(capsys):
    argv = ["solve", "--problem", "rand:4,3,3,2,7", "--algo", "lrtdp", "--seed", "5"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cgilao", "solve", "--problem", "fig2", "--algo", "vi"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "v_s0 = 4" in proc.stdout
