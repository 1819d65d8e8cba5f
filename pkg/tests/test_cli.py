import csv
import io
from pathlib import Path

import pytest

from roma.board import parse_board, parse_cells
from roma.cli import EXIT_CAP, EXIT_INPUT, EXIT_OK, EXIT_UNSAT, EXIT_USAGE, main, twobox_bound

DATA = Path(__file__).parent / "data"
EXAMPLE = str(DATA / "example.roma")

UNSAT = """ROMA 1
N 2
BOXES
a b
c d
CELLS
v .
^ o
"""

TWO = """ROMA 1
N 2
BOXES
a b
c d
CELLS
v .
o <
"""


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main(list(argv))
        out, err = capsys.readouterr()
        return code, out, err

    return _run


@pytest.fixture
def files(tmp_path):
    (tmp_path / "unsat.roma").write_text(UNSAT)
    (tmp_path / "two.roma").write_text(TWO)
    return tmp_path


@pytest.mark.parametrize("method", ["oracle", "prop", "dp"])
def test_count_agrees_across_methods(run, method):
    assert run("count", EXAMPLE, f"--method={method}") == (EXIT_OK, "1\n", "")


@pytest.mark.parametrize("method", ["oracle", "prop", "dp"])
def test_solve_prints_a_valid_grid(run, tmp_path, method):
    code, out, _ = run("solve", EXAMPLE, "--method", method)
    assert code == EXIT_OK
    sol = tmp_path / "example.sol"
    sol.write_text(out)
    assert run("check", EXAMPLE, "--solution", str(sol))[:2] == (EXIT_OK, "ok\n")
    spec = parse_board((DATA / "example.roma").read_text())
    assert len(parse_cells(out, spec.n)) == spec.n ** 2


def test_solve_unsat(run, files):
    code, out, _ = run("solve", str(files / "unsat.roma"))
    assert code == EXIT_UNSAT and out == "unsolvable\n"
    assert run("count", str(files / "unsat.roma"))[:2] == (EXIT_UNSAT, "0\n")


def test_unique(run, files):
    assert run("unique", EXAMPLE)[:2] == (EXIT_OK, "yes\n")
    assert run("unique", str(files / "two.roma"))[:2] == (EXIT_OK, "no\n")


def test_fcp(run, files):
    assert run("fcp", str(files / "two.roma"), "--k", "0")[:2] == (EXIT_OK, "none\n")
    code, out, _ = run("fcp", str(files / "two.roma"), "--k", "1")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "hints 1" and lines[1].split()[:2] == ["1", "1"]
    assert run("fcp", EXAMPLE, "--k", "0")[:2] == (EXIT_OK, "hints 0\n")
    assert run("fcp", str(files / "unsat.roma"), "--k", "1")[0] == EXIT_UNSAT


def test_check_reports_violations(run, tmp_path):
    bad = tmp_path / "bad.roma"
    bad.write_text("ROMA 1\nN 2\nBOXES\na a\nb b\nCELLS\n. .\no .\n")
    code, out, _ = run("check", str(bad))
    assert code == EXIT_UNSAT and out.startswith("MalformedPartition")
    assert run("check", EXAMPLE)[:2] == (EXIT_OK, "ok\n")


def test_check_bad_solution(run, files):
    sol = files / "wrong.sol"
    sol.write_text("v >\no <\n")
    code, out, _ = run("check", str(files / "two.roma"), "--solution", str(sol))
    assert code == EXIT_UNSAT and "OffBoardArrow" in out


def test_input_errors(run, tmp_path):
    assert run("count", str(tmp_path / "missing.roma"))[0] == EXIT_INPUT
    junk = tmp_path / "junk.roma"
    junk.write_text("not a board\n")
    code, _, err = run("count", str(junk))
    assert code == EXIT_INPUT and "line 1" in err


def test_usage_errors(run):
    assert run("count")[0] == EXIT_USAGE
    assert run("frobnicate")[0] == EXIT_USAGE
    assert run("count", EXAMPLE, "--method", "magic")[0] == EXIT_USAGE
    assert run("bench", "--family", "twobox", "--sizes", "3")[0] == EXIT_USAGE


def test_resource_cap(run):
    assert run("count", EXAMPLE, "--method", "oracle", "--cap", "2")[0] == EXIT_CAP
    assert run("count", EXAMPLE, "--method", "prop", "--cap", "1")[0] in (EXIT_OK, EXIT_CAP)


def test_reduce_count_decode(run, tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 2 2\n1 2 0\n-1 2 0\n")
    board = tmp_path / "f.roma"
    code, out, _ = run("reduce", str(cnf), "-o", str(board))
    assert code == EXIT_OK and out.startswith("n=")
    varmap = board.with_suffix(".varmap")
    assert varmap.exists()
    assert run("count", str(board))[:2] == (EXIT_OK, "2\n")
    code, grid, _ = run("solve", str(board))
    sol = tmp_path / "f.sol"
    sol.write_text(grid)
    code, out, _ = run("decode", str(board), str(sol), "--varmap", str(varmap))
    assert code == EXIT_OK
    values = [int(t) for t in out.split()]
    assert 2 in values  # x2 is forced


def test_reduce_bad_cnf(run, tmp_path):
    cnf = tmp_path / "bad.cnf"
    cnf.write_text("p cnf 1 1\n1 2 0\n")
    assert run("reduce", str(cnf), "-o", str(tmp_path / "x.roma"))[0] == EXIT_INPUT


def test_render(run, tmp_path):
    code, out, _ = run("render", EXAMPLE)
    assert code == EXIT_OK and out.count("\n") == 9
    code, out, _ = run("render", EXAMPLE, "--format", "svg")
    assert code == EXIT_OK and out.startswith("<svg")


def test_bench_twobox(run, tmp_path):
    target = tmp_path / "bench.csv"
    code, _, _ = run("bench", "--family", "twobox", "--sizes", "4,6", "--instances", "2", "-o", str(target))
    assert code == EXIT_OK
    rows = list(csv.DictReader(target.open()))
    assert len(rows) == 4
    for row in rows:
        k = int(row["k"])
        assert int(row["bound"]) == twobox_bound(k)
        assert int(row["nodes"]) <= twobox_bound(k)
        assert float(row["ratio"]) == pytest.approx(int(row["nodes"]) / twobox_bound(k), rel=1e-5)


def test_bench_random_to_stdout(run):
    code, out, _ = run("bench", "--family", "random", "--sizes", "3", "--instances", "2", "--seed", "1")
    assert code == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {r["method"] for r in rows} == {"oracle", "prop", "dp"}
    by_instance = {}
    for r in rows:
        by_instance.setdefault(r["instance"], set()).add(r["count"])
    assert all(len(v) == 1 for v in by_instance.values())
