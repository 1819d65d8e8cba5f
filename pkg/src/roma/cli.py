"""Command-line front end.

Exit codes: 0 solvable or ok, 1 unsolvable (or a check found violations),
2 usage error, 3 input error, 4 resource cap exceeded.
"""

from __future__ import annotations

import csv
import functools
import random
import sys
import time
from pathlib import Path
from typing import Callable, Optional

import click

from .board import (
    Assignment,
    BoardError,
    BoardSpec,
    cells_grid,
    is_valid,
    parse_board,
    parse_cells,
    render,
    serialize_board,
    validate_spec,
)
from .corpus import random_board, twobox_board
from .dp import DpMode, dp_run, dp_solve
from .oracle import DEFAULT_CAP, CapExceeded, Unsatisfiable, fcp_bruteforce, oracle_count, oracle_enumerate
from .prop import Mode, ResourceCap, search
from .sat2roma import Cnf, CnfError, VarMap, compile, decode, parse_dimacs

EXIT_OK, EXIT_UNSAT, EXIT_USAGE, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3, 4
METHODS = ("oracle", "prop", "dp")


class InputError(Exception):
    pass


def _guard(fn: Callable) -> Callable:
    """Map library exceptions onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (CapExceeded, ResourceCap) as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_CAP)
        except (InputError, BoardError, CnfError, OSError, UnicodeDecodeError) as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(EXIT_INPUT)

    return wrapper


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _board(path: str) -> BoardSpec:
    return parse_board(_read(path))


def _solution(spec: BoardSpec, path: str) -> Assignment:
    cells = parse_cells(_read(path), spec.n)
    missing = [c for c in spec.cells() if c not in cells]
    if missing:
        raise InputError(f"solution leaves {len(missing)} cells empty")
    for c, v in spec.presets.items():
        if cells[c] != v:
            raise InputError(f"solution disagrees with the preset at {c}")
    return Assignment(cells)


def _count(spec: BoardSpec, method: str, cap: Optional[int]) -> int:
    if method == "oracle":
        return oracle_count(spec, cap=cap)
    if method == "prop":
        return search(spec, Mode.COUNT, node_cap=cap).count
    return dp_run(spec, DpMode.COUNT, max_configs=cap).count


method_option = click.option("--method", type=click.Choice(METHODS), default="prop", show_default=True)
cap_option = click.option(
    "--cap", type=click.IntRange(min=1), default=None,
    help=f"Resource cap: empty cells for oracle (default {DEFAULT_CAP}), nodes for prop, configurations per row for dp.",
)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli() -> None:
    """Exact solvers, counters and a 3-SAT compiler for Roma boards."""


@cli.command()
@click.argument("file")
@click.option("--solution", "solution_path", default=None, help="Also check this solution grid.")
@_guard
def check(file: str, solution_path: Optional[str]) -> None:
    """Print the violations of a board (and optionally of a solution)."""
    spec = parse_board(_read(file), validate=False)
    problems = validate_spec(spec)
    if not problems and solution_path is not None:
        problems += is_valid(spec, _solution(spec, solution_path))
    elif not problems and not spec.empty_cells:
        problems += is_valid(spec, Assignment(dict(spec.presets)))
    for p in problems:
        click.echo(str(p))
    if problems:
        sys.exit(EXIT_UNSAT)
    click.echo("ok")


@cli.command()
@click.argument("file")
@method_option
@cap_option
@_guard
def solve(file: str, method: str, cap: Optional[int]) -> None:
    """Print one solution as a CELLS grid."""
    spec = _board(file)
    if method == "oracle":
        sols = oracle_enumerate(spec, limit=1, cap=cap).solutions
        witness = sols[0] if sols else None
    elif method == "prop":
        witness = search(spec, Mode.FIRST, node_cap=cap).witness
    else:
        witness = dp_solve(spec, max_configs=cap).witness
    if witness is None:
        click.echo("unsolvable")
        sys.exit(EXIT_UNSAT)
    click.echo(cells_grid(spec, witness))


@cli.command()
@click.argument("file")
@method_option
@cap_option
@_guard
def count(file: str, method: str, cap: Optional[int]) -> None:
    """Print the exact number of solutions."""
    total = _count(_board(file), method, cap)
    click.echo(total)
    if total == 0:
        sys.exit(EXIT_UNSAT)


@cli.command()
@click.argument("file")
@cap_option
@_guard
def unique(file: str, cap: Optional[int]) -> None:
    """Print yes when the board has exactly one solution, else no."""
    r = search(_board(file), Mode.AT_MOST_TWO, node_cap=cap)
    click.echo("yes" if r.count == 1 else "no")
    if r.count == 0:
        sys.exit(EXIT_UNSAT)


@cli.command()
@click.argument("file")
@click.option("--k", "k", type=click.IntRange(min=0), required=True, help="Largest hint set to try.")
@cap_option
@_guard
def fcp(file: str, k: int, cap: Optional[int]) -> None:
    """Fewest clues: print a hint set that makes the solution unique, or none.

    The output is a line ``hints <size>`` followed by one ``x y arrow`` line
    per hint.
    """
    spec = _board(file)
    try:
        hint = fcp_bruteforce(spec, k, cap=cap if cap is not None else DEFAULT_CAP)
    except Unsatisfiable as e:
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_UNSAT)
    if hint is None:
        click.echo("none")
        return
    click.echo(f"hints {len(hint)}")
    for (x, y), d in sorted(hint):
        click.echo(f"{x} {y} {d.glyph}")


@cli.command()
@click.argument("cnf_file")
@click.option("-o", "--output", required=True, help="Board file to write.")
@click.option("--varmap", "varmap_path", default=None, help="Variable map to write [default: OUTPUT with suffix .varmap].")
@_guard
def reduce(cnf_file: str, output: str, varmap_path: Optional[str]) -> None:
    """Compile a DIMACS 3-CNF formula into a board and its variable map."""
    cnf = parse_dimacs(_read(cnf_file))
    spec, vm = compile(cnf)
    out = Path(output)
    vm_out = Path(varmap_path) if varmap_path else out.with_suffix(".varmap")
    out.write_text(serialize_board(spec), encoding="utf-8")
    vm_out.write_text(vm.to_text(), encoding="utf-8")
    click.echo(f"n={spec.n} k={spec.k} vars={cnf.num_vars} clauses={len(cnf.clauses)}")


@cli.command("decode")
@click.argument("file")
@click.argument("solution_file")
@click.option("--varmap", "varmap_path", required=True)
@_guard
def decode_cmd(file: str, solution_file: str, varmap_path: str) -> None:
    """Print the truth assignment (DIMACS literals) a solution encodes."""
    spec = _board(file)
    a = _solution(spec, solution_file)
    if is_valid(spec, a):
        raise InputError("the solution is not valid for this board")
    try:
        vm = VarMap.from_text(_read(varmap_path))
        values = decode(spec, vm, a)
    except (ValueError, KeyError) as e:
        raise InputError(str(e)) from None
    click.echo(" ".join(str(v if values[v] else -v) for v in sorted(values)))


@cli.command("render")
@click.argument("file")
@click.option("--solution", "solution_path", default=None)
@click.option("--format", "fmt", type=click.Choice(["ascii", "svg"]), default="ascii", show_default=True)
@_guard
def render_cmd(file: str, solution_path: Optional[str], fmt: str) -> None:
    """Draw a board, optionally filled in with a solution."""
    spec = _board(file)
    a = _solution(spec, solution_path) if solution_path else None
    text = render(spec, a, fmt)
    click.echo(text, nl=not text.endswith("\n"))


def _random_cnf(n: int, m: int, rng: random.Random) -> Cnf:
    clauses = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), min(3, n))
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return Cnf.of(n, clauses)


def twobox_bound(k: int) -> int:
    """Node bound for boards made of k/2 fully empty 2-boxes: 11^(k/2) * (k+1)."""
    return 11 ** (k // 2) * (k + 1)


@cli.command()
@click.option("--family", type=click.Choice(["twobox", "reduction", "random"]), required=True)
@click.option("--sizes", required=True, help="Comma-separated sizes: k for twobox, variables for reduction, n for random.")
@click.option("--instances", type=click.IntRange(min=1), default=3, show_default=True, help="Instances per size.")
@click.option("--methods", default=None, help="Comma-separated engines [default: prop; all three for random].")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", "-o", default=None, help="CSV file [default: stdout].")
@_guard
def bench(family: str, sizes: str, instances: int, methods: Optional[str], seed: int, output: Optional[str]) -> None:
    """Time the engines on a generated family and write CSV."""
    try:
        size_list = [int(s) for s in sizes.split(",") if s.strip()]
    except ValueError:
        raise click.UsageError("--sizes must be comma-separated integers") from None
    if methods is None:
        method_list = list(METHODS) if family == "random" else ["prop"]
    else:
        method_list = [m.strip() for m in methods.split(",")]
        bad = [m for m in method_list if m not in METHODS]
        if bad:
            raise click.UsageError(f"unknown method(s): {', '.join(bad)}")
    if family == "twobox" and any(s % 2 or s < 0 for s in size_list):
        raise click.UsageError("twobox sizes must be even")
    rng = random.Random(seed)
    stream = open(output, "w", newline="", encoding="utf-8") if output else sys.stdout
    try:
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(["instance", "n", "k", "method", "nodes", "seconds", "count", "bound", "ratio"])
        for size in size_list:
            for i in range(instances):
                if family == "twobox":
                    spec = twobox_board(size, rng)
                elif family == "random":
                    spec = random_board(size, rng)
                else:
                    spec, _ = compile(_random_cnf(size, size, rng))
                iid = f"{family}-{size}-{i}"
                for m in method_list:
                    t = time.perf_counter()
                    if m == "oracle":
                        total, nodes = oracle_count(spec), ""
                    elif m == "prop":
                        r = search(spec, Mode.COUNT)
                        total, nodes = r.count, r.nodes
                    else:
                        r = dp_run(spec, DpMode.COUNT)
                        total, nodes = r.count, r.nodes
                    dt = time.perf_counter() - t
                    bound = twobox_bound(spec.k) if family == "twobox" and m == "prop" else ""
                    ratio = f"{nodes / bound:.6g}" if bound else ""
                    w.writerow([iid, spec.n, spec.k, m, nodes, f"{dt:.6f}", total, bound, ratio])
    finally:
        if output:
            stream.close()


def main(argv: Optional[list[str]] = None) -> int:
    try:
        cli.main(args=argv, prog_name="roma", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except SystemExit as e:
        return int(e.code or 0)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
