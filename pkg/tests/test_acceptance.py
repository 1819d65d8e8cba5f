"""Acceptance suite: one PASS/FAIL line per criterion.

Run ``pytest tests/test_acceptance.py -s`` (or ``-v``; the lines are written
to the terminal either way).  Criterion 7 traces the solutions collected by
criteria 2 to 6, which are module fixtures shared with those tests.
"""

import random
import time
from contextlib import contextmanager
from itertools import product

import pytest

from roma.board import ROMA, Assignment, BoardSpec, Direction, trace_to_roma
from roma.cli import twobox_bound
from roma.corpus import random_board, twobox_board
from roma.dp import bracket_skeletons, catalan_count, dp_run
from roma.oracle import fcp_bruteforce, oracle_count, oracle_enumerate
from roma.prop import Mode, initial_candidates, iter_solutions, propagate, search
from roma.sat2roma import Cnf, arrangement_for, compile, realize, side_bound, size_constant
from roma.sat2roma.arrange import CROSSOVER_CLAUSES, CROSSOVER_VARS
from roma.sat2roma.compiler import arrangement_counts
from roma.sat2roma.testboards import GADGET_BOARDS, clause_board, fix_signals

U, D, L, R = Direction.UP, Direction.DOWN, Direction.LEFT, Direction.RIGHT
TRACE_LIMIT = 12  # boards up to this side are traced cell by cell


@pytest.fixture
def report(capsys):
    @contextmanager
    def _report(number: int, summary: str):
        detail = {"text": summary}
        try:
            yield detail
        except BaseException as exc:
            with capsys.disabled():
                print(f"\ncriterion {number}: FAIL {detail['text']} ({type(exc).__name__}: {exc})")
            raise
        with capsys.disabled():
            print(f"\ncriterion {number}: PASS {detail['text']}")

    return _report


def distances(spec: BoardSpec, a: Assignment) -> dict:
    """Steps from every cell to the Roma cell, memoized along shared paths.

    Raises ValueError when some path leaves the board or closes a cycle.
    """
    dist = {spec.roma: 0}
    for start in spec.cells():
        path, seen = [], set()
        c = start
        while c not in dist:
            if c in seen:
                raise ValueError(f"cycle through {c}")
            seen.add(c)
            path.append(c)
            v = a[c]
            if v is ROMA:
                raise ValueError(f"second Roma cell at {c}")
            c = v.step(c)
            if not spec.on_board(c):
                raise ValueError(f"path from {start} leaves the board")
        d = dist[c]
        for p in reversed(path):
            d += 1
            dist[p] = d
    return dist


def reaches_roma(spec: BoardSpec, a: Assignment) -> bool:
    limit = spec.n * spec.n
    if spec.n <= TRACE_LIMIT:
        return all(len(trace_to_roma(spec, a, c)) - 1 <= limit for c in spec.cells())
    return max(distances(spec, a).values()) <= limit


def random_cnf(rng: random.Random) -> Cnf:
    n = rng.randint(1, 4)
    clauses = []
    for _ in range(rng.randint(0, 4)):
        vs = rng.sample(range(1, n + 1), rng.randint(1, min(3, n)))
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return Cnf.of(n, clauses)


def crossover_cnf() -> Cnf:
    index = {name: i + 1 for i, name in enumerate(CROSSOVER_VARS)}
    return Cnf(len(CROSSOVER_VARS), tuple(tuple((index[n], p) for n, p in cl) for cl in CROSSOVER_CLAUSES))


# ------------------------------------------------------------------ shared runs


@pytest.fixture(scope="module")
def agreement():
    """Criterion 2 data: 500 random boards counted by all three engines."""
    rng = random.Random(1)
    t0 = time.time()
    mismatches, row_configs, solutions, sizes = [], [], [], set()
    for i in range(500):
        n = rng.choice((2, 3, 4))
        spec = random_board(n, rng)
        sizes.add(n)
        enum = oracle_enumerate(spec)
        p = search(spec, Mode.COUNT).count
        r = dp_run(spec)
        if not enum.count == p == r.count:
            mismatches.append((i, enum.count, p, r.count))
        row_configs.append((n, max(r.row_configs, default=0)))
        solutions.extend((spec, a) for a in enum.solutions)
    return {"mismatches": mismatches, "row_configs": row_configs, "solutions": solutions,
            "seconds": time.time() - t0, "sizes": sizes}


@pytest.fixture(scope="module")
def gadgets():
    out = {}
    for name, make in GADGET_BOARDS.items():
        tb = make()
        out[name] = (tb, list(iter_solutions(tb.spec)))
    return out


@pytest.fixture(scope="module")
def clause_runs():
    spec, vm = clause_board((True, False, True))
    runs = []
    for signals in product((False, True), repeat=3):
        board = fix_signals(spec, vm, dict(zip((1, 2, 3), signals)))
        runs.append((signals, board, list(iter_solutions(board))))
    return runs


@pytest.fixture(scope="module")
def parsimony():
    """Criterion 6 data: a generated suite of small formulas plus the crossover formula."""
    rng = random.Random(0)
    t0 = time.time()
    formulas = [random_cnf(rng) for _ in range(60)] + [crossover_cnf()]
    runs = []
    for cnf in formulas:
        spec, _ = compile(cnf)
        sols = list(iter_solutions(spec))
        runs.append((cnf, spec, sols))
    return {"runs": runs, "seconds": time.time() - t0}


# ------------------------------------------------------------------ criteria


def test_criterion_1_example_propagation(report, example):
    with report(1, "propagation on the example board fixes (3,1)=←, (3,3)=←, (2,3)=↓"):
        g = propagate(example, initial_candidates(example))
        assert g[(3, 1)] == {L}
        assert g[(3, 3)] == {L}
        assert g[(2, 3)] == {D}


def test_criterion_2_engines_agree(report, agreement):
    with report(2, "") as r:
        r["text"] = (f"oracle = prop = dp on 500 boards, n in {sorted(agreement['sizes'])}, "
                     f"{len(agreement['mismatches'])} mismatches, {agreement['seconds']:.1f}s")
        assert agreement["mismatches"] == []
        assert agreement["sizes"] == {2, 3, 4}
        assert agreement["seconds"] < 300


def test_criterion_3_dp_ceiling_and_catalan(report, agreement):
    with report(3, "") as r:
        worst = max(size / 39 ** n for n, size in agreement["row_configs"])
        r["text"] = f"max row configurations / 39^n = {worst:.2e}; skeletons = Catalan for p <= 8"
        assert all(size <= 39 ** n for n, size in agreement["row_configs"])
        for p in range(9):
            skel = list(bracket_skeletons(p))
            assert len(skel) == len(set(skel)) == catalan_count(p)


def test_criterion_4_gadget_uniqueness(report, gadgets):
    with report(4, f"unique extension for {', '.join(sorted(gadgets))}; variable board has 2 solutions"):
        for name, (tb, sols) in gadgets.items():
            assert len(sols) == 2, name
            proj = [tuple(a[c] for c in tb.gadget) for a in sols]
            for i, c in enumerate(tb.gadget):
                for d in Direction:
                    assert len({p for p in proj if p[i] == d}) <= 1, (name, c, d)
        assert {a[gadgets["variable"][0].decision] for a in gadgets["variable"][1]} == {L, U}


def test_criterion_5_clause_board(report, clause_runs):
    with report(5, "clause board (x1 ∨ ¬x2 ∨ x3) has 1 solution iff satisfied, over all 8 signal combinations"):
        assert len(clause_runs) == 8
        for signals, _, sols in clause_runs:
            satisfied = any(s == p for s, p in zip(signals, (True, False, True)))
            assert len(sols) == (1 if satisfied else 0), signals


def test_criterion_6_parsimony(report, parsimony):
    with report(6, "") as r:
        runs = parsimony["runs"]
        bad = [cnf for cnf, _, sols in runs if len(sols) != cnf.count_models()]
        crossover = runs[-1]
        r["text"] = (f"#solutions = #SAT on {len(runs) - 1} formulas (<= 4 vars, <= 4 clauses) "
                     f"and the crossover formula (count {len(crossover[2])}), {len(bad)} bad, "
                     f"{parsimony['seconds']:.1f}s")
        assert bad == []
        assert len(crossover[2]) == 4
        assert parsimony["seconds"] <= 1800


def test_criterion_7_paths_reach_roma(report, agreement, gadgets, clause_runs, parsimony):
    with report(7, "") as r:
        found = list(agreement["solutions"])
        found += [(tb.spec, a) for tb, sols in gadgets.values() for a in sols]
        found += [(board, a) for _, board, sols in clause_runs for a in sols]
        found += [(spec, a) for _, spec, sols in parsimony["runs"] for a in sols]
        r["text"] = f"{len(found)} solutions traced from every cell, each within n^2 steps"
        assert found
        assert all(reaches_roma(spec, a) for spec, a in found)


def test_criterion_8_twobox_nodes(report):
    with report(8, "") as r:
        worst = 0.0
        for k in range(4, 13, 2):
            rng = random.Random(k)
            for _ in range(3):
                spec = twobox_board(k, rng)
                assert spec.k == k
                nodes = search(spec, Mode.COUNT).nodes
                worst = max(worst, nodes / twobox_bound(k))
                assert nodes <= twobox_bound(k), (k, nodes)
        r["text"] = f"prop nodes <= 11^(k/2)(k+1) for k = 4..12, worst ratio {worst:.2e}"


def growth_series():
    """Formulas of growing size: chains of implications with a few wider clauses."""
    for v in range(1, 9):
        clauses = [[i, -(i + 1)] for i in range(1, v)]
        if v >= 3:
            clauses.append([1, 2, 3])
        yield Cnf.of(v, clauses)
    yield Cnf.of(3, [[-1, -2], [2, -1, 3], [1, 2, -3], [2, -3, -1]])


def test_criterion_9_size_bound(report):
    with report(9, "") as r:
        c = size_constant()
        ratios = []
        for cnf in growth_series():
            norm = cnf.normalized()
            arr = arrangement_for(norm)
            spec, _ = realize(arr)
            measure = norm.num_vars + len(norm.clauses) + arr.crossovers
            assert spec.n <= side_bound(*arrangement_counts(arr)) <= c * measure
            ratios.append(spec.n / measure)
        r["text"] = f"side <= {c} * (#vars + #clauses + #crossings) on {len(ratios)} formulas, max side/size {max(ratios):.1f}"


def test_criterion_10_fcp(report):
    with report(10, "two-solution board: k=0 gives None, k=1 gives a hint that makes the count 1"):
        spec = BoardSpec(2, [[(x, y)] for x in range(2) for y in range(2)], {(0, 0): ROMA, (1, 0): L, (0, 1): D})
        assert oracle_count(spec) == 2
        assert fcp_bruteforce(spec, 0) is None
        hint = fcp_bruteforce(spec, 1)
        assert hint is not None and len(hint) == 1
        assert oracle_count(spec.with_presets(dict(hint))) == 1
