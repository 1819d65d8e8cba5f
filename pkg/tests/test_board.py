import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import corpus
from roma.board import (
    ROMA,
    Assignment,
    BoardError,
    BoardSpec,
    Direction,
    TraceError,
    ViolationKind,
    ascii_cells,
    cells_grid,
    flow_graph,
    is_valid,
    is_valid_reduced,
    parse_board,
    parse_cells,
    render,
    serialize_board,
    trace_to_roma,
    validate_spec,
)
from roma.corpus import random_board
from roma.oracle import oracle_enumerate

U, D, L, R = Direction.UP, Direction.DOWN, Direction.LEFT, Direction.RIGHT


def ones(n, presets):
    return BoardSpec(n, [[(x, y)] for x in range(n) for y in range(n)], presets)


def kinds(violations):
    return {v.kind for v in violations}


def test_direction_steps():
    assert U.step((2, 2)) == (2, 3)
    assert D.step((2, 2)) == (2, 1)
    assert L.step((2, 2)) == (1, 2)
    assert R.step((2, 2)) == (3, 2)
    assert [d.opposite for d in Direction] == [D, U, R, L]


def test_parse_example(example):
    assert example.n == 4
    assert example.roma == (1, 2)
    assert example.k == 9
    assert validate_spec(example) == []
    assert example.presets[(0, 3)] == D and example.presets[(1, 3)] == R
    assert example.presets[(3, 2)] == U and example.presets[(1, 0)] == L


def test_parse_one_by_one():
    spec = parse_board("ROMA 1\nN 1\nBOXES\na\nCELLS\no\n")
    assert spec.k == 0 and spec.roma == (0, 0)


def test_parse_rejects_five_cell_box():
    text = "ROMA 1\nN 3\nBOXES\na a a\na a b\nc d e\nCELLS\n. . .\n. . .\no . .\n"
    with pytest.raises(BoardError, match="size 5"):
        parse_board(text)


@pytest.mark.parametrize(
    "text, where",
    [
        ("ROMA 2\nN 1\nBOXES\na\nCELLS\no\n", "line 1"),
        ("ROMA 1\nN x\nBOXES\na\nCELLS\no\n", "line 2"),
        ("ROMA 1\nN 2\nBOXES\na b\nc\nCELLS\no .\n. .\n", "line 5"),
        ("ROMA 1\nN 1\nBOXES\na\nCELLS\nz\n", "line 6"),
    ],
)
def test_parse_errors_carry_positions(text, where):
    with pytest.raises(BoardError, match=where):
        parse_board(text)


def test_parse_without_validation_keeps_semantic_errors():
    text = "ROMA 1\nN 2\nBOXES\na a\nb b\nCELLS\n. .\no .\n"
    spec = parse_board(text, validate=False)
    assert kinds(validate_spec(spec)) == {ViolationKind.MALFORMED_PARTITION}


def test_serialize_round_trip(example):
    assert parse_board(serialize_board(example)) == example
    one = ones(1, {(0, 0): ROMA})
    text = serialize_board(one)
    for section in ("ROMA 1", "N 1", "BOXES", "CELLS"):
        assert section in text
    assert parse_board(text) == one


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=10**6))
def test_serialize_round_trip_random(n, seed):
    spec = random_board(n, random.Random(seed))
    assert validate_spec(spec) == []
    assert parse_board(serialize_board(spec)) == spec


def test_validate_roma_in_two_box():
    spec = BoardSpec(2, [[(0, 0), (1, 0)], [(0, 1)], [(1, 1)]], {(0, 0): ROMA})
    assert kinds(validate_spec(spec)) == {ViolationKind.MALFORMED_PARTITION}


def test_validate_diagonal_box():
    spec = BoardSpec(2, [[(0, 0)], [(1, 0), (0, 1)], [(1, 1)]], {(0, 0): ROMA})
    assert kinds(validate_spec(spec)) == {ViolationKind.MALFORMED_PARTITION}


def test_validate_roma_count_and_duplicate_presets():
    spec = BoardSpec(2, [[(0, 0)], [(1, 0), (1, 1)], [(0, 1)]], {(1, 0): U, (1, 1): U})
    assert kinds(validate_spec(spec)) == {ViolationKind.PRESET_CONFLICT, ViolationKind.BOX_DUPLICATE}


def test_flow_graph_examples():
    g = flow_graph(ones(1, {(0, 0): ROMA}), Assignment({(0, 0): ROMA})).out_edge
    assert dict(g) == {(0, 0): None}
    spec = BoardSpec(2, [[(x, y)] for x in range(2) for y in range(2)], {(1, 0): ROMA})
    a = Assignment({(0, 0): R, (1, 0): ROMA, (0, 1): L, (1, 1): D})
    g = flow_graph(spec, a).out_edge
    assert g[(0, 0)] == (1, 0)
    assert g[(0, 1)] is None  # off the board


def test_is_valid_cycle():
    spec = ones(2, {(1, 0): ROMA})
    a = Assignment({(0, 0): U, (0, 1): D, (1, 0): ROMA, (1, 1): D})
    assert ViolationKind.CYCLE in kinds(is_valid(spec, a))
    assert ViolationKind.DISCONNECTED in kinds(is_valid(spec, a))


def test_is_valid_box_duplicate():
    spec = BoardSpec(2, [[(0, 0)], [(0, 1), (1, 1)], [(1, 0)]], {(0, 0): ROMA})
    a = Assignment({(0, 0): ROMA, (0, 1): D, (1, 1): D, (1, 0): L})
    assert kinds(is_valid(spec, a)) == {ViolationKind.BOX_DUPLICATE}


def test_is_valid_off_board_and_extra_sink():
    spec = ones(2, {(0, 0): ROMA})
    a = Assignment({(0, 0): ROMA, (1, 0): L, (0, 1): L, (1, 1): L})
    found = kinds(is_valid(spec, a))
    assert {ViolationKind.OFF_BOARD_ARROW, ViolationKind.EXTRA_SINK} <= found
    assert ViolationKind.CYCLE not in found


def test_example_solution_is_valid(example):
    sols = oracle_enumerate(example).solutions
    assert len(sols) == 1
    assert is_valid(example, sols[0]) == []
    assert cells_grid(example, sols[0]).splitlines() == ["v > v <", "v o < ^", "> > ^ <", "^ < ^ ^"]


def test_trace_examples(example):
    spec = BoardSpec(2, [[(x, y)] for x in range(2) for y in range(2)], {(1, 0): ROMA})
    a = Assignment({(0, 0): R, (1, 0): ROMA, (0, 1): D, (1, 1): D})
    assert trace_to_roma(spec, a, (1, 0)) == [(1, 0)]
    assert trace_to_roma(spec, a, (0, 0)) == [(0, 0), (1, 0)]
    assert trace_to_roma(spec, a, (0, 1)) == [(0, 1), (0, 0), (1, 0)]
    (sol,) = oracle_enumerate(example).solutions
    for c in example.cells():
        path = trace_to_roma(example, sol, c)
        assert path[-1] == example.roma and len(path) <= example.n ** 2


def test_trace_errors():
    spec = ones(2, {(1, 0): ROMA})
    looped = Assignment({(0, 0): U, (0, 1): D, (1, 0): ROMA, (1, 1): D})
    with pytest.raises(TraceError):
        trace_to_roma(spec, looped, (0, 0))
    off = Assignment({(0, 0): L, (0, 1): D, (1, 0): ROMA, (1, 1): D})
    with pytest.raises(TraceError):
        trace_to_roma(spec, off, (0, 0))


def test_render_ascii_example(example):
    pic = render(example)
    lines = pic.splitlines()
    assert len(lines) == 2 * example.n + 1
    # the Roma circle sits in column 1 of the second row from the top
    assert lines[3][2 + 4 * 1] == "o"
    assert ascii_cells(pic) == dict(example.presets)


def test_render_one_by_one():
    assert render(ones(1, {(0, 0): ROMA})).strip() == "o"


def test_render_svg(example):
    svg = render(example, format="svg")
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<circle") == 1
    with pytest.raises(ValueError):
        render(example, format="png")


def test_render_round_trip_on_solved_boards():
    for spec in corpus(40, seed=3):
        sols = oracle_enumerate(spec, limit=1).solutions
        if not sols:
            continue
        a = sols[0]
        assert ascii_cells(render(spec, a)) == dict(a.content)
        assert parse_cells(cells_grid(spec, a), spec.n) == dict(a.content)


def test_reduced_check_matches_full_check():
    # acyclic, on-board and box-correct already imply a weakly connected flow with one sink
    rng = random.Random(5)
    checked = 0
    for spec in corpus(60, seed=9, sizes=(2, 3)):
        empty = spec.empty_cells
        for _ in range(40):
            fill = {c: rng.choice(list(Direction)) for c in empty}
            a = Assignment.complete(spec, fill)
            assert is_valid_reduced(spec, a) == (is_valid(spec, a) == [])
            checked += 1
    assert checked == 60 * 40
