import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from roma.board import ROMA, BoardSpec, Direction, is_valid
from roma.cli import twobox_bound
from roma.corpus import random_board, twobox_board
from roma.oracle import oracle_count, oracle_enumerate
from roma.prop import (
    Contradiction,
    Mode,
    ResourceCap,
    Status,
    initial_candidates,
    iter_solutions,
    propagate,
    propagated_values,
    search,
)
from roma.sat2roma.testboards import straight_board

U, D, L, R = Direction.UP, Direction.DOWN, Direction.LEFT, Direction.RIGHT


def ones(n, presets):
    return BoardSpec(n, [[(x, y)] for x in range(n) for y in range(n)], presets)


def test_example_initial_candidates(example):
    g = initial_candidates(example)
    assert g[(3, 1)] == {L}
    assert (1, 2) in g.fixed and g.fixed[(1, 2)] is ROMA


def test_example_deductions(example):
    g = propagate(example, initial_candidates(example))
    assert g[(3, 1)] == {L}
    assert g[(3, 3)] == {L}
    assert g[(2, 3)] == {D}


def test_corner_candidates():
    g = initial_candidates(ones(3, {(2, 2): ROMA}))
    assert g[(0, 0)] == {U, R}
    assert g[(2, 0)] == {U, L}
    assert g[(1, 1)] == set(Direction)


def test_two_cycle_elimination():
    # (1,0) points left at (0,0), so (0,0) cannot point right
    g = initial_candidates(ones(3, {(2, 2): ROMA, (1, 0): L}))
    assert R not in g[(0, 0)]
    # (0,1) points down at (0,0), so (0,0) cannot point up
    g = initial_candidates(ones(3, {(2, 2): ROMA, (0, 1): D}))
    assert U not in g[(0, 0)]


def test_complete_board_is_a_fixpoint():
    spec = ones(2, {(0, 0): ROMA, (1, 0): L, (0, 1): D, (1, 1): D})
    g = propagate(spec, initial_candidates(spec))
    assert g.cand == {}
    assert propagated_values(spec) == {}


def test_contradiction():
    spec = ones(2, {(0, 0): ROMA, (1, 0): U, (1, 1): D})
    assert propagated_values(spec) is None
    with pytest.raises(Contradiction):
        propagate(spec, initial_candidates(spec))


def test_straight_line_one_end_fixes_all_six():
    tb = straight_board()
    assert len(tb.gadget) == 6
    for sol in iter_solutions(tb.spec):
        end = tb.gadget[0]
        fixed = propagated_values(tb.spec.with_presets({end: sol[end]}))
        assert fixed is not None
        assert all(fixed[c] == sol[c] for c in tb.gadget if c != end)


def test_search_matches_oracle(small_corpus):
    for spec in small_corpus:
        expected = oracle_count(spec)
        r = search(spec, Mode.COUNT)
        assert r.count == expected
        assert (r.status is Status.SAT) == (expected > 0)
        first = search(spec, Mode.FIRST)
        assert (first.witness is not None) == (expected > 0)
        if first.witness is not None:
            assert is_valid(spec, first.witness) == []
        two = search(spec, Mode.AT_MOST_TWO)
        assert two.count == min(expected, 2)


def test_iter_solutions_matches_oracle(small_corpus):
    for spec in small_corpus[:40]:
        mine = {tuple(sorted(a.content.items())) for a in iter_solutions(spec)}
        theirs = {tuple(sorted(a.content.items())) for a in oracle_enumerate(spec).solutions}
        assert mine == theirs


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_propagation_is_sound(seed):
    rng = random.Random(seed)
    spec = random_board(rng.choice((2, 3, 4)), rng)
    sols = oracle_enumerate(spec).solutions
    try:
        g = propagate(spec, initial_candidates(spec))
    except Contradiction:
        assert not sols
        return
    for a in sols:
        for c, cand in g.cand.items():
            assert a[c] in cand


def test_fully_preset_invalid_board():
    spec = ones(2, {(0, 0): ROMA, (1, 0): U, (0, 1): D, (1, 1): D})
    r = search(spec, Mode.COUNT)
    assert r.status is Status.UNSAT and r.count == 0 and r.nodes == 1


def test_variable_board_has_two_solutions():
    from roma.sat2roma.testboards import variable_board

    assert search(variable_board().spec, Mode.COUNT).count == 2


def test_node_cap():
    with pytest.raises(ResourceCap):
        search(ones(4, {(0, 0): ROMA}), Mode.COUNT, node_cap=3)


@pytest.mark.parametrize("k", [4, 6, 8, 10, 12])
def test_twobox_node_bound(k):
    rng = random.Random(k)
    for _ in range(3):
        spec = twobox_board(k, rng)
        assert spec.k == k
        assert all(len(b) == 2 for b in spec.boxes if not (b & {spec.roma}) and any(c in spec.empty_cells for c in b))
        r = search(spec, Mode.COUNT)
        assert r.count >= 1
        assert r.nodes <= twobox_bound(k)
