"""Small closed boards that exercise one gadget each.

Every board hangs its gadget off a single variable gadget on a short core
line, so the only freedom left is the variable's value.  ``gadget`` lists the
empty cells of the gadget under test in board coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..board import ROMA, BoardSpec, Coord, Direction
from .arrange import ABOVE, Arc, Arrangement
from .canvas import Canvas
from .cnf import Cnf
from .compiler import ITEM_BELOW, MIN_BASE, VarMap, draw_clause, draw_stack, realize
from .tiles import FANOUT, LITERAL_TILES, STRAIGHT, VARIABLE, GadgetTile

Y0 = ITEM_BELOW  # core row
VAR_X = 4  # left column of the variable gadget


@dataclass(frozen=True)
class TestBoard:
    spec: BoardSpec
    gadget: tuple[Coord, ...]
    decision: Coord  # the variable's decision cell


def _base() -> Canvas:
    cv = Canvas()
    cv.put({(0, Y0): ROMA})
    for x in range(1, VAR_X):
        cv.put({(x, Y0): Direction.LEFT})
    cv.stamp(VARIABLE, VAR_X, Y0 - ITEM_BELOW)
    return cv


def _finish(cv: Canvas, gadget: list[Coord]) -> TestBoard:
    from .tiles import DECISION_CELL

    x0, y0, _, _ = cv.bounds()
    ox, oy = x0 - 1, y0 - 1
    spec = cv.close(origin=(ox, oy))
    shift = lambda c: (c[0] - ox, c[1] - oy)
    decision = (VAR_X + DECISION_CELL[0], Y0 - ITEM_BELOW + DECISION_CELL[1])
    return TestBoard(spec, tuple(sorted(shift(c) for c in gadget)), shift(decision))


def _tile_empty(tile: GadgetTile, ox: int, oy: int) -> list[Coord]:
    return [(ox + x, oy + y) for x, y in tile.empty_cells]


def variable_board() -> TestBoard:
    cv = _base()
    return _finish(cv, _tile_empty(VARIABLE, VAR_X, Y0 - ITEM_BELOW))


def _on_top(tile: GadgetTile) -> TestBoard:
    cv = _base()
    oy = Y0 - ITEM_BELOW + VARIABLE.height
    cv.stamp(tile, VAR_X, oy)
    return _finish(cv, _tile_empty(tile, VAR_X, oy))


def straight_board() -> TestBoard:
    """A straight line standing on the variable's first top port."""
    return _on_top(STRAIGHT)


def fanout_board() -> TestBoard:
    """A fanout standing on both top ports of the variable."""
    return _on_top(FANOUT)


def literal_board(polarity: bool) -> TestBoard:
    """The clause (x or not x) on the two top ports; ``gadget`` is the literal of the given polarity.

    Exactly one literal holds for either value of x, so the board has two
    solutions and each literal sees both signals.
    """
    cv = _base()
    base = MIN_BASE[ABOVE]
    ports = [VAR_X + VARIABLE.ports["top0"][0][0], VAR_X + VARIABLE.ports["top1"][0][0]]
    for c in ports:
        draw_stack(cv, ABOVE, Y0, c, base)
    draw_clause(cv, ABOVE, Y0, base, [(ports[0], True), (ports[1], False)])
    tile = LITERAL_TILES[polarity]
    col = ports[0] if polarity else ports[1]
    ox = col - tile.ports["wire"][0][0]
    return _finish(cv, _tile_empty(tile, ox, Y0 + base))


GADGET_BOARDS = {
    "straight": straight_board,
    "fanout": fanout_board,
    "variable": variable_board,
    "positive-literal": lambda: literal_board(True),
    "negative-literal": lambda: literal_board(False),
}


def clause_board(polarities: tuple[bool, bool, bool] = (True, False, True)) -> tuple[BoardSpec, VarMap]:
    """Three variable gadgets feeding one 3-literal clause, nothing else.

    Presetting the decision cells fixes the three literal signals.
    """
    cnf = Cnf(3, (tuple((v + 1, p) for v, p in enumerate(polarities)),))
    arc = Arc(ABOVE, tuple((v, p) for v, p in enumerate(polarities)), 0)
    return realize(Arrangement((1, 2, 3), (arc,), cnf, {1: 0, 2: 1, 3: 2}))


def fix_signals(spec: BoardSpec, vm: VarMap, values: dict[int, bool]) -> BoardSpec:
    """Preset the decision cells to the given truth values."""
    return spec.with_presets({vm.cells[v]: vm.true[v] if b else vm.false[v] for v, b in values.items()})
