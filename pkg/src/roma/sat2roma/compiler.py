"""Tile an arrangement into a Roma board, and read truth values back out.

Geometry, in board rows relative to the core row ``Y0``:

* every spine item is a (possibly widened) variable gadget occupying rows
  ``Y0 - 6 .. Y0 + 4``; its top ports face the upper page, its bottom ports
  the lower page;
* arcs are drawn in page coordinates ``u`` (distance from the core row), the
  lower page being the mirror image of the upper one;
* a wire is two vertical conductor stacks joined by a fanout chain; a clause
  arc is one literal gadget on top of a stack per leg, with a ring of 1-boxes
  through all of them;
* an arc's lowest row clears everything nested under it by one blank row,
  and neighbouring ports keep one blank column between their drawings.

Because the lower page is mirrored, a positive literal below the spine uses
the negative literal tile and vice versa.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from ..board import ROMA, Assignment, BoardSpec, Coord, Direction
from .arrange import (
    ABOVE,
    BELOW,
    CROSSOVER_CLAUSES,
    CROSSOVER_VARS,
    Arc,
    Arrangement,
    block_arrangement,
    check,
    direct_arrangement,
    inside,
    port_order,
    stack_arrangement,
)
from .canvas import Canvas
from .cnf import Cnf
from .tiles import (
    DECISION_CELL,
    DECISION_FALSE,
    DECISION_TRUE,
    LITERAL_TILES,
    VARIABLE,
    chain,
    stack,
    variable_item,
)

ITEM_BELOW = 6  # rows of an item under the core row
ITEM_ABOVE = 4  # rows of an item over the core row
MIN_BASE = {ABOVE: ITEM_ABOVE + 2, BELOW: ITEM_BELOW + 2}
WIRE_HEIGHT = 3
CLAUSE_HEIGHT = 9  # literal gadget (8 rows) plus the ring's return row
ITEM_GAP = 2  # blank columns between neighbouring items
ROMA_LEAD = 8  # core-line cells between the Roma cell and the first item


@dataclass(frozen=True)
class VarMap:
    """Decision cell and its true/false arrows for every source variable."""

    cells: Mapping[int, Coord]
    true: Mapping[int, Direction]
    false: Mapping[int, Direction]

    def to_text(self) -> str:
        lines = ["VARMAP 1"]
        for v in sorted(self.cells):
            x, y = self.cells[v]
            lines.append(f"var {v} cell {x} {y} true {self.true[v].glyph} false {self.false[v].glyph}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "VarMap":
        from ..board import GLYPHS

        lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines or lines[0] != "VARMAP 1":
            raise ValueError("missing 'VARMAP 1' header")
        cells, true, false = {}, {}, {}
        for ln in lines[1:]:
            p = ln.split()
            if len(p) != 9 or p[0] != "var" or p[2] != "cell" or p[5] != "true" or p[7] != "false":
                raise ValueError(f"bad varmap line: {ln!r}")
            try:
                v = int(p[1])
                cells[v] = (int(p[3]), int(p[4]))
                t, f = GLYPHS[p[6]], GLYPHS[p[8]]
            except (ValueError, KeyError):
                raise ValueError(f"bad varmap line: {ln!r}") from None
            if not isinstance(t, Direction) or not isinstance(f, Direction) or t == f:
                raise ValueError(f"bad arrows in varmap line: {ln!r}")
            true[v], false[v] = t, f
        return cls(cells, true, false)


def _literal_tile(page: int, polarity: bool):
    # the lower page is mirrored, which swaps what the tiles detect
    return LITERAL_TILES[polarity if page == ABOVE else not polarity]


def _extent(arc: Arc, leg: int) -> tuple[int, int]:
    """Columns used left and right of a port's first column, at any height."""
    if arc.is_wire:
        return 0, 3
    tile = _literal_tile(arc.page, arc.legs[leg][1])
    wx = tile.ports["wire"][0][0]
    return wx, tile.width - 1 - wx


def _ceil_to(x: int, step: int, offset: int = 0) -> int:
    return x + (offset - x) % step


@dataclass
class _Plan:
    x: list[int]  # left column of each item
    ports: dict[tuple[int, int], int]  # (arc, leg) -> first column of its port
    port_index: dict[tuple[int, int], int]  # (arc, leg) -> fanout index on its item side
    units: list[tuple[int, int]]  # (top, bottom) chain units per item
    base: dict[int, int]  # arc -> first page row
    top: dict[int, int]  # arc -> last page row


def plan(arr: Arrangement) -> _Plan:
    arcs = arr.arcs
    n_items = len(arr.items)
    orders = {(it, pg): port_order(arcs, it, pg) for it in range(n_items) for pg in (ABOVE, BELOW)}
    leg_of = {}
    for k, a in enumerate(arcs):
        for li, (it, _) in enumerate(a.legs):
            leg_of[(k, it)] = li
    xs: list[int] = []
    ports: dict[tuple[int, int], int] = {}
    port_index: dict[tuple[int, int], int] = {}
    units: list[tuple[int, int]] = []
    last_right = {ABOVE: None, BELOW: None}  # rightmost used column of the previous port
    end = ROMA_LEAD
    for it in range(n_items):
        x = _ceil_to(end + ITEM_GAP, 6)
        xs.append(x)
        used = []
        for pg, off in ((ABOVE, 0), (BELOW, 3)):
            j = 0
            for k in orders[(it, pg)]:
                li = leg_of[(k, it)]
                left, right = _extent(arcs[k], li)
                p = x + off + 6 * j
                if last_right[pg] is not None:
                    p = max(p, _ceil_to(last_right[pg] + 2 + left, 6, off))
                j = (p - x - off) // 6
                ports[(k, li)] = p
                port_index[(k, li)] = j
                last_right[pg] = p + right
                j += 1
            used.append(max(1, j - 1))
        units.append((used[0], used[1]))
        width = variable_item(*units[-1]).width
        end = x + width
    # heights: inner arcs first
    order = sorted(range(len(arcs)), key=lambda k: sum(inside(arcs, i, k) for i in range(len(arcs))))
    base: dict[int, int] = {}
    top: dict[int, int] = {}
    for k in order:
        b = MIN_BASE[arcs[k].page]
        for i in range(len(arcs)):
            if inside(arcs, i, k):
                b = max(b, top[i] + 2)
        base[k] = b
        top[k] = b + (WIRE_HEIGHT if arcs[k].is_wire else CLAUSE_HEIGHT) - 1
    return _Plan(xs, ports, port_index, units, base, top)


def draw_stack(cv: Canvas, page: int, y0: int, col: int, base: int) -> None:
    """Conductor boxes in column ``col`` from the item's port row up to page row ``base``."""
    first_free = ITEM_ABOVE + 1 if page == ABOVE else ITEM_BELOW + 1
    if base > first_free:
        cv.stamp(stack(base - first_free), col, _row(y0, page, first_free), page == BELOW)


def draw_clause(cv: Canvas, page: int, y0: int, base: int, legs: list[tuple[int, bool]]) -> None:
    """Literal gadgets on the ports ``legs`` (column, polarity) and the 1-box ring through them."""
    flip = page == BELOW
    entries, exits = [], []
    for col, pol in legs:
        tile = _literal_tile(page, pol)
        ox = col - tile.ports["wire"][0][0]
        cv.stamp(tile, ox, _row(y0, page, base), flip)
        entries.append(ox + tile.ports["entry"][0][0])
        exits.append(ox + tile.ports["exit"][0][0])
    ring_row, back_row = _row(y0, page, base + 7), _row(y0, page, base + 8)
    occupied = set()
    for e, x in zip(entries, exits):
        occupied.update(range(e, x + 1))
    left, right = entries[0] - 1, exits[-1] + 1
    up, down = (Direction.UP, Direction.DOWN) if page == ABOVE else (Direction.DOWN, Direction.UP)
    ring: dict[Coord, Direction] = {}
    for x in range(left, right + 1):
        if x not in occupied:
            ring[(x, ring_row)] = up if x == right else Direction.RIGHT
        ring[(x, back_row)] = down if x == left else Direction.LEFT
    for c, d in ring.items():
        cv.put({c: d})
    cv.rings.update(ring)


def _row(y0: int, page: int, u: int) -> int:
    return y0 + u if page == ABOVE else y0 - u


def realize(arr: Arrangement) -> tuple[BoardSpec, VarMap]:
    """Stamp every tile of the arrangement and close the board with filler."""
    check(arr)
    p = plan(arr)
    cv = Canvas()
    y0 = 0
    for it, x in enumerate(p.x):
        cv.stamp(variable_item(*p.units[it]), x, y0 - ITEM_BELOW)
    for k, arc in enumerate(arr.arcs):
        cols = [p.ports[(k, li)] for li in range(len(arc.legs))]
        for c in cols:
            draw_stack(cv, arc.page, y0, c, p.base[k])
        if arc.is_wire:
            cv.stamp(chain((cols[-1] - cols[0]) // 6), cols[0], _row(y0, arc.page, p.base[k]), arc.page == BELOW)
        else:
            draw_clause(cv, arc.page, y0, p.base[k], [(c, pol) for c, (_, pol) in zip(cols, arc.legs)])
    x0, ylo, x1, yhi = cv.bounds()
    roma_x = min(x0, 0) - 1
    margin = 1
    n = max(x1 - roma_x + 1 + margin, yhi - ylo + 1 + 2 * margin)
    cv.put({(roma_x, y0): ROMA})
    for x in range(roma_x + 1, roma_x + n):
        if (x, y0) not in cv.value:
            cv.put({(x, y0): Direction.LEFT})
    oy = ylo - margin - (n - (yhi - ylo + 1 + 2 * margin)) // 2
    spec = cv.close(n, origin=(roma_x, oy))
    dx, dy = -roma_x, -oy
    cells = {}
    for v, it in arr.primary.items():
        cx, cy = DECISION_CELL
        cells[v] = (p.x[it] + cx + dx, y0 - ITEM_BELOW + cy + dy)
    vm = VarMap(cells, {v: DECISION_TRUE for v in cells}, {v: DECISION_FALSE for v in cells})
    return spec, vm


def decode(spec: BoardSpec, vm: VarMap, a: Assignment) -> dict[int, bool]:
    """Truth value of every source variable read from its decision cell."""
    out = {}
    for v, c in vm.cells.items():
        arrow = a[c]
        if arrow == vm.true[v]:
            out[v] = True
        elif arrow == vm.false[v]:
            out[v] = False
        else:
            raise ValueError(f"decision cell of variable {v} holds {arrow}, which is neither value")
    return out


def compile(cnf: Cnf) -> tuple[BoardSpec, VarMap]:  # noqa: A001 - the reduction's name
    """Compile a 3-CNF formula into a Roma board whose solutions match its models one to one.

    The formula is normalized first.  A crossing-free spine arrangement is
    used when one exists, then one with a single crossover block; otherwise
    every crossing of the rectilinear layout gets its own block.
    """
    cnf = cnf.normalized()
    if cnf.num_vars == 0:
        # no variables: the empty formula has one model, the 1x1 board one solution
        return BoardSpec(1, [((0, 0),)], {(0, 0): ROMA}), VarMap({}, {}, {})
    return realize(arrangement_for(cnf))


def arrangement_for(cnf: Cnf) -> Arrangement:
    """The arrangement :func:`compile` tiles for ``cnf``."""
    cnf = cnf.normalized()
    return direct_arrangement(cnf) or block_arrangement(cnf) or stack_arrangement(cnf)


# Size bound.  Placing an item moves the column cursor by at most the variable
# tile's width plus the gap plus 5 columns of alignment; a port moves it by at
# most the widest drawing right of a port, the gap, the widest drawing left of
# the next port and 5 columns of alignment.  Every nested arc adds one clause
# height plus a blank row on its page.
ITEM_STEP = VARIABLE.width + ITEM_GAP + 5
PORT_STEP = max(t.width - t.ports["wire"][0][0] - 1 for t in LITERAL_TILES.values()) + ITEM_GAP \
    + max(t.ports["wire"][0][0] for t in LITERAL_TILES.values()) + 5
ARC_STEP = CLAUSE_HEIGHT + 1
# The cursor starts one item step before the first item; the Roma column, the
# last column itself and the margin add three.
WIDTH_BASE = _ceil_to(ROMA_LEAD + ITEM_GAP, 6) - (ITEM_GAP + 5) + 3
# An arc at nesting depth d tops out at MIN_BASE - 2 + ARC_STEP * d.
HEIGHT_BASE = (ITEM_BELOW + ITEM_ABOVE + 1 + 2
               + max(0, MIN_BASE[ABOVE] - 2 - ITEM_ABOVE) + max(0, MIN_BASE[BELOW] - 2 - ITEM_BELOW))


def side_bound(items: int, ports: int, arcs: int) -> int:
    """Upper bound on the board side of an arrangement with these counts."""
    return max(WIDTH_BASE + ITEM_STEP * items + PORT_STEP * ports, HEIGHT_BASE + ARC_STEP * arcs)


def arrangement_counts(arr: Arrangement) -> tuple[int, int, int]:
    return len(arr.items), sum(len(a.legs) for a in arr.arcs), len(arr.arcs)


def size_constant() -> int:
    """The constant C with side <= C * (#vars + #clauses + #crossings) for every compiled board.

    Per unit of the measure, the crossover construction is the most
    expensive.  With V variables, K clauses and X crossings the stack
    arrangement has at most V + 6K + 10X items, V + 6K + 3X wires and
    K + 18X clause arcs.  A crossing-free arrangement has V items and at most
    3K ports.  The one-block arrangement has at most V + 11 items, 6 wires
    and K + 18 clause arcs.  :func:`side_bound` turns these into per-unit
    costs.
    """
    lits = sum(len(cl) for cl in CROSSOVER_CLAUSES)
    per_item, per_port, per_arc = ITEM_STEP, PORT_STEP, ARC_STEP
    block_items = len(CROSSOVER_VARS) + 2
    block_wires = 4 + 2
    wide = {
        "var": per_item + 2 * per_port + WIDTH_BASE,
        "clause": 6 * per_item + (2 * 6 + 3) * per_port,
        "crossing": max(1 + len(CROSSOVER_VARS), block_items) * per_item
        + (2 * max(3, block_wires) + lits) * per_port,
    }
    tall = {
        "var": per_arc + HEIGHT_BASE,
        "clause": 7 * per_arc,
        "crossing": (max(3, block_wires) + len(CROSSOVER_CLAUSES)) * per_arc,
    }
    return max(max(wide.values()), max(tall.values()))
