"""Gadget tiles, cell for cell.

Each tile is drawn as two pictures of equal shape, top row first: the glyph
picture (``^ v < >`` preset arrows, ``.`` empty cells, blank for cells that
do not belong to the tile) and the box picture, where 4-adjacent cells with
the same letter form one box.  Local coordinates put the origin at the
bottom-left corner.

Fanouts chain with period 6; :func:`chain` builds a chain of any length and
reproduces the single fanout for one unit.  :func:`variable_item` widens the
variable gadget by extending its fanouts to the right over the core line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Optional, Sequence

from ..board import Coord, Direction, GLYPHS

_FLIP_V = {Direction.UP: Direction.DOWN, Direction.DOWN: Direction.UP,
           Direction.LEFT: Direction.LEFT, Direction.RIGHT: Direction.RIGHT}


@dataclass(frozen=True)
class GadgetTile:
    """A rectangle of cells with a local box partition and local presets.

    ``cells`` maps every tile cell to its preset arrow or to None when it is
    empty.  ``ports`` names boundary cells (conductor boxes) where signals
    enter or leave.
    """

    name: str
    width: int
    height: int
    cells: Mapping[Coord, Optional[Direction]]
    boxes: tuple[tuple[Coord, ...], ...]
    ports: Mapping[str, tuple[Coord, ...]] = field(default_factory=dict)

    @property
    def presets(self) -> dict[Coord, Direction]:
        return {c: v for c, v in self.cells.items() if v is not None}

    @property
    def empty_cells(self) -> list[Coord]:
        return sorted((c for c, v in self.cells.items() if v is None), key=lambda c: (-c[1], c[0]))

    def vflip(self) -> "GadgetTile":
        """Mirror top to bottom; up and down arrows swap."""
        h = self.height - 1
        f = lambda c: (c[0], h - c[1])
        return GadgetTile(
            self.name + "-flipped",
            self.width,
            self.height,
            MappingProxyType({f(c): (None if v is None else _FLIP_V[v]) for c, v in self.cells.items()}),
            tuple(tuple(sorted(f(c) for c in b)) for b in self.boxes),
            MappingProxyType({k: tuple(f(c) for c in cs) for k, cs in self.ports.items()}),
        )

    def pictures(self) -> tuple[list[str], list[str]]:
        """The glyph and box pictures (inverse of :func:`parse_tile`)."""
        label = {}
        for i, b in enumerate(self.boxes):
            for c in b:
                label[c] = i
        colour: dict[int, str] = {}
        for i, b in enumerate(self.boxes):
            taken = set()
            for x, y in b:
                for t in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                    if t in label and label[t] != i and label[t] in colour:
                        taken.add(colour[label[t]])
            colour[i] = next(ch for ch in "abcdefghijklmnopqrstuvwxyz" if ch not in taken)
        glyphs, boxes = [], []
        for y in range(self.height - 1, -1, -1):
            g = b = ""
            for x in range(self.width):
                if (x, y) in self.cells:
                    v = self.cells[(x, y)]
                    g += "." if v is None else v.glyph
                    b += colour[label[(x, y)]]
                else:
                    g += " "
                    b += " "
            glyphs.append(g.rstrip())
            boxes.append(b.rstrip())
        return glyphs, boxes


def parse_tile(name: str, glyphs: Sequence[str], boxes: Sequence[str],
               ports: Optional[Mapping[str, Sequence[Coord]]] = None) -> GadgetTile:
    if len(glyphs) != len(boxes):
        raise ValueError("glyph and box pictures differ in height")
    h = len(glyphs)
    w = max(len(r) for r in glyphs)
    cells: dict[Coord, Optional[Direction]] = {}
    label: dict[Coord, str] = {}
    for r, (grow, brow) in enumerate(zip(glyphs, boxes)):
        y = h - 1 - r
        grow, brow = grow.ljust(w), brow.ljust(w)
        for x in range(w):
            g, b = grow[x], brow[x]
            if g == " ":
                if b != " ":
                    raise ValueError(f"{name}: box label without a cell at {(x, y)}")
                continue
            if b == " ":
                raise ValueError(f"{name}: cell without a box label at {(x, y)}")
            cells[(x, y)] = None if g == "." else GLYPHS[g]
            label[(x, y)] = b
    seen: set[Coord] = set()
    out = []
    for c in sorted(cells, key=lambda c: (-c[1], c[0])):
        if c in seen:
            continue
        comp = [c]
        seen.add(c)
        for p in comp:
            for t in ((p[0] + 1, p[1]), (p[0] - 1, p[1]), (p[0], p[1] + 1), (p[0], p[1] - 1)):
                if t in label and t not in seen and label[t] == label[c]:
                    seen.add(t)
                    comp.append(t)
        if len(comp) > 4:
            raise ValueError(f"{name}: box at {c} has {len(comp)} cells")
        out.append(tuple(sorted(comp)))
    return GadgetTile(name, w, h, MappingProxyType(cells), tuple(out),
                      MappingProxyType({k: tuple(v) for k, v in (ports or {}).items()}))


def _conductor(x: int, y: int) -> list[Coord]:
    return [(x + i, y) for i in range(4)]


# Straight line: three stacked conductor boxes.
STRAIGHT = parse_tile(
    "straight",
    [".<>.",
     ".<>.",
     ".<>."],
    ["aaaa",
     "bbbb",
     "aaaa"],
    {"top": _conductor(0, 2), "bottom": _conductor(0, 0)},
)

# Fanout: one conductor pair on top, one below, joined through the middle row.
FANOUT = parse_tile(
    "fanout",
    [".<>.  .<>.",
     ".<>.<>.<>.",
     ".<>.  .<>."],
    ["aaaa  aaaa",
     "bbbccccbbb",
     "aaaa  aaaa"],
    {"top0": _conductor(0, 2), "top1": _conductor(6, 2),
     "bottom0": _conductor(0, 0), "bottom1": _conductor(6, 0)},
)

# Corner of a wire turning from vertical to horizontal.
CORNER = parse_tile(
    "corner",
    [".< ",
     ".^ ",
     "<  ",
     "^.."],
    ["aa ",
     "bc ",
     "b  ",
     "bba"],
)

# Variable gadget: core line in row 6, fanouts on top (rows 8-10) and bottom (rows 0-2).
VARIABLE = parse_tile(
    "variable",
    [".<>.  .<>.   ",
     ".<>.<>.<>.   ",
     ".<>.vv.<>.<  ",
     ".^vvvvvvv.^  ",
     "<<<<<<<<<<<<<",
     "^..v^^^^^^..v",
     "   >^^^^^<<<>",
     "  v.^^^^^<<v.",
     "  >.<>.^^.<>.",
     "   .<>.<>.<>.",
     "   .<>.  .<>."],
    ["aaaa  aaaa   ",
     "bbbccccbbb   ",
     "aaaabadddda  ",
     "bcbcabababa  ",
     "bacababacbcab",
     "bbddabababbcc",
     "   dbababacac",
     "  adababababc",
     "  accccabdddd",
     "   aaaeeeeaaa",
     "   bbbb  bbbb"],
    {"top0": _conductor(0, 10), "top1": _conductor(6, 10),
     "bottom0": _conductor(3, 0), "bottom1": _conductor(9, 0),
     "core": tuple((x, 6) for x in range(13))},
)

# Positive literal: satisfied (flow leaves through the bottom) when the wire carries true.
POS_LITERAL = parse_tile(
    "positive-literal",
    ["       v> ",
     "       v^ ",
     "   ^..^v^ ",
     "   v<>v<^ ",
     "   .vv.>^ ",
     ".<>.<>.<>.",
     ".<>.<>.<>.",
     ".<>.  .<>."],
    ["       ab ",
     "       ba ",
     "   aabbab ",
     "   accbca ",
     "   ababab ",
     "ccccbacccc",
     "aaaddddaaa",
     "bbbb  bbbb"],
    {"wire": _conductor(6, 0), "spare": _conductor(0, 0), "entry": ((7, 7),), "exit": ((8, 7),)},
)

# Negative literal: satisfied when the wire carries false.
NEG_LITERAL = parse_tile(
    "negative-literal",
    ["  >>v>>   ",
     "  v<v^^   ",
     "  v^..^   ",
     "  >v<>v   ",
     "  <.vv.   ",
     ".<>.<>.<>.",
     ".<>.<>.<>.",
     ".<>.  .<>."],
    ["  ababa   ",
     "  bacbc   ",
     "  abbaa   ",
     "  cbcca   ",
     "  ababa   ",
     "ccccabcccc",
     "aaaddddaaa",
     "bbbb  bbbb"],
    {"wire": _conductor(0, 0), "spare": _conductor(6, 0), "entry": ((2, 7),), "exit": ((6, 7),)},
)

# Signals: the value "true" puts the down arrow in the left column of every
# conductor box facing away from the core on the top side.
LITERAL_TILES = {True: POS_LITERAL, False: NEG_LITERAL}

# Decision cell of the variable gadget and its two values.
DECISION_CELL: Coord = (3, 3)
DECISION_TRUE = Direction.LEFT
DECISION_FALSE = Direction.UP


def chain(units: int) -> GadgetTile:
    """``units`` fanouts sharing conductors, period 6 (``chain(1)`` is :data:`FANOUT`)."""
    if units < 1:
        raise ValueError("a chain needs at least one unit")
    cells: dict[Coord, Optional[Direction]] = {}
    boxes: list[tuple[Coord, ...]] = []
    ports: dict[str, tuple[Coord, ...]] = {}

    def put(xs: Sequence[int], y: int, glyphs: str) -> None:
        for x, g in zip(xs, glyphs):
            cells[(x, y)] = None if g == "." else GLYPHS[g]
        boxes.append(tuple((x, y) for x in xs))

    for j in range(units + 1):
        x = 6 * j
        put(range(x, x + 4), 2, ".<>.")
        put(range(x, x + 4), 0, ".<>.")
        ports[f"top{j}"] = tuple(_conductor(x, 2))
        ports[f"bottom{j}"] = tuple(_conductor(x, 0))
    put(range(0, 3), 1, ".<>")
    for j in range(units):
        put(range(6 * j + 3, 6 * j + 7), 1, ".<>.")
        if j < units - 1:
            put(range(6 * j + 7, 6 * j + 9), 1, "<>")
    put(range(6 * units + 1, 6 * units + 4), 1, "<>.")
    return GadgetTile(f"chain{units}", 6 * units + 4, 3, MappingProxyType(cells),
                      tuple(tuple(sorted(b)) for b in boxes), MappingProxyType(ports))


def stack(height: int) -> GadgetTile:
    """A straight vertical wire of ``height`` conductor boxes."""
    cells = {}
    boxes = []
    for y in range(height):
        for x, g in zip(range(4), ".<>."):
            cells[(x, y)] = None if g == "." else GLYPHS[g]
        boxes.append(tuple((x, y) for x in range(4)))
    return GadgetTile(f"stack{height}", 4, height, MappingProxyType(cells), tuple(boxes),
                      MappingProxyType({"top": tuple(_conductor(0, height - 1)), "bottom": tuple(_conductor(0, 0))}))


def variable_item(top_units: int = 1, bottom_units: int = 1) -> GadgetTile:
    """The variable gadget with its fanouts extended to the right.

    Top ports sit at local columns ``0, 6, ..., 6 * top_units``; bottom ports
    at ``3, 9, ..., 3 + 6 * bottom_units``.  The core line is widened under the
    extensions.  ``variable_item(1, 1)`` equals :data:`VARIABLE`.
    """
    top = chain(top_units)
    bot = chain(bottom_units)
    width = max(VARIABLE.width, top.width, bot.width + 3)
    cells: dict[Coord, Optional[Direction]] = {}
    boxes: list[tuple[Coord, ...]] = []
    chain_cells = {(x, y + 8) for x, y in top.cells} | {(x + 3, y) for x, y in bot.cells}
    for b in VARIABLE.boxes:
        if all(c in _VAR_FANOUT for c in b):
            continue
        if any(c in chain_cells for c in b):
            raise AssertionError("extended fanout overlaps the variable gadget")
        boxes.append(b)
        for c in b:
            cells[c] = VARIABLE.cells[c]
    for t, dx, dy in ((top, 0, 8), (bot, 3, 0)):
        for b in t.boxes:
            boxes.append(tuple((x + dx, y + dy) for x, y in b))
            for x, y in b:
                cells[(x + dx, y + dy)] = t.cells[(x, y)]
    for x in range(VARIABLE.width, width):
        cells[(x, 6)] = Direction.LEFT
        boxes.append(((x, 6),))
    ports = {f"top{j}": tuple((x, y + 8) for x, y in top.ports[f"top{j}"]) for j in range(top_units + 1)}
    ports.update({f"bottom{j}": tuple((x + 3, y) for x, y in bot.ports[f"bottom{j}"]) for j in range(bottom_units + 1)})
    ports["core"] = tuple((x, 6) for x in range(width))
    return GadgetTile(f"variable{top_units}x{bottom_units}", width, VARIABLE.height,
                      MappingProxyType(cells), tuple(sorted(boxes)), MappingProxyType(ports))


_VAR_FANOUT = {(x, y + 8) for x, y in FANOUT.cells} | {(x + 3, y) for x, y in FANOUT.cells}
