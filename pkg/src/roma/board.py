"""Roma boards: data model, validity checking, the ``ROMA 1`` file format and rendering.

Coordinates are ``(x, y)`` with x the column and y the row, origin at the
bottom-left cell, so ``Up`` moves to ``(x, y + 1)``.  Board files list rows
top-first; the parser flips them.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Optional, Union

Coord = tuple[int, int]


class Direction(enum.IntEnum):
    """The four arrows, in the canonical order used by every engine."""

    UP = 0
    DOWN = 1
    LEFT = 2
    RIGHT = 3

    @property
    def delta(self) -> Coord:
        return _DELTAS[self]

    @property
    def glyph(self) -> str:
        return "^v<>"[self]

    @property
    def unicode(self) -> str:
        return "↑↓←→"[self]

    @property
    def opposite(self) -> "Direction":
        return Direction(self ^ 1)

    def step(self, c: Coord) -> Coord:
        dx, dy = _DELTAS[self]
        return (c[0] + dx, c[1] + dy)


_DELTAS = ((0, 1), (0, -1), (-1, 0), (1, 0))
DIRECTIONS = tuple(Direction)


class RomaMark(enum.Enum):
    ROMA = "o"

    @property
    def glyph(self) -> str:
        return "o"


ROMA = RomaMark.ROMA
CellContent = Union[Direction, RomaMark]

GLYPHS: dict[str, CellContent] = {
    "^": Direction.UP,
    "v": Direction.DOWN,
    "<": Direction.LEFT,
    ">": Direction.RIGHT,
    "o": ROMA,
}


def glyph(content: Optional[CellContent]) -> str:
    return "." if content is None else content.glyph


class BoardError(ValueError):
    """Raised by the parser for syntax and semantic errors."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


class BoardSpec:
    """An n x n instance: box partition, presets and the Roma cell.

    Immutable.  ``boxes`` is a tuple of frozensets in reading order (top row
    first, left to right), which is also the canonical serialization order.
    """

    __slots__ = ("n", "boxes", "box_of", "presets", "roma", "_hash")

    def __init__(self, n: int, boxes: Iterable[Iterable[Coord]], presets: Mapping[Coord, CellContent]):
        self.n = n
        canon = [frozenset(b) for b in boxes]
        canon.sort(key=lambda b: min((-y, x) for x, y in b) if b else (0, 0))
        self.boxes: tuple[frozenset[Coord], ...] = tuple(canon)
        box_of: dict[Coord, int] = {}
        for i, b in enumerate(self.boxes):
            for c in b:
                box_of.setdefault(c, i)
        self.box_of: Mapping[Coord, int] = MappingProxyType(box_of)
        self.presets: Mapping[Coord, CellContent] = MappingProxyType(dict(presets))
        romas = [c for c, v in self.presets.items() if v is ROMA]
        self.roma: Optional[Coord] = romas[0] if len(romas) == 1 else None
        self._hash = hash((n, frozenset(self.boxes), frozenset(self.presets.items())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BoardSpec):
            return NotImplemented
        return (
            self.n == other.n
            and set(self.boxes) == set(other.boxes)
            and dict(self.presets) == dict(other.presets)
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"BoardSpec(n={self.n}, k={self.k}, roma={self.roma})"

    def cells(self) -> Iterator[Coord]:
        """All cells in row-major reading order (top row first)."""
        for y in range(self.n - 1, -1, -1):
            for x in range(self.n):
                yield (x, y)

    def on_board(self, c: Coord) -> bool:
        return 0 <= c[0] < self.n and 0 <= c[1] < self.n

    @property
    def empty_cells(self) -> list[Coord]:
        """E_R in row-major reading order."""
        return [c for c in self.cells() if c not in self.presets]

    @property
    def k(self) -> int:
        return self.n * self.n - len(self.presets)

    def box_cells(self, c: Coord) -> frozenset[Coord]:
        return self.boxes[self.box_of[c]]

    def with_presets(self, extra: Mapping[Coord, CellContent]) -> "BoardSpec":
        merged = dict(self.presets)
        merged.update(extra)
        return BoardSpec(self.n, self.boxes, merged)


@dataclass(frozen=True)
class Assignment:
    """A total map from cells to contents."""

    content: Mapping[Coord, CellContent]

    def __getitem__(self, c: Coord) -> CellContent:
        return self.content[c]

    @classmethod
    def complete(cls, spec: BoardSpec, filling: Mapping[Coord, CellContent]) -> "Assignment":
        merged = dict(spec.presets)
        merged.update(filling)
        return cls(MappingProxyType(merged))


class ViolationKind(enum.Enum):
    BOX_DUPLICATE = "BoxDuplicate"
    OFF_BOARD_ARROW = "OffBoardArrow"
    CYCLE = "Cycle"
    EXTRA_SINK = "ExtraSink"
    DISCONNECTED = "Disconnected"
    PRESET_CONFLICT = "PresetConflict"
    MALFORMED_PARTITION = "MalformedPartition"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    at: frozenset[Coord] = field(default_factory=frozenset)
    note: str = ""

    def __str__(self) -> str:
        cells = " ".join(f"({x},{y})" for x, y in sorted(self.at))
        return f"{self.kind.value} {cells}: {self.note}".rstrip(": ")


@dataclass(frozen=True)
class FlowGraph:
    out_edge: Mapping[Coord, Optional[Coord]]


def _neighbors(c: Coord) -> Iterator[Coord]:
    for d in DIRECTIONS:
        yield d.step(c)


def _connected(cells: frozenset[Coord]) -> bool:
    if not cells:
        return False
    start = next(iter(cells))
    seen = {start}
    stack = [start]
    while stack:
        for nb in _neighbors(stack.pop()):
            if nb in cells and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(cells)


def validate_spec(spec: BoardSpec) -> list[Violation]:
    """All invariant violations of a spec; empty iff the spec is legal."""
    out: list[Violation] = []
    bad = ViolationKind.MALFORMED_PARTITION
    all_cells = set(spec.cells())
    seen: dict[Coord, int] = {}
    for i, box in enumerate(spec.boxes):
        if not 1 <= len(box) <= 4:
            out.append(Violation(bad, box, f"box of size {len(box)}"))
        if not box <= all_cells:
            out.append(Violation(bad, box - all_cells, "box cell off the board"))
        elif not _connected(box):
            out.append(Violation(bad, box, "box is not 4-connected"))
        for c in box:
            if c in seen:
                out.append(Violation(bad, frozenset([c]), "cell in two boxes"))
            seen[c] = i
    missing = all_cells - seen.keys()
    if missing:
        out.append(Violation(bad, frozenset(missing), "cell in no box"))
    outside = [c for c in spec.presets if c not in all_cells]
    if outside:
        out.append(Violation(ViolationKind.PRESET_CONFLICT, frozenset(outside), "preset off the board"))
    romas = frozenset(c for c, v in spec.presets.items() if v is ROMA)
    if len(romas) != 1:
        out.append(Violation(ViolationKind.PRESET_CONFLICT, romas, f"{len(romas)} Roma cells"))
    else:
        (r,) = romas
        if r in spec.box_of and len(spec.box_cells(r)) != 1:
            out.append(Violation(bad, spec.box_cells(r), "Roma cell not in a 1-box"))
    for box in spec.boxes:
        used: dict[Direction, Coord] = {}
        for c in sorted(box):
            v = spec.presets.get(c)
            if isinstance(v, Direction):
                if v in used:
                    out.append(
                        Violation(ViolationKind.BOX_DUPLICATE, frozenset([c, used[v]]), f"preset {v.unicode} twice")
                    )
                used[v] = c
    return out


def flow_graph(spec: BoardSpec, a: Assignment) -> FlowGraph:
    out: dict[Coord, Optional[Coord]] = {}
    for c in spec.cells():
        v = a[c]
        if v is ROMA:
            out[c] = None
        else:
            t = v.step(c)
            out[c] = t if spec.on_board(t) else None
    return FlowGraph(MappingProxyType(out))


def _find_cycles(out: Mapping[Coord, Optional[Coord]]) -> list[list[Coord]]:
    color: dict[Coord, int] = {}
    cycles = []
    for start in out:
        if start in color:
            continue
        path = []
        c: Optional[Coord] = start
        while c is not None and c not in color:
            color[c] = 1
            path.append(c)
            c = out[c]
        if c is not None and color[c] == 1:
            cycles.append(path[path.index(c):])
        for p in path:
            color[p] = 2
    return cycles


def _box_violations(spec: BoardSpec, a: Assignment) -> list[Violation]:
    out = []
    for box in spec.boxes:
        by_dir: dict[Direction, list[Coord]] = {}
        for c in box:
            v = a[c]
            if isinstance(v, Direction):
                by_dir.setdefault(v, []).append(c)
        for d, cs in by_dir.items():
            if len(cs) > 1:
                out.append(Violation(ViolationKind.BOX_DUPLICATE, frozenset(cs), f"{d.unicode} repeated in box"))
    return out


def _preset_violations(spec: BoardSpec, a: Assignment) -> list[Violation]:
    out = []
    for c in spec.cells():
        if c not in a.content:
            out.append(Violation(ViolationKind.PRESET_CONFLICT, frozenset([c]), "cell unassigned"))
        elif c in spec.presets and a[c] != spec.presets[c]:
            out.append(Violation(ViolationKind.PRESET_CONFLICT, frozenset([c]), "disagrees with preset"))
        elif a[c] is ROMA and c != spec.roma:
            out.append(Violation(ViolationKind.PRESET_CONFLICT, frozenset([c]), "Roma outside the Roma cell"))
    return out


def is_valid(spec: BoardSpec, a: Assignment) -> list[Violation]:
    """Full check: box condition plus acyclic, weakly connected, unique sink."""
    out = _preset_violations(spec, a)
    if out:
        return out
    out = _box_violations(spec, a)
    g = flow_graph(spec, a).out_edge
    for c, t in g.items():
        if t is None and a[c] is not ROMA:
            out.append(Violation(ViolationKind.OFF_BOARD_ARROW, frozenset([c]), "arrow leaves the board"))
    sinks = [c for c, t in g.items() if t is None]
    if len(sinks) > 1:
        out.append(Violation(ViolationKind.EXTRA_SINK, frozenset(sinks), f"{len(sinks)} cells of out-degree 0"))
    for cyc in _find_cycles(g):
        out.append(Violation(ViolationKind.CYCLE, frozenset(cyc), f"cycle of length {len(cyc)}"))
    if not _weakly_connected(g):
        out.append(Violation(ViolationKind.DISCONNECTED, frozenset(), "flow graph not weakly connected"))
    return out


def is_valid_reduced(spec: BoardSpec, a: Assignment) -> bool:
    """Box condition, no off-board arrow and no cycle; equivalent to :func:`is_valid`."""
    if _preset_violations(spec, a) or _box_violations(spec, a):
        return False
    g = flow_graph(spec, a).out_edge
    if any(t is None and a[c] is not ROMA for c, t in g.items()):
        return False
    return not _find_cycles(g)


def _weakly_connected(g: Mapping[Coord, Optional[Coord]]) -> bool:
    adj: dict[Coord, list[Coord]] = {c: [] for c in g}
    for c, t in g.items():
        if t is not None:
            adj[c].append(t)
            adj[t].append(c)
    start = next(iter(g))
    seen = {start}
    stack = [start]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(g)


class TraceError(ValueError):
    pass


def trace_to_roma(spec: BoardSpec, a: Assignment, start: Coord) -> list[Coord]:
    """The unique directed path from ``start`` to the Roma cell."""
    path = [start]
    c = start
    limit = spec.n * spec.n
    while a[c] is not ROMA:
        c = a[c].step(c)
        if not spec.on_board(c):
            raise TraceError(f"path from {start} leaves the board")
        path.append(c)
        if len(path) > limit:
            raise TraceError(f"path from {start} exceeds n^2 cells")
    if c != spec.roma:
        raise TraceError(f"path from {start} ends at {c}, not the Roma cell")
    return path


# --------------------------------------------------------------------------- file format

_HEADER = "ROMA 1"


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_board(text: str, validate: bool = True) -> BoardSpec:
    """Read a ``ROMA 1`` file.

    With ``validate`` (the default) semantic problems such as oversized or
    disconnected boxes raise :class:`BoardError`; without it they are left
    for :func:`validate_spec` to report.
    """
    lines = [(i + 1, _strip(raw)) for i, raw in enumerate(text.splitlines())]
    lines = [(no, s) for no, s in lines if s]
    if not lines or lines[0][1] != _HEADER:
        raise BoardError(f"expected header {_HEADER!r}", lines[0][0] if lines else 1, 1)
    if len(lines) < 2 or not re.fullmatch(r"N\s+\d+", lines[1][1]):
        raise BoardError("expected 'N <size>'", lines[1][0] if len(lines) > 1 else None, 1)
    n = int(lines[1][1].split()[1])
    if n < 1:
        raise BoardError("board size must be positive", lines[1][0], 3)
    pos = 2

    def section(name: str) -> list[tuple[int, list[str]]]:
        nonlocal pos
        if pos >= len(lines) or lines[pos][1] != name:
            raise BoardError(f"expected section {name}", lines[pos][0] if pos < len(lines) else None, 1)
        pos += 1
        rows = []
        for _ in range(n):
            if pos >= len(lines):
                raise BoardError(f"section {name} has fewer than {n} rows")
            no, s = lines[pos]
            toks = s.split() if name == "BOXES" else list(s.replace(" ", "").replace("\t", ""))
            if len(toks) != n:
                raise BoardError(f"expected {n} entries, found {len(toks)}", no, 1)
            rows.append((no, toks))
            pos += 1
        return rows

    box_rows = section("BOXES")
    cell_rows = section("CELLS")
    if pos != len(lines):
        raise BoardError("trailing content", lines[pos][0], 1)
    groups: dict[str, list[Coord]] = {}
    for r, (no, toks) in enumerate(box_rows):
        for x, tok in enumerate(toks):
            if not re.fullmatch(r"\w+", tok):
                raise BoardError(f"bad box label {tok!r}", no, x + 1)
            groups.setdefault(tok, []).append((x, n - 1 - r))
    presets: dict[Coord, CellContent] = {}
    for r, (no, toks) in enumerate(cell_rows):
        for x, ch in enumerate(toks):
            if ch == ".":
                continue
            if ch not in GLYPHS:
                raise BoardError(f"bad cell glyph {ch!r}", no, x + 1)
            presets[(x, n - 1 - r)] = GLYPHS[ch]
    spec = BoardSpec(n, groups.values(), presets)
    problems = validate_spec(spec) if validate else []
    if problems:
        raise BoardError("; ".join(str(p) for p in problems))
    return spec


def _box_label(i: int) -> str:
    letters = "abcdefghijklmnopqrstuvwxyz"
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = letters[r] + s
    return s


def cells_grid(spec: BoardSpec, a: Optional[Assignment] = None) -> str:
    """The CELLS section body: one line per row, top row first."""
    src = a.content if a is not None else spec.presets
    rows = []
    for y in range(spec.n - 1, -1, -1):
        rows.append(" ".join(glyph(src.get((x, y))) for x in range(spec.n)))
    return "\n".join(rows)


def serialize_board(spec: BoardSpec, a: Optional[Assignment] = None) -> str:
    """Canonical ``ROMA 1`` text; boxes are relabelled in reading order."""
    width = len(_box_label(len(spec.boxes) - 1)) if spec.boxes else 1
    out = [_HEADER, f"N {spec.n}", "BOXES"]
    for y in range(spec.n - 1, -1, -1):
        out.append(" ".join(_box_label(spec.box_of[(x, y)]).ljust(width) for x in range(spec.n)).rstrip())
    out.append("CELLS")
    out.append(cells_grid(spec, a))
    return "\n".join(out) + "\n"


def parse_cells(text: str, n: int) -> dict[Coord, CellContent]:
    """Read a bare CELLS grid (as printed by the CLI) into a content map."""
    rows = [_strip(l) for l in text.splitlines()]
    rows = [r.replace(" ", "") for r in rows if r and r != "CELLS"]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise BoardError(f"expected a {n}x{n} cells grid")
    out = {}
    for r, row in enumerate(rows):
        for x, ch in enumerate(row):
            if ch != ".":
                if ch not in GLYPHS:
                    raise BoardError(f"bad cell glyph {ch!r}", r + 1, x + 1)
                out[(x, n - 1 - r)] = GLYPHS[ch]
    return out


# --------------------------------------------------------------------------- rendering

def render(spec: BoardSpec, a: Optional[Assignment] = None, format: str = "ascii") -> str:
    if format == "ascii":
        return _render_ascii(spec, a)
    if format == "svg":
        return _render_svg(spec, a)
    raise ValueError(f"unknown render format {format!r}")


def _render_ascii(spec: BoardSpec, a: Optional[Assignment]) -> str:
    """Cells are ``| g |`` wide; box walls are ``|``/``---``, inner edges blank."""
    n = spec.n
    src = a.content if a is not None else spec.presets
    if n == 1:
        return glyph(src.get((0, 0))) + "\n"

    def same(c: Coord, d: Coord) -> bool:
        return spec.on_board(c) and spec.on_board(d) and spec.box_of[c] == spec.box_of[d]

    lines = []
    for y in range(n, -1, -1):
        # horizontal edge between row y (above) and row y-1 (below)
        s = "+"
        for x in range(n):
            s += "   " if same((x, y), (x, y - 1)) else "---"
            s += "+"
        lines.append(s)
        if y == 0:
            break
        row = y - 1
        s = "|"
        for x in range(n):
            s += f" {glyph(src.get((x, row)))} "
            s += " " if same((x, row), (x + 1, row)) else "|"
        lines.append(s)
    return "\n".join(lines) + "\n"


def ascii_cells(text: str) -> dict[Coord, CellContent]:
    """Recover the contents from :func:`render` ASCII output."""
    lines = [l for l in text.splitlines() if l]
    if len(lines) == 1:
        ch = lines[0].strip()
        return {(0, 0): GLYPHS[ch]} if ch != "." else {}
    rows = lines[1::2]
    n = len(rows)
    out = {}
    for r, line in enumerate(rows):
        for x in range(n):
            ch = line[2 + 4 * x]
            if ch != ".":
                out[(x, n - 1 - r)] = GLYPHS[ch]
    return out


def _render_svg(spec: BoardSpec, a: Optional[Assignment]) -> str:
    n, s = spec.n, 32
    src = a.content if a is not None else spec.presets
    size = n * s + 8
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="-4 -4 {size} {size}">',
        '<g stroke="#999" stroke-width="1">',
    ]
    for i in range(n + 1):
        parts.append(f'<line x1="0" y1="{i * s}" x2="{n * s}" y2="{i * s}"/>')
        parts.append(f'<line x1="{i * s}" y1="0" x2="{i * s}" y2="{n * s}"/>')
    parts.append('</g><g stroke="black" stroke-width="4" stroke-linecap="square">')

    def same(c: Coord, d: Coord) -> bool:
        return spec.on_board(c) and spec.on_board(d) and spec.box_of[c] == spec.box_of[d]

    for y in range(n):
        for x in range(n):
            top = (n - 1 - y) * s
            if not same((x, y), (x, y + 1)):
                parts.append(f'<line x1="{x * s}" y1="{top}" x2="{x * s + s}" y2="{top}"/>')
            if not same((x, y), (x, y - 1)):
                parts.append(f'<line x1="{x * s}" y1="{top + s}" x2="{x * s + s}" y2="{top + s}"/>')
            if not same((x, y), (x - 1, y)):
                parts.append(f'<line x1="{x * s}" y1="{top}" x2="{x * s}" y2="{top + s}"/>')
            if not same((x, y), (x + 1, y)):
                parts.append(f'<line x1="{x * s + s}" y1="{top}" x2="{x * s + s}" y2="{top + s}"/>')
    parts.append('</g><g stroke="black" stroke-width="2" fill="none">')
    for (x, y), v in sorted(src.items()):
        cx, cy = x * s + s / 2, (n - 1 - y) * s + s / 2
        colour = "black" if (x, y) in spec.presets else "#c03"
        if v is ROMA:
            parts.append(f'<circle cx="{cx}" cy="{cy}" r="{s / 4}" stroke="{colour}"/>')
            continue
        dx, dy = v.delta
        x0, y0 = cx - dx * s * 0.3, cy + dy * s * 0.3
        x1, y1 = cx + dx * s * 0.3, cy - dy * s * 0.3
        hx, hy = -dx * s * 0.15, dy * s * 0.15
        px, py = dy * s * 0.1, dx * s * 0.1
        parts.append(
            f'<path stroke="{colour}" d="M{x0:g},{y0:g} L{x1:g},{y1:g} '
            f'M{x1 + hx + px:g},{y1 + hy + py:g} L{x1:g},{y1:g} L{x1 + hx - px:g},{y1 + hy - py:g}"/>'
        )
    parts.append("</g></svg>")
    return "\n".join(parts) + "\n"
