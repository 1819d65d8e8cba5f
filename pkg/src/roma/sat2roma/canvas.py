"""A sparse drawing surface for stamping tiles and closing a board with filler."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Optional

from ..board import ROMA, BoardSpec, CellContent, Coord, Direction
from .tiles import GadgetTile

_FLIP_V = {Direction.UP: Direction.DOWN, Direction.DOWN: Direction.UP}


class FillError(RuntimeError):
    """Some blank region has no way to drain into the core line or a clause ring."""


class Canvas:
    """Cells with optional preset arrows and their boxes; blank cells become filler."""

    def __init__(self) -> None:
        self.value: dict[Coord, Optional[CellContent]] = {}
        self.boxes: list[tuple[Coord, ...]] = []
        self.rings: set[Coord] = set()

    def put(self, box: dict[Coord, Optional[CellContent]]) -> None:
        for c in box:
            if c in self.value:
                raise AssertionError(f"cell {c} stamped twice")
        self.value.update(box)
        self.boxes.append(tuple(box))

    def stamp(self, tile: GadgetTile, ox: int, oy: int, flip: bool = False) -> None:
        """Place ``tile`` with local (0, 0) at (ox, oy).

        With ``flip`` local row r lands on board row ``oy - r`` and up/down
        arrows swap, mirroring the tile below the anchor row.
        """
        for b in tile.boxes:
            box = {}
            for x, y in b:
                v = tile.cells[(x, y)]
                if flip:
                    box[(ox + x, oy - y)] = _FLIP_V.get(v, v) if v is not None else None
                else:
                    box[(ox + x, oy + y)] = v
            self.put(box)

    def bounds(self) -> tuple[int, int, int, int]:
        xs = [c[0] for c in self.value]
        ys = [c[1] for c in self.value]
        return min(xs), min(ys), max(xs), max(ys)

    def close(self, n: Optional[int] = None, origin: Optional[Coord] = None, margin: int = 1) -> BoardSpec:
        """Cut out an n x n board and fill every blank cell with a 1-box arrow.

        Board cell (bx, by) is canvas cell ``(bx + origin[0], by + origin[1])``;
        by default the drawing is framed by ``margin`` blank cells.  Filler
        drains first to presets whose preset-only flow reaches the Roma cell;
        regions that cannot reach those drain into clause rings.
        """
        x0, y0, x1, y1 = self.bounds()
        if n is None:
            n = max(x1 - x0, y1 - y0) + 1 + 2 * margin
        if origin is None:
            origin = (x0 - margin, y0 - margin)
        ox, oy = origin
        if x0 < ox or y0 < oy or x1 >= ox + n or y1 >= oy + n:
            raise ValueError("drawing does not fit the requested board")
        value = {(x - ox, y - oy): v for (x, y), v in self.value.items()}
        boxes = [tuple((x - ox, y - oy) for x, y in b) for b in self.boxes]
        rings = {(x - ox, y - oy) for x, y in self.rings}
        filler = drain(n, value, rings)
        presets = {c: v for c, v in value.items() if v is not None}
        presets.update(filler)
        boxes.extend((c,) for c in filler)
        return BoardSpec(n, boxes, presets)


def _safe_presets(value: dict[Coord, Optional[CellContent]]) -> set[Coord]:
    """Preset cells whose preset-only flow ends at the Roma cell."""
    state: dict[Coord, bool] = {}
    for start in value:
        if value[start] is None or start in state:
            continue
        path = []
        c = start
        result = False
        while True:
            if c in state:
                result = state[c]
                break
            v = value.get(c)
            if v is None:
                break
            if v is ROMA:
                result = True
                break
            if c in path:
                break
            path.append(c)
            c = v.step(c)
        for p in path:
            state[p] = result
        if value.get(c) is ROMA:
            state[c] = True
    return {c for c, ok in state.items() if ok}


def drain(n: int, value: dict[Coord, Optional[CellContent]], rings: Iterable[Coord]) -> dict[Coord, Direction]:
    """Breadth-first filler arrows for the blank cells of an n x n board.

    Filler only ever follows the flow of the cell it drains into, so the
    solution count does not depend on where it drains.  The preference order
    (Roma-bound presets, then clause rings, then any drawn cell for pockets
    enclosed by gadgets) keeps filler out of the gadgets wherever possible.
    """
    out: dict[Coord, Direction] = {}

    def bfs(sources: Iterable[Coord]) -> None:
        q = deque(sources)
        while q:
            c = q.popleft()
            for d in (Direction.DOWN, Direction.UP, Direction.LEFT, Direction.RIGHT):
                t = d.opposite.step(c)
                if not (0 <= t[0] < n and 0 <= t[1] < n) or t in value or t in out:
                    continue
                out[t] = d
                q.append(t)

    bfs(sorted(_safe_presets(value)))
    bfs(sorted(rings))
    bfs(sorted(value))
    missing = n * n - len(value) - len(out)
    if missing:
        raise FillError(f"{missing} blank cells cannot drain")
    return out
