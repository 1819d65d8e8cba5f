"""Random board generators shared by the test-suite and the benchmarks."""

from __future__ import annotations

import random
from typing import Optional

from .board import DIRECTIONS, ROMA, BoardSpec, CellContent, Coord, Direction


def _neighbours(c: Coord, n: int) -> list[tuple[Direction, Coord]]:
    out = []
    for d in DIRECTIONS:
        t = d.step(c)
        if 0 <= t[0] < n and 0 <= t[1] < n:
            out.append((d, t))
    return out


def random_arborescence(n: int, roma: Coord, rng: random.Random) -> dict[Coord, CellContent]:
    """A uniformly random spanning in-tree rooted at ``roma`` (Wilson's algorithm)."""
    content: dict[Coord, CellContent] = {roma: ROMA}
    cells = [(x, y) for y in range(n) for x in range(n)]
    rng.shuffle(cells)
    for start in cells:
        if start in content:
            continue
        walk: dict[Coord, Direction] = {}
        c = start
        while c not in content:
            d, t = rng.choice(_neighbours(c, n))
            walk[c] = d
            c = t
        c = start
        while c not in content:
            content[c] = walk[c]
            c = walk[c].step(c)
    return content


def random_partition(n: int, rng: random.Random, roma: Coord,
                     content: Optional[dict[Coord, CellContent]] = None) -> list[list[Coord]]:
    """Random boxes of size 1-4; with ``content`` every box keeps distinct arrows."""
    free = {(x, y) for y in range(n) for x in range(n)} - {roma}
    boxes = [[roma]]
    order = sorted(free)
    rng.shuffle(order)
    for seed in order:
        if seed not in free:
            continue
        size = rng.randint(1, 4)
        box = [seed]
        free.discard(seed)
        used = {content[seed]} if content else set()
        while len(box) < size:
            options = [
                t for c in box for _, t in _neighbours(c, n)
                if t in free and (content is None or content[t] not in used)
            ]
            if not options:
                break
            t = rng.choice(options)
            box.append(t)
            free.discard(t)
            if content:
                used.add(content[t])
        boxes.append(box)
    return boxes


def random_board(n: int, rng: random.Random, preset_frac: Optional[float] = None,
                 planted: Optional[bool] = None) -> BoardSpec:
    """A legal random board.

    Planted boards take their presets from a hidden solution and are always
    solvable; the others draw presets independently and are often not.
    """
    if preset_frac is None:
        preset_frac = rng.uniform(0.0, 0.5)
    if planted is None:
        planted = rng.random() < 0.5
    roma = (rng.randrange(n), rng.randrange(n))
    hidden = random_arborescence(n, roma, rng)
    boxes = random_partition(n, rng, roma, hidden if planted else None)
    presets: dict[Coord, CellContent] = {roma: ROMA}
    cells = [c for c in hidden if c != roma]
    rng.shuffle(cells)
    for c in cells[: round(preset_frac * len(cells))]:
        presets[c] = hidden[c] if planted else rng.choice(DIRECTIONS)
    spec = BoardSpec(n, boxes, presets)
    if not planted:
        # drop presets that repeat an arrow inside a box
        keep: dict[Coord, CellContent] = {}
        for box in spec.boxes:
            seen = set()
            for c in sorted(box):
                v = presets.get(c)
                if v is None:
                    continue
                if v is ROMA or v not in seen:
                    keep[c] = v
                    seen.add(v)
        spec = BoardSpec(n, boxes, keep)
    return spec


def twobox_board(k: int, rng: random.Random, n: Optional[int] = None) -> BoardSpec:
    """A board whose k empty cells are paired into fully empty 2-boxes.

    The remaining cells are a planted solution's arrows in 1-boxes, so the
    board is always solvable.
    """
    if k % 2:
        raise ValueError("k must be even")
    if n is None:
        n = 2
        while n * n - 1 < k:
            n += 1
    roma = (0, 0)
    hidden = random_arborescence(n, roma, rng)
    free = {c for c in hidden if c != roma}
    pairs: list[list[Coord]] = []
    order = sorted(free)
    rng.shuffle(order)
    for c in order:
        if len(pairs) * 2 == k:
            break
        if c not in free:
            continue
        mates = [t for d, t in _neighbours(c, n) if t in free and hidden[t] != hidden[c]]
        if not mates:
            continue
        t = rng.choice(mates)
        free -= {c, t}
        pairs.append([c, t])
    if len(pairs) * 2 != k:
        return twobox_board(k, rng, n + 1)
    boxes = pairs + [[c] for c in sorted(free)] + [[roma]]
    presets = {c: hidden[c] for c in free}
    presets[roma] = ROMA
    return BoardSpec(n, boxes, presets)
