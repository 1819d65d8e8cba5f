"""Brute-force ground truth: enumerate every filling of the empty cells.

The search walks the empty cells in reading order and tries arrows in the
order up, down, left, right.  It prunes only on necessary conditions (an
arrow leaving the board, an arrow repeated inside a box, a cycle closed
through already-assigned cells) and re-checks every leaf.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator, Optional

from .board import (
    DIRECTIONS,
    ROMA,
    Assignment,
    BoardSpec,
    CellContent,
    Coord,
    Direction,
    is_valid,
)

DEFAULT_CAP = 16


class CapExceeded(RuntimeError):
    """The instance has more empty cells than the enumeration cap allows."""


class Unsatisfiable(ValueError):
    """Raised by :func:`fcp_bruteforce` when the input has no solution."""


@dataclass(frozen=True)
class SolutionSet:
    solutions: tuple[Assignment, ...] = field(default_factory=tuple)
    truncated: bool = False
    count: int = 0


def _fillings(spec: BoardSpec, cap: Optional[int]) -> Iterator[dict[Coord, Direction]]:
    empty = spec.empty_cells
    if cap is not None and len(empty) > cap:
        raise CapExceeded(f"k={len(empty)} exceeds the oracle cap of {cap}")
    content: dict[Coord, CellContent] = dict(spec.presets)
    used: dict[int, set[Direction]] = {}
    for c, v in spec.presets.items():
        if isinstance(v, Direction):
            used.setdefault(spec.box_of[c], set()).add(v)

    def closes_cycle(c: Coord) -> bool:
        t = content[c].step(c)
        for _ in range(len(content)):
            if t == c:
                return True
            v = content.get(t)
            if v is None or v is ROMA or not spec.on_board(t):
                return False
            t = v.step(t)
        return True

    def rec(i: int) -> Iterator[dict[Coord, Direction]]:
        if i == len(empty):
            yield {c: content[c] for c in empty}
            return
        c = empty[i]
        box = used.setdefault(spec.box_of[c], set())
        for d in DIRECTIONS:
            if d in box or not spec.on_board(d.step(c)):
                continue
            content[c] = d
            if not closes_cycle(c):
                box.add(d)
                yield from rec(i + 1)
                box.discard(d)
            del content[c]

    yield from rec(0)


def oracle_enumerate(spec: BoardSpec, limit: Optional[int] = None, cap: Optional[int] = DEFAULT_CAP) -> SolutionSet:
    """All solutions in deterministic order; stops after ``limit`` if given."""
    sols = []
    truncated = False
    for filling in _fillings(spec, cap):
        a = Assignment.complete(spec, filling)
        if is_valid(spec, a):
            continue
        if limit is not None and len(sols) == limit:
            truncated = True
            break
        sols.append(a)
    return SolutionSet(tuple(sols), truncated, len(sols))


def oracle_count(spec: BoardSpec, cap: Optional[int] = DEFAULT_CAP) -> int:
    return oracle_enumerate(spec, cap=cap).count


def fcp_bruteforce(
    spec: BoardSpec, k: int, cap: Optional[int] = DEFAULT_CAP
) -> Optional[frozenset[tuple[Coord, Direction]]]:
    """Smallest hint set (size <= k) that leaves exactly one solution, or None.

    Hints must agree with at least one solution, so a candidate set is
    accepted exactly when one solution extends it.
    """
    sols = oracle_enumerate(spec, cap=cap).solutions
    if not sols:
        raise Unsatisfiable("the board has no solution")
    empty = spec.empty_cells
    for size in range(0, k + 1):
        for cells in combinations(empty, size):
            for values in product(DIRECTIONS, repeat=size):
                hint = dict(zip(cells, values))
                matching = 0
                for s in sols:
                    if all(s[c] == v for c, v in hint.items()):
                        matching += 1
                        if matching > 1:
                            break
                if matching == 1:
                    return frozenset(hint.items())
    return None
