"""Rectilinear embeddings of a formula and the crossover expansion.

:func:`layout` draws the incidence graph the classic way: variable i sits at
``(i, 0)`` on the horizontal axis, the clauses sit on the vertical axis
``x = 0`` in increasing order, and each literal is a polyline that runs up
from its variable and then left to its clause.  Each leg of a clause gets its
own horizontal track (the clause slot plus the leg's index), so every
transversal intersection is a distinct point.

:func:`insert_crossovers` replaces each of those points with one crossover
block and returns the resulting planar embedding, drawn from the spine
arrangement that the compiler tiles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .arrange import ABOVE, Arrangement, inside, stack_arrangement
from .cnf import Cnf

Point = tuple[int, int]
TRACKS = 4  # y units per clause slot; legs use the first three


@dataclass(frozen=True)
class Polyline:
    var: int
    clause: Optional[int]  # index into the formula's clauses; None for a wire between copies
    points: tuple[Point, ...]

    def segments(self) -> list[tuple[Point, Point]]:
        return [(a, b) for a, b in zip(self.points, self.points[1:]) if a != b]


@dataclass(frozen=True)
class PlanarLayout:
    var_x: dict[int, int]
    clause_y: dict[int, int]  # clause index -> y of its slot
    polylines: tuple[Polyline, ...]
    crossings: tuple[Point, ...]  # sorted left to right, then bottom to top
    core_path: tuple[Point, ...]


def _proper(v: tuple[Point, Point], h: tuple[Point, Point]) -> Optional[Point]:
    """Interior intersection of a vertical and a horizontal segment, if any."""
    (x, ya), (_, yb) = v
    (xa, y), (xb, _) = h
    if min(xa, xb) < x < max(xa, xb) and min(ya, yb) < y < max(ya, yb):
        return x, y
    return None


def find_crossings(polylines: tuple[Polyline, ...]) -> tuple[Point, ...]:
    """Points where polylines of different variables cross transversally.

    Touching at an endpoint and running along the same line do not count.
    """
    vert, horiz = [], []
    for pl in polylines:
        for s in pl.segments():
            (vert if s[0][0] == s[1][0] else horiz).append((pl.var, s))
    pts = set()
    for va, sv in vert:
        for vb, sh in horiz:
            if va != vb:
                p = _proper(sv, sh)
                if p is not None:
                    pts.add(p)
    return tuple(sorted(pts))


def layout(cnf: Cnf) -> PlanarLayout:
    var_x = {v: v for v in range(1, cnf.num_vars + 1)}
    clause_y = {j: TRACKS * (j + 1) for j in range(len(cnf.clauses))}
    lines = []
    for j, cl in enumerate(cnf.clauses):
        for t, (v, _) in enumerate(sorted(cl)):
            y = clause_y[j] + t
            lines.append(Polyline(v, j, ((var_x[v], 0), (var_x[v], y), (0, y))))
    polylines = tuple(lines)
    return PlanarLayout(var_x, clause_y, polylines, find_crossings(polylines), ((0, 0), (cnf.num_vars, 0)))


def arrangement_layout(arr: Arrangement) -> PlanarLayout:
    """Draw a spine arrangement: item i at ``(i + 1, 0)``, arcs as brackets above or below."""
    arcs = arr.arcs
    height: dict[int, int] = {}
    for k in sorted(range(len(arcs)), key=lambda k: sum(inside(arcs, i, k) for i in range(len(arcs)))):
        height[k] = 1 + max((height[i] for i in range(len(arcs)) if inside(arcs, i, k)), default=0)
    lines = []
    for k, a in enumerate(arcs):
        h = height[k] if a.page == ABOVE else -height[k]
        first = a.items[0] + 1
        for it in a.items:
            x = it + 1
            lines.append(Polyline(arr.items[it], a.clause, ((x, 0), (x, h), (first, h))))
    polylines = tuple(lines)
    var_x = {v: it + 1 for v, it in sorted(arr.primary.items())}
    for it, v in enumerate(arr.items):
        var_x.setdefault(v, it + 1)
    clause_y = {a.clause: height[k] if a.page == ABOVE else -height[k]
                for k, a in enumerate(arcs) if a.clause is not None}
    return PlanarLayout(var_x, clause_y, polylines, find_crossings(polylines), ((0, 0), (len(arr.items), 0)))


def insert_crossovers(lay: PlanarLayout, cnf: Cnf) -> tuple[PlanarLayout, Cnf]:
    """Replace every crossing of ``lay`` with a crossover block.

    Each block adds five auxiliary variables and eighteen clauses; the two
    crossing signals travel through it on copies of their own variables.
    A crossing-free layout is returned unchanged.
    """
    if not lay.crossings:
        return lay, cnf
    arr = stack_arrangement(cnf)
    if arr.crossovers != len(lay.crossings):
        raise AssertionError("layout does not belong to this formula")
    return arrangement_layout(arr), arr.cnf
