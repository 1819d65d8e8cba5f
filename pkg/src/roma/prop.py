"""Candidate elimination and search-tree solving.

Every empty cell keeps a 4-bit set of possible arrows.  Three rules remove
candidates: an arrow leaving the board, an arrow already fixed in the same
box, and an arrow whose adoption closes a cycle through fixed cells.  Cells
left with one candidate are fixed and the rules rerun to a fixpoint; then the
search branches on the undecided cell with the fewest candidates.

Cells are indexed ``y * n + x`` internally.  For each undecided cell the
engine keeps the invariant that no remaining candidate closes a cycle: when a
cell ``c`` is fixed, only the undecided cell at the end of the fixed chain
leaving ``c`` can gain a new cycle-closing candidate, so that is the only
cell re-examined.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

from .board import ROMA, Assignment, BoardSpec, CellContent, Coord, Direction, is_valid

FULL = 0b1111
_ROMA_VAL = 4
_TERM_ROMA = -2
_TERM_OFF = -1
_TERM_CYCLE = -3
_POP = [bin(m).count("1") for m in range(16)]
_BITS = [[d for d in range(4) if m >> d & 1] for m in range(16)]


class Mode(enum.Enum):
    FIRST = "first"
    COUNT = "count"
    AT_MOST_TWO = "at_most_two"


class Status(enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"


@dataclass(frozen=True)
class SolveResult:
    status: Status
    witness: Optional[Assignment] = None
    count: Optional[int] = None
    nodes: int = 0
    row_configs: tuple[int, ...] = ()


@dataclass(frozen=True)
class CandidateGrid:
    """Per-cell arrow sets for the empty cells; fixed cells carry their value."""

    spec: BoardSpec
    cand: Mapping[Coord, frozenset[Direction]]
    fixed: Mapping[Coord, CellContent]

    def __getitem__(self, c: Coord) -> frozenset[Direction]:
        return self.cand[c]


class Contradiction(Exception):
    """Some cell has no candidate left."""

    def __init__(self, at: Optional[Coord] = None):
        super().__init__(f"no candidate left at {at}" if at else "contradiction")
        self.at = at


class _Engine:
    """Mutable propagation state with an undo trail."""

    def __init__(self, spec: BoardSpec):
        n = self.n = spec.n
        self.spec = spec
        size = n * n
        step = [-1] * (4 * size)
        for y in range(n):
            for x in range(n):
                i = y * n + x
                if y + 1 < n:
                    step[4 * i] = i + n
                if y > 0:
                    step[4 * i + 1] = i - n
                if x > 0:
                    step[4 * i + 2] = i - 1
                if x + 1 < n:
                    step[4 * i + 3] = i + 1
        self.step = step
        self.mates: list[tuple[int, ...]] = [()] * size
        for box in spec.boxes:
            idx = [y * n + x for x, y in box]
            for i in idx:
                self.mates[i] = tuple(j for j in idx if j != i)
        self.val = [-1] * size
        self.preset = [False] * size
        for (x, y), v in spec.presets.items():
            i = y * n + x
            self.val[i] = _ROMA_VAL if v is ROMA else int(v)
            self.preset[i] = True
        # static_end: for a preset cell, where its preset-only chain stops
        self.static_end = [0] * size
        for i in range(size):
            if self.preset[i]:
                self.static_end[i] = self._walk_presets(i)
        self.cand = [0] * size
        self.trail: list[tuple[int, int, int]] = []
        self.queue: list[int] = []
        self.undecided = sum(1 for v in self.val if v < 0)

    def _walk_presets(self, i: int) -> int:
        seen = 0
        limit = len(self.val)
        while True:
            v = self.val[i]
            if v < 0:
                return i
            if v == _ROMA_VAL:
                return _TERM_ROMA
            i = self.step[4 * i + v]
            if i < 0:
                return _TERM_OFF
            if not self.preset[i] and self.val[i] < 0:
                return i
            seen += 1
            if seen > limit:
                return _TERM_CYCLE

    def follow(self, i: int) -> int:
        """Terminal of the fixed chain starting at cell ``i`` (``i`` itself if undecided)."""
        val, step, preset, static = self.val, self.step, self.preset, self.static_end
        guard = 0
        limit = len(val)
        while i >= 0:
            v = val[i]
            if v < 0:
                return i
            if preset[i]:
                i = static[i]
                continue
            if v == _ROMA_VAL:
                return _TERM_ROMA
            i = step[4 * i + v]
            guard += 1
            if guard > limit:
                return _TERM_CYCLE
        return i

    # -- trail-based mutation
    def _set_cand(self, i: int, m: int) -> None:
        self.trail.append((0, i, self.cand[i]))
        self.cand[i] = m

    def _set_val(self, i: int, v: int) -> None:
        self.trail.append((1, i, self.val[i]))
        self.val[i] = v
        self.undecided -= 1

    def mark(self) -> int:
        return len(self.trail)

    def undo(self, mark: int) -> None:
        trail = self.trail
        while len(trail) > mark:
            kind, i, old = trail.pop()
            if kind == 0:
                self.cand[i] = old
            else:
                self.val[i] = old
                self.undecided += 1
        self.queue.clear()

    # -- rules
    def init_candidates(self) -> bool:
        """Compute initial candidate sets; False if a preset already fails."""
        val, step = self.val, self.step
        for i in range(len(val)):
            if val[i] >= 0:
                t = self.static_end[i]
                if t in (_TERM_OFF, _TERM_CYCLE):
                    return False
                if val[i] < 4:
                    for j in self.mates[i]:
                        if val[j] == val[i]:
                            return False
        ok = True
        for i in range(len(val)):
            if val[i] >= 0:
                continue
            m = 0
            for d in range(4):
                t = step[4 * i + d]
                if t < 0:
                    continue
                if any(val[j] == d for j in self.mates[i]):
                    continue
                if self.follow(t) == i:
                    continue
                m |= 1 << d
            self.cand[i] = m
            if m == 0:
                ok = False
            elif _POP[m] == 1:
                self.queue.append(i)
        return ok

    def recheck_cycles(self, e: int) -> bool:
        """Drop candidates of undecided cell ``e`` that now close a cycle."""
        m = self.cand[e]
        new = m
        for d in _BITS[m]:
            if self.follow(self.step[4 * e + d]) == e:
                new &= ~(1 << d)
        if new != m:
            self._set_cand(e, new)
            if new == 0:
                return False
            if _POP[new] == 1:
                self.queue.append(e)
        return True

    def assign(self, i: int, d: int) -> bool:
        self._set_val(i, d)
        self._set_cand(i, 1 << d)
        bit = 1 << d
        for j in self.mates[i]:
            if self.val[j] < 0 and self.cand[j] & bit:
                m = self.cand[j] & ~bit
                self._set_cand(j, m)
                if m == 0:
                    return False
                if _POP[m] == 1:
                    self.queue.append(j)
        e = self.follow(self.step[4 * i + d])
        if e == _TERM_CYCLE or e == i:
            return False
        if e >= 0:
            return self.recheck_cycles(e)
        return True

    def propagate(self) -> bool:
        q = self.queue
        while q:
            i = q.pop()
            if self.val[i] >= 0:
                continue
            m = self.cand[i]
            if m == 0:
                return False
            if _POP[m] == 1 and not self.assign(i, _BITS[m][0]):
                q.clear()
                return False
        return True

    def pick(self) -> int:
        """Undecided cell with fewest candidates, ties broken in reading order."""
        n, val, cand = self.n, self.val, self.cand
        best, best_pop = -1, 5
        for y in range(n - 1, -1, -1):
            base = y * n
            for i in range(base, base + n):
                if val[i] < 0:
                    p = _POP[cand[i]]
                    if p < best_pop:
                        best, best_pop = i, p
                        if p <= 2:
                            return best
        return best

    def assignment(self) -> Assignment:
        n = self.n
        content: dict[Coord, CellContent] = {}
        for i, v in enumerate(self.val):
            content[(i % n, i // n)] = ROMA if v == _ROMA_VAL else Direction(v)
        return Assignment(content)

    def grid(self) -> CandidateGrid:
        n = self.n
        cand, fixed = {}, {}
        for i, v in enumerate(self.val):
            c = (i % n, i // n)
            if self.preset[i]:
                fixed[c] = ROMA if v == _ROMA_VAL else Direction(v)
            else:
                cand[c] = frozenset(Direction(d) for d in _BITS[self.cand[i]])
        return CandidateGrid(self.spec, cand, fixed)


def initial_candidates(spec: BoardSpec) -> CandidateGrid:
    eng = _Engine(spec)
    eng.init_candidates()
    return eng.grid()


def _load(spec: BoardSpec, g: CandidateGrid) -> _Engine:
    eng = _Engine(spec)
    n = spec.n
    for (x, y), s in g.cand.items():
        eng.cand[y * n + x] = sum(1 << int(d) for d in s)
    for i in range(n * n):
        if eng.val[i] < 0 and _POP[eng.cand[i]] <= 1:
            eng.queue.append(i)
    return eng


def propagate(spec: BoardSpec, g: CandidateGrid) -> CandidateGrid:
    """Fix singletons and re-eliminate until nothing changes.

    Raises :class:`Contradiction` when a cell runs out of candidates.
    """
    eng = _load(spec, g)
    # a loaded grid may predate some fixings: redo the cycle rule everywhere
    for i in range(spec.n * spec.n):
        if eng.val[i] < 0 and not eng.recheck_cycles(i):
            raise Contradiction((i % spec.n, i // spec.n))
    if not eng.propagate():
        raise Contradiction()
    return eng.grid()


def propagated_values(spec: BoardSpec) -> Optional[dict[Coord, Direction]]:
    """Cells fixed by propagation alone (None on contradiction)."""
    eng = _Engine(spec)
    if not eng.init_candidates() or not eng.propagate():
        return None
    n = spec.n
    return {
        (i % n, i // n): Direction(v)
        for i, v in enumerate(eng.val)
        if v >= 0 and not eng.preset[i] and v < 4
    }


def search(spec: BoardSpec, mode: Mode = Mode.COUNT, node_cap: Optional[int] = None) -> SolveResult:
    """Depth-first search with propagation at every node.

    ``nodes`` counts search-tree nodes, the root included.  Leaves are checked
    with :func:`is_valid` before they count.
    """
    eng = _Engine(spec)
    nodes = 0
    count = 0
    witness: Optional[Assignment] = None
    stop = {Mode.FIRST: 1, Mode.AT_MOST_TWO: 2, Mode.COUNT: None}[mode]

    class _Done(Exception):
        pass

    def leaf() -> None:
        nonlocal count, witness
        a = eng.assignment()
        if is_valid(spec, a):
            return
        count += 1
        if witness is None:
            witness = a
        if stop is not None and count >= stop:
            raise _Done

    def rec() -> None:
        nonlocal nodes
        nodes += 1
        if node_cap is not None and nodes > node_cap:
            raise ResourceCap(f"search exceeded {node_cap} nodes")
        if not eng.propagate():
            return
        if eng.undecided == 0:
            leaf()
            return
        i = eng.pick()
        for d in _BITS[eng.cand[i]]:
            mark = eng.mark()
            if eng.assign(i, d):
                rec()
            eng.undo(mark)

    try:
        if eng.init_candidates():
            rec()
        else:
            nodes = 1
    except _Done:
        pass
    status = Status.SAT if count else Status.UNSAT
    return SolveResult(status, witness, count if mode is not Mode.FIRST else (count or 0), nodes)


def iter_solutions(spec: BoardSpec, node_cap: Optional[int] = None) -> Iterator[Assignment]:
    """Every solution, lazily, in the order the search meets them."""
    eng = _Engine(spec)
    nodes = 0

    def rec() -> Iterator[Assignment]:
        nonlocal nodes
        nodes += 1
        if node_cap is not None and nodes > node_cap:
            raise ResourceCap(f"search exceeded {node_cap} nodes")
        if not eng.propagate():
            return
        if eng.undecided == 0:
            a = eng.assignment()
            if not is_valid(spec, a):
                yield a
            return
        i = eng.pick()
        for d in _BITS[eng.cand[i]]:
            mark = eng.mark()
            if eng.assign(i, d):
                yield from rec()
            eng.undo(mark)

    if eng.init_candidates():
        yield from rec()


class ResourceCap(RuntimeError):
    """A configured node or state limit was exceeded."""
