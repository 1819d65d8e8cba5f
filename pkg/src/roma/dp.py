"""Row-sweep dynamic program with box carries and river-basin brackets.

The sweep runs from the top board row downwards.  After a row has been
folded in, the *processed region* is that row and everything above it.  A
configuration records, for the sweep row:

* the cell contents,
* for each cell whose box continues straight down into the next row, the arrows the box
  still has available (types 1 and 2; type 3 means only the cell's own arrow
  is used, type 0 means the box ends here),
* for each cell, its *mouth*: the sweep-row column holding a down arrow
  through which its flow leaves the processed region, or ``ROMA`` when the
  flow ends at the Roma cell.

Up arrows and their mouths are what the bracket notation draws.  The
bracket string alone does not always identify the mouth map (``↓[↑]↓`` can
mean either neighbour), so configurations are keyed on contents, carries and
the mouth map; :attr:`RowConfiguration.brackets` renders the bracket string.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb
from typing import Iterator, Optional, Sequence

from .board import ROMA, Assignment, BoardSpec, CellContent, Direction
from .prop import ResourceCap, SolveResult, Status

ROMA_MOUTH = -1
_UP, _DOWN, _LEFT, _RIGHT, _ROMA = 0, 1, 2, 3, 4
_ALL = 0b1111


class DpMode(enum.Enum):
    DECIDE = "decide"
    COUNT = "count"


def _content(v: int) -> CellContent:
    return ROMA if v == _ROMA else Direction(v)


def _code(v: CellContent) -> int:
    return _ROMA if v is ROMA else int(v)


@dataclass(frozen=True)
class RowSymbol:
    base: CellContent
    carry: frozenset[Direction]
    type_tag: int

    def __str__(self) -> str:
        b = self.base.unicode if isinstance(self.base, Direction) else "◦"
        if not self.carry:
            return b
        if len(self.carry) == 1:
            return f"({b},{next(iter(self.carry)).unicode})"
        return "(" + b + ",{" + ",".join(d.unicode for d in sorted(self.carry)) + "})"


@dataclass(frozen=True)
class RowConfiguration:
    """One sweep-row configuration (see module docstring)."""

    row: int
    bases: tuple[int, ...]
    avail: tuple[int, ...]
    mouth: tuple[int, ...]
    tags: tuple[int, ...]
    roma_above: bool

    @property
    def key(self) -> tuple:
        return (self.bases, self.avail, self.mouth)

    @property
    def cells(self) -> tuple[RowSymbol, ...]:
        out = []
        for b, m, t in zip(self.bases, self.avail, self.tags):
            carry = frozenset(Direction(d) for d in range(4) if m >> d & 1) if t in (1, 2) else frozenset()
            out.append(RowSymbol(_content(b), carry, t))
        return tuple(out)

    def bracket_pairs(self) -> list[tuple[int, int]]:
        """(up column, mouth column) for every up arrow that returns to the sweep row."""
        return [
            (u, self.mouth[u])
            for u, b in enumerate(self.bases)
            if b == _UP and self.mouth[u] != ROMA_MOUTH
        ]

    @property
    def brackets(self) -> str:
        """Symbols interleaved with brackets."""
        n = len(self.bases)
        # gap g sits between cell g-1 and cell g
        gaps: list[list[tuple[int, int, str]]] = [[] for _ in range(n + 1)]
        for u, d in self.bracket_pairs():
            if d < u:
                lo, hi = d + 1, u + 1
            else:
                lo, hi = u, d
            # closings first, innermost first; then openings, outermost first
            gaps[lo].append((1, -(hi - lo), "["))
            gaps[hi].append((0, hi - lo, "]"))
        out = []
        cells = self.cells
        for g in range(n + 1):
            out.extend(ch for _, _, ch in sorted(gaps[g]))
            if g < n:
                out.append(str(cells[g]))
        return "".join(out)

    def __str__(self) -> str:
        return self.brackets


def row_content(cfg: RowConfiguration) -> tuple[CellContent, ...]:
    """The morphism h: drop brackets and carries."""
    return tuple(_content(b) for b in cfg.bases)


class _Rows:
    """Per-board box geometry in sweep order (sweep row i is board row n-1-i)."""

    def __init__(self, spec: BoardSpec):
        n = self.n = spec.n
        self.spec = spec
        self.box = [[spec.box_of[(x, n - 1 - i)] for x in range(n)] for i in range(n)]
        # continues[i][x]: the cell below (x, row i) lies in the same box.  A
        # connected box that reaches row i+1 always has such a cell, so the
        # carry reaches the next row; other cells show a plain symbol.
        self.continues = [
            [i + 1 < n and self.box[i][x] == self.box[i + 1][x] for x in range(n)] for i in range(n)
        ]
        self.preset = [[spec.presets.get((x, n - 1 - i)) for x in range(n)] for i in range(n)]
        self.roma_row = n - 1 - spec.roma[1] if spec.roma else -1

    def tags(self, i: int, avail: Sequence[int]) -> tuple[int, ...]:
        out = []
        for x in range(self.n):
            if not self.continues[i][x]:
                out.append(0)
            else:
                out.append(bin(avail[x]).count("1"))
        return tuple(out)


def _fillings(rows: _Rows, i: int, prev: Optional[RowConfiguration]) -> Iterator[list[int]]:
    """Row contents for sweep row i honouring presets, walls and box carries."""
    n = rows.n
    box = rows.box[i]
    first, last = i == 0, i == n - 1
    allowed_in: dict[int, int] = {}
    if prev is not None:
        for x in range(n):
            b = rows.box[i - 1][x]
            if rows.continues[i - 1][x]:
                allowed_in[b] = prev.avail[x]
    opts: list[list[int]] = []
    for x in range(n):
        p = rows.preset[i][x]
        cand = []
        for d in ([_code(p)] if p is not None else range(4)):
            if d == _ROMA:
                cand.append(d)
                continue
            if d == _UP and first or d == _DOWN and last:
                continue
            if d == _LEFT and x == 0 or d == _RIGHT and x == n - 1:
                continue
            cand.append(d)
        opts.append(cand)
    row = [0] * n
    used: dict[int, int] = {}

    def rec(x: int) -> Iterator[list[int]]:
        if x == n:
            yield list(row)
            return
        b = box[x]
        mask = used.get(b, 0)
        allow = allowed_in.get(b, _ALL)
        for v in opts[x]:
            if v < 4:
                bit = 1 << v
                if mask & bit or not allow & bit:
                    continue
                used[b] = mask | bit
            row[x] = v
            yield from rec(x + 1)
            used[b] = mask

    yield from rec(0)


def _fold(rows: _Rows, i: int, prev: Optional[RowConfiguration], row: Sequence[int]) -> Optional[RowConfiguration]:
    """Successor configuration for sweep row i filled with ``row``, or None."""
    n = rows.n
    # functional graph on the new row: node x -> node, or a terminal
    EXIT, TR = -2, ROMA_MOUTH
    nxt = [0] * n
    for x, v in enumerate(row):
        if v == _ROMA:
            nxt[x] = TR
        elif v == _DOWN:
            nxt[x] = EXIT
        elif v == _LEFT:
            nxt[x] = x - 1
        elif v == _RIGHT:
            nxt[x] = x + 1
        else:
            if prev is None:
                return None
            m = prev.mouth[x]
            nxt[x] = TR if m == ROMA_MOUTH else m
    mouth = [0] * n
    state = [0] * n  # 0 unseen, 1 on stack, 2 done
    for s in range(n):
        if state[s]:
            continue
        path = []
        x = s
        while x >= 0 and state[x] == 0:
            state[x] = 1
            path.append(x)
            x = nxt[x]
        if x >= 0 and state[x] == 1:
            return None  # cycle
        if x >= 0:
            end = mouth[x]
        elif x == EXIT:
            end = path[-1]
        else:
            end = ROMA_MOUTH
        for p in path:
            mouth[p] = end
            state[p] = 2
    # carries: arrows still available to boxes continuing into row i+1
    used: dict[int, int] = {}
    if prev is not None:
        for x in range(n):
            if rows.continues[i - 1][x]:
                used[rows.box[i - 1][x]] = _ALL & ~prev.avail[x]
    box = rows.box[i]
    for x, v in enumerate(row):
        if v < 4:
            used[box[x]] = used.get(box[x], 0) | 1 << v
    avail = []
    for x in range(n):
        if i + 1 < n and rows.continues[i][x]:
            avail.append(_ALL & ~used.get(box[x], 0))
        else:
            avail.append(0)
    roma_above = rows.roma_row != -1 and i >= rows.roma_row
    return RowConfiguration(i, tuple(row), tuple(avail), tuple(mouth), rows.tags(i, avail), roma_above)


def enumerate_successors(
    spec: BoardSpec, row_index: int, cfg: Optional[RowConfiguration], next_content: Sequence[CellContent]
) -> set[RowConfiguration]:
    """Successors of ``cfg`` (sweep row ``row_index``) when sweep row ``row_index + 1`` holds ``next_content``.

    Sweep row ``i`` is board row ``n - 1 - i``.  Pass ``cfg=None`` and
    ``row_index=-1`` to seed the top row.  The result has at most one element.
    """
    rows = _Rows(spec)
    i = row_index + 1
    row = [_code(v) for v in next_content]
    ok = {tuple(r) for r in _fillings(rows, i, cfg)}
    if tuple(row) not in ok:
        return set()
    out = _fold(rows, i, cfg, row)
    return {out} if out is not None else set()


def dp_run(spec: BoardSpec, mode: DpMode = DpMode.COUNT, max_configs: Optional[int] = None) -> SolveResult:
    """Decide or count by folding every row filling into the stored configurations.

    ``row_configs`` in the result lists how many distinct configurations were
    stored after each sweep row.
    """
    rows = _Rows(spec)
    n = spec.n
    table: dict[tuple, tuple[RowConfiguration, int]] = {}
    for row in _fillings(rows, 0, None):
        cfg = _fold(rows, 0, None, row)
        if cfg is not None:
            _, c = table.get(cfg.key, (cfg, 0))
            table[cfg.key] = (cfg, c + 1)
    sizes = [len(table)]
    for i in range(1, n):
        new: dict[tuple, tuple[RowConfiguration, int]] = {}
        for cfg, mult in table.values():
            for row in _fillings(rows, i, cfg):
                nxt = _fold(rows, i, cfg, row)
                if nxt is None:
                    continue
                _, c = new.get(nxt.key, (nxt, 0))
                new[nxt.key] = (nxt, c + mult)
                if max_configs is not None and len(new) > max_configs:
                    raise ResourceCap(f"more than {max_configs} configurations in sweep row {i}")
        if mode is DpMode.DECIDE:
            new = {k: (cfg, 1) for k, (cfg, _) in new.items()}
        table = new
        sizes.append(len(table))
    total = sum(c for _, c in table.values())
    status = Status.SAT if total else Status.UNSAT
    count = total if mode is DpMode.COUNT else None
    return SolveResult(status, None, count, sum(sizes), tuple(sizes))


def dp_solve(spec: BoardSpec, max_configs: Optional[int] = None) -> SolveResult:
    """One solution by self-reduction: fix the empty cells in reading order,
    keeping the first arrow after which the decision sweep still succeeds."""
    first = dp_run(spec, DpMode.DECIDE, max_configs)
    if first.status is Status.UNSAT:
        return first
    configs = first.nodes
    cur = spec
    for c in spec.empty_cells:
        for d in Direction:
            trial = cur.with_presets({c: d})
            r = dp_run(trial, DpMode.DECIDE, max_configs)
            configs += r.nodes
            if r.status is Status.SAT:
                cur = trial
                break
        else:
            raise AssertionError(f"no arrow at {c} extends the partial solution")
    witness = Assignment.complete(spec, {c: cur.presets[c] for c in spec.empty_cells})
    return SolveResult(Status.SAT, witness, None, configs, first.row_configs)


def catalan_count(p: int) -> int:
    if not 0 <= p <= 30:
        raise ValueError("p must lie in [0, 30]")
    return comb(2 * p, p) // (p + 1)


def bracket_skeletons(p: int) -> Iterator[str]:
    """All balanced bracket strings with p pairs, in lexicographic order."""

    def rec(prefix: str, opened: int, closed: int) -> Iterator[str]:
        if closed == p:
            yield prefix
            return
        if opened < p:
            yield from rec(prefix + "[", opened + 1, closed)
        if closed < opened:
            yield from rec(prefix + "]", opened, closed + 1)

    yield from rec("", 0, 0)


def is_balanced(s: str) -> bool:
    depth = 0
    for ch in s:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
            if depth < 0:
                return False
    return depth == 0
