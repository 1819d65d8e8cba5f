"""Line arrangements: variable copies on a horizontal spine, arcs above and below.

An arrangement is the combinatorial skeleton of a compiled board.  Spine
items are variable gadgets in core-line order.  Each arc lives on one page
(above or below the spine) and touches a list of items: a *clause arc*
carries one literal per item, a *wire* joins two copies of one variable.
Arcs on a page must not cross, which makes every page a laminar family and
lets arcs nest like brackets.

Three builders exist.  :func:`direct_arrangement` keeps one item per variable
and two-colours the clause crossing graph; it succeeds for formulas whose
incidence structure already fits on two pages.  :func:`copy_arrangement`
:func:`block_arrangement` adds one crossover block and up to two extra
variable copies joined by wires, for small formulas that need a crossing.
:func:`stack_arrangement`
always succeeds: it follows the rectilinear layout, treats the open variable
wires above the spine as a stack, and resolves every layout crossing with one
crossover block.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cmp_to_key
from itertools import permutations, product
from typing import Iterable, Optional, Sequence

from .cnf import Cnf

ABOVE, BELOW = 0, 1

# The crossover formula over a1, b1, a2, b2, alpha, beta, gamma, delta, xi.
CROSSOVER_VARS = ("a1", "gamma", "b1", "beta", "xi", "delta", "b2", "alpha", "a2")
CROSSOVER_CLAUSES: tuple[tuple[tuple[str, bool], ...], ...] = (
    (("a1", False), ("gamma", False)),
    (("a1", True), ("b1", True), ("gamma", True)),
    (("b2", True), ("delta", False)),
    (("b2", True), ("alpha", False)),
    (("delta", False), ("alpha", False)),
    (("alpha", True), ("beta", True), ("xi", True)),
    (("alpha", False), ("beta", False)),
    (("a2", True), ("beta", False)),
    (("a2", False), ("b1", True), ("beta", True)),
    (("a2", True), ("alpha", False)),
    (("a2", False), ("b2", False), ("alpha", True)),
    (("b1", False), ("beta", False)),
    (("b1", False), ("gamma", False)),
    (("beta", False), ("gamma", False)),
    (("gamma", True), ("delta", True), ("xi", False)),
    (("gamma", False), ("delta", False)),
    (("a1", False), ("delta", False)),
    (("a1", True), ("b2", False), ("delta", True)),
)
# Clauses 1-9 of the block run above the spine, 10-18 below.
CROSSOVER_PAGES = (ABOVE,) * 9 + (BELOW,) * 9
CROSSOVER_AUX = ("alpha", "beta", "gamma", "delta", "xi")


@dataclass(frozen=True)
class Arc:
    page: int
    legs: tuple[tuple[int, Optional[bool]], ...]  # (item, polarity); polarity is None on wires
    clause: Optional[int] = None  # index into Arrangement.cnf.clauses, None for wires

    @property
    def is_wire(self) -> bool:
        return self.clause is None

    @property
    def items(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.legs)


@dataclass(frozen=True)
class Arrangement:
    items: tuple[int, ...]  # variable carried by each spine item, left to right
    arcs: tuple[Arc, ...]
    cnf: Cnf  # the realized formula (source variables first, then auxiliaries)
    primary: dict[int, int] = field(default_factory=dict)  # source variable -> its decision item
    crossovers: int = 0


def _within(e: Sequence[int], f: Sequence[int]) -> bool:
    """All positions of e lie in one closed gap of f (between two legs, or outside)."""
    if all(p <= f[0] for p in e) or all(p >= f[-1] for p in e):
        return True
    return any(all(a <= p <= b for p in e) for a, b in zip(f, f[1:]))


def _in_segment(e: Sequence[int], f: Sequence[int]) -> bool:
    return any(all(a <= p <= b for p in e) for a, b in zip(f, f[1:]))


def crosses(e: Sequence[int], f: Sequence[int]) -> bool:
    """Whether two arcs on the same page must cross (positions sorted)."""
    return not (_within(e, f) or _within(f, e))


def inside(arcs: Sequence[Arc], i: int, j: int) -> bool:
    """Arc i nests under arc j (same page, non-crossing)."""
    if i == j or arcs[i].page != arcs[j].page:
        return False
    e, f = arcs[i].items, arcs[j].items
    a, b = _in_segment(e, f), _in_segment(f, e)
    if a and b:
        return i < j
    return a


def port_order(arcs: Sequence[Arc], item: int, page: int) -> list[int]:
    """Arcs meeting ``item`` on ``page`` in left-to-right port order.

    Arcs ending at the item come first (innermost first), then single-leg
    arcs, then an arc passing through it, then arcs starting there (outermost
    first).
    """
    here = [k for k, a in enumerate(arcs) if a.page == page and item in a.items]

    def group(k: int) -> int:
        its = arcs[k].items
        if len(its) == 1:
            return 1
        if its[-1] == item:
            return 0
        if its[0] == item:
            return 3
        return 2

    def cmp(i: int, j: int) -> int:
        gi, gj = group(i), group(j)
        if gi != gj:
            return gi - gj
        if gi == 0:
            return -1 if inside(arcs, i, j) else 1
        if gi == 3:
            return 1 if inside(arcs, i, j) else -1
        if gi == 1:
            return i - j
        raise AssertionError("two arcs pass through one item on one page")

    return sorted(here, key=cmp_to_key(cmp))


def check(arr: Arrangement) -> None:
    """Raise AssertionError unless every page is crossing-free and legs are distinct."""
    for a in arr.arcs:
        its = a.items
        if list(its) != sorted(set(its)):
            raise AssertionError(f"arc {a} has repeated or unsorted legs")
        if a.is_wire and (len(its) != 2 or arr.items[its[0]] != arr.items[its[1]]):
            raise AssertionError(f"wire {a} does not join two copies of one variable")
    for i, a in enumerate(arr.arcs):
        for j in range(i + 1, len(arr.arcs)):
            b = arr.arcs[j]
            if a.page == b.page and crosses(a.items, b.items):
                raise AssertionError(f"arcs {i} and {j} cross")


def _two_colour(n: int, edges: Iterable[tuple[int, int]],
                fixed: Optional[dict[int, int]] = None) -> Optional[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    fixed = fixed or {}
    colour = [-1] * n
    # components holding a fixed node start from it
    for s in list(fixed) + list(range(n)):
        if colour[s] >= 0:
            continue
        colour[s] = fixed.get(s, ABOVE)
        todo = [s]
        while todo:
            u = todo.pop()
            for v in adj[u]:
                if colour[v] < 0:
                    colour[v] = 1 - colour[u]
                    if fixed.get(v, colour[v]) != colour[v]:
                        return None
                    todo.append(v)
                elif colour[v] == colour[u]:
                    return None
    return colour


def _orders(n: int, tries: int, seed: int) -> Iterable[tuple[int, ...]]:
    base = tuple(range(1, n + 1))
    if n <= 6:
        yield from permutations(base)
        return
    yield base
    rng = random.Random(seed)
    for _ in range(tries):
        p = list(base)
        rng.shuffle(p)
        yield tuple(p)


def direct_arrangement(cnf: Cnf, tries: int = 200, seed: int = 0) -> Optional[Arrangement]:
    """One item per variable with clause arcs two-coloured onto the pages, or None.

    The formula must be normalized (no repeated variable inside a clause).
    Variable orders are tried exhaustively up to six variables, otherwise the
    identity and ``tries`` seeded shuffles.
    """
    for order in _orders(cnf.num_vars, tries, seed):
        pos = {v: i for i, v in enumerate(order)}
        legs = [tuple(sorted((pos[v], p) for v, p in cl)) for cl in cnf.clauses]
        spans = [tuple(p for p, _ in lg) for lg in legs]
        edges = [(i, j) for i in range(len(spans)) for j in range(i + 1, len(spans))
                 if crosses(spans[i], spans[j])]
        colour = _two_colour(len(spans), edges)
        if colour is None:
            continue
        arcs = tuple(Arc(colour[k], legs[k], k) for k in range(len(legs)))
        return Arrangement(order, arcs, cnf, {v: pos[v] for v in order})
    return None


def _spines(order: tuple[int, ...], copies: int) -> Iterable[tuple[int, ...]]:
    """``order`` with ``copies`` extra items, each a later copy of some variable."""
    if copies == 0:
        yield order
        return
    for spine in _spines(order, copies - 1):
        first = {}
        for i, v in enumerate(spine):
            first.setdefault(v, i)
        for v in order:
            for at in range(first[v] + 1, len(spine) + 1):
                yield spine[:at] + (v,) + spine[at:]


def _block_spines(n: int, copies: int) -> Iterable[tuple]:
    """Spines of variable tokens with one crossover token ``("X", w, v)``.

    Both crossing variables need an item left of the block to feed it.
    """
    for order in permutations(range(1, n + 1)):
        for spine in _spines(order, copies):
            for at in range(2, len(spine) + 1):
                seen = set(spine[:at])
                for w in sorted(seen):
                    for v in sorted(seen - {w}):
                        yield spine[:at] + (("X", w, v),) + spine[at:]


def block_arrangement(cnf: Cnf, max_copies: int = 2, max_vars: int = 4) -> Optional[Arrangement]:
    """A spine with one crossover block, or None.

    The block swaps the wires of two variables: both arrive on the lower page,
    one leaves on the upper page and the other on the lower page, exactly as
    in :func:`stack_arrangement`.  Every other arc is two-coloured as in
    :func:`copy_arrangement`.  The search is exhaustive and only runs on
    formulas with at most ``max_vars`` variables.
    """
    n = cnf.num_vars
    if not 2 <= n <= max_vars:
        return None
    for copies in range(max_copies + 1):
        for spine in _block_spines(n, copies):
            arr = _block_arrangement(cnf, spine)
            if arr is not None:
                return arr
    return None


def _block_arrangement(cnf: Cnf, spine: tuple) -> Optional[Arrangement]:
    n = cnf.num_vars
    items: list[int] = []
    regular: dict[int, list[int]] = {}
    wires: list[tuple[tuple[int, int], Optional[int]]] = []  # (ends, forced page)
    fixed_arcs: list[Arc] = []
    clauses = list(cnf.clauses)
    tail: dict[int, tuple[int, Optional[int]]] = {}  # var -> (last item, page of its next wire)
    num_vars = n
    for tok in spine:
        if isinstance(tok, int):
            it = len(items)
            items.append(tok)
            regular.setdefault(tok, []).append(it)
            if tok in tail:
                last, page = tail[tok]
                wires.append(((last, it), page))
            tail[tok] = (it, None)
            continue
        _, w, v = tok
        aux = {name: num_vars + k + 1 for k, name in enumerate(CROSSOVER_AUX)}
        num_vars += len(CROSSOVER_AUX)
        carried = {"a1": w, "a2": w, "b1": v, "b2": v, **aux}
        block = {}
        for name in CROSSOVER_VARS:
            block[name] = len(items)
            items.append(carried[name])
        for var, into, out, page in ((w, "a1", "a2", BELOW), (v, "b2", "b1", ABOVE)):
            last, forced = tail[var]
            if forced is not None and forced != BELOW:
                return None
            wires.append(((last, block[into]), BELOW))
            tail[var] = (block[out], page)
        for cl_x, page in zip(CROSSOVER_CLAUSES, CROSSOVER_PAGES):
            legs = tuple(sorted((block[name], pol) for name, pol in cl_x))
            fixed_arcs.append(Arc(page, legs, len(clauses)))
            clauses.append(tuple((carried[name], pol) for name, pol in cl_x))
    spans_fixed = [a.items for a in fixed_arcs]
    wire_spans = [tuple(sorted(ends)) for ends, _ in wires]
    options = [[tuple(sorted(zip(pick, (p for _, p in cl))))
                for pick in product(*(regular[v] for v, _ in cl))] for cl in cnf.clauses]
    nf, nw = len(fixed_arcs), len(wires)
    fixed = {k: a.page for k, a in enumerate(fixed_arcs)}
    fixed.update({nf + k: page for k, (_, page) in enumerate(wires) if page is not None})
    base = spans_fixed + wire_spans
    base_edges = [(i, j) for i in range(len(base)) for j in range(i + 1, len(base)) if crosses(base[i], base[j])]
    if _two_colour(len(base), base_edges, fixed) is None:
        return None
    for legs in product(*options):
        spans = base + [tuple(i for i, _ in lg) for lg in legs]
        edges = base_edges + [(i, j) for j in range(len(base), len(spans)) for i in range(j)
                              if crosses(spans[i], spans[j])]
        colour = _two_colour(len(spans), edges, fixed)
        if colour is None:
            continue
        arcs = list(fixed_arcs)
        arcs += [Arc(colour[nf + k], ((a, None), (b, None))) for k, (a, b) in enumerate(wire_spans)]
        arcs += [Arc(colour[nf + nw + k], lg, k) for k, lg in enumerate(legs)]
        primary = {v: its[0] for v, its in regular.items()}
        return Arrangement(tuple(items), tuple(arcs), Cnf(num_vars, tuple(clauses)), primary, 1)
    return None


def stack_arrangement(cnf: Cnf) -> Arrangement:
    """The rectilinear layout realized on the spine, one crossover block per crossing.

    Variables enter the spine in the order n, ..., 1 and push their wires
    above it, so the lowest-numbered open variable is on top.  Clauses are
    processed in order; a clause collects one wire per literal below the
    spine (its legs, taken in increasing variable order) and closes with one
    terminal item per literal under a clause arc above.  Fetching the leg of
    variable w moves every open wire above w's to the lower page and swaps
    each back through a crossover block; those are exactly the crossings of
    :func:`roma.sat2roma.layout.layout`.
    """
    n = cnf.num_vars
    items: list[int] = []
    arcs: list[Arc] = []
    clauses = list(cnf.clauses)
    num_vars = n
    last = {v: 0 for v in range(1, n + 1)}
    for j, cl in enumerate(cnf.clauses, 1):
        for v, _ in cl:
            last[v] = j
    # open wires: [variable, start item]
    stacks: list[list[list[int]]] = [[], []]

    def new_item(var: int) -> int:
        items.append(var)
        return len(items) - 1

    def push(page: int, var: int, item: int) -> None:
        stacks[page].append([var, item])

    def pop(page: int, item: int) -> int:
        var, start = stacks[page].pop()
        arcs.append(Arc(page, ((start, None), (item, None))))
        return var

    primary = {}
    for v in range(n, 0, -1):
        it = new_item(v)
        primary[v] = it
        if last[v]:
            push(ABOVE, v, it)
    crossovers = 0
    for j, cl in enumerate(cnf.clauses, 1):
        for w, _ in sorted(cl):
            idx = next(k for k, (var, _) in enumerate(stacks[ABOVE]) if var == w)
            over = stacks[ABOVE][idx + 1:]
            for var, _ in reversed(over):
                it = new_item(var)
                pop(ABOVE, it)
                push(BELOW, var, it)
            it = new_item(w)
            pop(ABOVE, it)
            if last[w] > j:
                push(ABOVE, w, it)
            push(BELOW, w, it)
            for var, _ in over:
                crossovers += 1
                aux = {name: num_vars + k + 1 for k, name in enumerate(CROSSOVER_AUX)}
                num_vars += len(CROSSOVER_AUX)
                carried = {"a1": w, "a2": w, "b1": var, "b2": var, **aux}
                block = {name: new_item(carried[name]) for name in CROSSOVER_VARS}
                pop(BELOW, block["a1"])
                push(ABOVE, var, block["b1"])
                pop(BELOW, block["b2"])
                push(BELOW, w, block["a2"])
                for cl_x, page in zip(CROSSOVER_CLAUSES, CROSSOVER_PAGES):
                    legs = tuple(sorted((block[name], pol) for name, pol in cl_x))
                    arcs.append(Arc(page, legs, len(clauses)))
                    clauses.append(tuple((carried[name], pol) for name, pol in cl_x))
        legs = []
        pol = dict(cl)
        for _ in cl:
            var = stacks[BELOW][-1][0]
            it = new_item(var)
            pop(BELOW, it)
            legs.append((it, pol[var]))
        arcs.append(Arc(ABOVE, tuple(legs), j - 1))
    assert not stacks[ABOVE] and not stacks[BELOW]
    return Arrangement(tuple(items), tuple(arcs), Cnf(num_vars, tuple(clauses)), primary, crossovers)
