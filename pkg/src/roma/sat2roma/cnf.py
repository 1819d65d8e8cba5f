"""3-CNF formulas: the data type, DIMACS input/output and brute-force model counting."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

Literal = tuple[int, bool]  # (variable, polarity); polarity True means the positive literal


class CnfError(ValueError):
    """Malformed DIMACS text or a clause outside the 1-3 literal range."""


@dataclass(frozen=True)
class Cnf:
    num_vars: int
    clauses: tuple[tuple[Literal, ...], ...]

    def __post_init__(self) -> None:
        if self.num_vars < 0:
            raise CnfError("num_vars must be non-negative")
        fixed = []
        for i, cl in enumerate(self.clauses):
            cl = tuple((int(v), bool(p)) for v, p in cl)
            if not 1 <= len(cl) <= 3:
                raise CnfError(f"clause {i + 1} has {len(cl)} literals; expected 1-3")
            for v, _ in cl:
                if not 1 <= v <= self.num_vars:
                    raise CnfError(f"clause {i + 1} mentions variable {v} outside 1..{self.num_vars}")
            fixed.append(cl)
        object.__setattr__(self, "clauses", tuple(fixed))

    @classmethod
    def of(cls, num_vars: int, clauses: Sequence[Sequence[int]]) -> "Cnf":
        """Build from signed integers, DIMACS style: ``Cnf.of(2, [[1, -2]])``."""
        return cls(num_vars, tuple(tuple((abs(x), x > 0) for x in cl) for cl in clauses))

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        """``assignment[v - 1]`` is the value of variable v."""
        return all(any(assignment[v - 1] == p for v, p in cl) for cl in self.clauses)

    def models(self) -> Iterator[tuple[bool, ...]]:
        for bits in product((False, True), repeat=self.num_vars):
            if self.satisfied_by(bits):
                yield bits

    def count_models(self) -> int:
        return sum(1 for _ in self.models())

    def normalized(self) -> "Cnf":
        """Drop repeated literals and tautological clauses; the model set is unchanged."""
        out = []
        for cl in self.clauses:
            seen: dict[int, bool] = {}
            taut = False
            lits = []
            for v, p in cl:
                if v in seen:
                    if seen[v] != p:
                        taut = True
                    continue
                seen[v] = p
                lits.append((v, p))
            if not taut:
                out.append(tuple(lits))
        return Cnf(self.num_vars, tuple(out))


def parse_dimacs(text: str) -> Cnf:
    """Parse DIMACS CNF; comment lines start with ``c`` and ``%`` ends the input."""
    header = None
    tokens: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise CnfError(f"line {lineno}: second problem line")
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {lineno}: expected 'p cnf VARS CLAUSES'")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise CnfError(f"line {lineno}: counts must be integers") from None
            continue
        if header is None:
            raise CnfError(f"line {lineno}: clause before the problem line")
        for tok in line.split():
            try:
                tokens.append(int(tok))
            except ValueError:
                raise CnfError(f"line {lineno}: bad literal {tok!r}") from None
    if header is None:
        raise CnfError("missing problem line")
    clauses: list[list[int]] = []
    cur: list[int] = []
    for t in tokens:
        if t == 0:
            if not cur:
                raise CnfError("empty clause")
            clauses.append(cur)
            cur = []
        else:
            cur.append(t)
    if cur:
        raise CnfError("last clause is not terminated by 0")
    nv, nc = header
    if len(clauses) != nc:
        raise CnfError(f"problem line announces {nc} clauses, found {len(clauses)}")
    return Cnf.of(nv, clauses)


def to_dimacs(cnf: Cnf) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    for cl in cnf.clauses:
        lines.append(" ".join(str(v if p else -v) for v, p in cl) + " 0")
    return "\n".join(lines) + "\n"
