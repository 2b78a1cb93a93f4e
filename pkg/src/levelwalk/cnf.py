"""DIMACS CNF ingestion and the induced backtracking-tree instance.

The instance for a formula assigns variables in a fixed order along the tree:
depth j branches on the j-th variable (bit 0 = false, 1 = true). An address
is a member iff the partial assignment it encodes falsifies no clause, i.e.
iff a backtracking search would still visit it. That predicate is prefix-
closed by construction: extending an assignment can only falsify more.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Optional, Sequence, Union

from .errors import DimacsParseError
from .trees import NodeAddr, SuccinctTree, _memoized


@dataclass(frozen=True)
class Cnf:
    """A CNF formula: variables 1..num_vars, clauses as signed literal lists."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise ValueError("a formula needs at least one variable")
        for c in self.clauses:
            if not c:
                raise ValueError("empty clause (would exclude the root)")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range 1..{self.num_vars}")


def parse_dimacs(text: Union[str, IO[str]]) -> Cnf:
    """Parse standard DIMACS CNF: 'c' comments, 'p cnf V C' header,
    0-terminated clauses. The clause count must match the header."""
    if hasattr(text, "read"):
        text = text.read()
    num_vars: Optional[int] = None
    num_clauses: Optional[int] = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    current_start_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if num_vars is not None:
                raise DimacsParseError("duplicate problem header", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsParseError(f"malformed header {line!r}", lineno)
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsParseError(f"non-integer header fields {line!r}", lineno)
            if num_vars < 1 or num_clauses < 0:
                raise DimacsParseError("header counts out of range", lineno)
            continue
        if num_vars is None:
            raise DimacsParseError("clause before problem header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsParseError(f"non-integer token {tok!r}", lineno)
            if lit == 0:
                if not current:
                    raise DimacsParseError("empty clause", lineno)
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > num_vars:
                    raise DimacsParseError(
                        f"literal {lit} out of range 1..{num_vars}", lineno
                    )
                if not current:
                    current_start_line = lineno
                current.append(lit)
    last_line = text.count("\n") + 1
    if current:
        raise DimacsParseError("unterminated clause", current_start_line)
    if num_vars is None:
        raise DimacsParseError("missing problem header", last_line)
    if len(clauses) != num_clauses:
        raise DimacsParseError(
            f"header promised {num_clauses} clauses, found {len(clauses)}", last_line
        )
    return Cnf(num_vars, tuple(clauses))


def render_dimacs(cnf: Cnf) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in cnf.clauses]
    return "\n".join(lines) + "\n"


def cnf_tree(
    cnf: Cnf, order: Optional[Sequence[int]] = None, label: str = ""
) -> SuccinctTree:
    """Backtracking-tree instance of a formula under a variable order.

    Depth j branches on ``order[j]`` (default: identity order). An address is
    a member iff no clause has every literal assigned and false under the
    partial assignment it encodes.
    """
    if order is None:
        order = tuple(range(1, cnf.num_vars + 1))
    else:
        order = tuple(order)
        if sorted(order) != list(range(1, cnf.num_vars + 1)):
            raise ValueError("order must be a permutation of 1..num_vars")
    position = {v: j for j, v in enumerate(order)}

    def member(a: NodeAddr) -> bool:
        d = len(a)
        for clause in cnf.clauses:
            falsified = True
            for lit in clause:
                j = position[abs(lit)]
                if j >= d:  # variable unassigned: clause not yet falsified
                    falsified = False
                    break
                value = a[j] == "1"
                if value == (lit > 0):  # literal satisfied
                    falsified = False
                    break
            if falsified:
                return False
        return True

    return SuccinctTree(cnf.num_vars, _memoized(member), label or "cnf:<inline>")
