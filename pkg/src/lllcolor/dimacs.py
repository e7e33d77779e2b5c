"""DIMACS CNF parsing and clause-violation systems for the engine."""

from __future__ import annotations

from fractions import Fraction

from .engine import Event, EventSystem, VariableSpace


def parse_dimacs(text: str) -> tuple[int, list[tuple[int, ...]]]:
    """Parse CNF text into (variable count, clauses of signed 1-based literals)."""
    n_vars = declared_clauses = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: bad problem line {line!r}")
            n_vars, declared_clauses = int(parts[2]), int(parts[3])
            continue
        if n_vars is None:
            raise ValueError(f"line {lineno}: clause before the problem line")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                if not current:
                    raise ValueError(f"line {lineno}: empty clause")
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > n_vars:
                    raise ValueError(f"line {lineno}: literal {lit} exceeds {n_vars} variables")
                current.append(lit)
    if current:
        clauses.append(tuple(current))
    if n_vars is None:
        raise ValueError("missing 'p cnf' problem line")
    if declared_clauses is not None and declared_clauses != len(clauses):
        raise ValueError(f"problem line declares {declared_clauses} clauses, found {len(clauses)}")
    return n_vars, clauses


def read_dimacs(path) -> tuple[int, list[tuple[int, ...]]]:
    with open(path) as fh:
        return parse_dimacs(fh.read())


def _violation_probability(clause: tuple[int, ...]) -> Fraction:
    # a clause is violated iff every literal is false; a variable carrying
    # both signs makes that impossible
    wants: dict[int, int] = {}
    for lit in clause:
        var, falsifying = abs(lit) - 1, 0 if lit > 0 else 1
        if wants.setdefault(var, falsifying) != falsifying:
            return Fraction(0)
    return Fraction(1, 2 ** len(wants))


def clause_system(n_vars: int, clauses: list[tuple[int, ...]]) -> EventSystem:
    """Event system whose j-th event is 'clause j is violated' over uniform booleans."""
    space = VariableSpace.booleans(n_vars)
    events = []
    for j, clause in enumerate(clauses):
        scope = tuple(sorted({abs(lit) - 1 for lit in clause}))
        pos = {var: i for i, var in enumerate(scope)}
        checks = tuple((pos[abs(lit) - 1], 1 if lit > 0 else 0) for lit in clause)

        def violated(values, _checks=checks):
            return all(values[i] != satisfying for i, satisfying in _checks)

        events.append(Event(j, scope, violated, name=f"clause{j}"))
    p = max((_violation_probability(c) for c in clauses), default=Fraction(0))
    return EventSystem(space, events, p=float(p))


def clause_satisfied(clause: tuple[int, ...], values) -> bool:
    return any((values[abs(lit) - 1] == 1) == (lit > 0) for lit in clause)


def formula_satisfied(clauses: list[tuple[int, ...]], values) -> bool:
    """Independent satisfaction check, bypassing the event predicates."""
    return all(clause_satisfied(c, values) for c in clauses)
