"""Shared builders: small event systems, graphs, brute-force cycle oracle."""

from __future__ import annotations

import random

import pytest

from lllcolor.engine import Event, EventSystem, VariableSpace
from lllcolor.graphs import Graph


def chain_3sat(n_clauses: int, rng: random.Random) -> tuple[int, list[tuple[int, ...]]]:
    """3-SAT chain: clause i reads variables 2i, 2i+1, 2i+2 (0-based), so it
    shares one variable with each of its at most two neighbours and the
    dependency neighbourhood size is at most 3; every clause is violated
    with probability 1/8 under fresh uniform bits."""
    clauses = []
    for i in range(n_clauses):
        clause = tuple((v + 1) * (1 if rng.random() < 0.5 else -1) for v in (2 * i, 2 * i + 1, 2 * i + 2))
        clauses.append(clause)
    return 2 * n_clauses + 1, clauses


def single_event_system(prob_num: int = 1, prob_den: int = 2) -> EventSystem:
    """One event over one uniform variable on {0..den-1}: value < num."""
    space = VariableSpace([range(prob_den)])
    event = Event(0, (0,), lambda vals: vals[0] < prob_num)
    return EventSystem(space, [event], p=prob_num / prob_den)


def random_truth_table_system(rng: random.Random, n_vars: int = 6, n_events: int = 5) -> EventSystem:
    """Random scopes over booleans with random truth-table predicates."""
    import itertools

    space = VariableSpace.booleans(n_vars)
    events = []
    for j in range(n_events):
        scope = tuple(sorted(rng.sample(range(n_vars), rng.randint(1, 3))))
        table = {combo: rng.random() < 0.3 for combo in itertools.product((0, 1), repeat=len(scope))}
        events.append(Event(j, scope, table.__getitem__))
    return EventSystem(space, events)


def two_hex_graph() -> Graph:
    hex1 = [(i, (i + 1) % 6) for i in range(6)]
    hex2 = [(6 + i, 6 + (i + 1) % 6) for i in range(6)]
    return Graph(12, hex1 + hex2)


def brute_simple_cycles(graph: Graph, max_len: int | None = None) -> set[frozenset[int]]:
    """Every simple cycle as a frozenset of edge indices, by exhaustive DFS.

    Independent of the alternating-walk machinery: enumerates vertex paths
    from each start vertex, keeping only cycles whose smallest vertex is the
    start so each cycle is produced a bounded number of times.
    """
    cap = max_len if max_len is not None else graph.n_vertices
    out: set[frozenset[int]] = set()

    def extend(start: int, cur: int, visited: list[int], edges: list[int]):
        for w, eidx in graph.adj[cur]:
            if w == start and len(edges) >= 2:
                out.add(frozenset(edges + [eidx]))
                continue
            if w <= start or w in visited or len(edges) + 1 >= cap:
                continue
            visited.append(w)
            edges.append(eidx)
            extend(start, w, visited, edges)
            visited.pop()
            edges.pop()

    for s in range(graph.n_vertices):
        extend(s, s, [s], [])
    return out


def brute_bichromatic_keys(graph: Graph, coloring) -> set[tuple]:
    """Canonical keys of all bichromatic cycles, via the brute-force oracle.

    Assumes a proper coloring, under which a cycle with exactly two edge
    colors necessarily alternates them.
    """
    keys = set()
    for edge_set in brute_simple_cycles(graph):
        colors = {coloring.colors[e] for e in edge_set}
        if len(edge_set) % 2 == 0 and len(colors) == 2 and None not in colors:
            keys.add((len(edge_set), tuple(sorted(edge_set))))
    return keys


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
