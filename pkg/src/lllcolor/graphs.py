"""Simple undirected graphs with indexed edges, file IO and generators."""

from __future__ import annotations

import random


class Graph:
    """Simple graph; edges keep their input order and are indexed 0..m-1."""

    def __init__(self, n_vertices: int, edges):
        self.n_vertices = n_vertices
        self.edges: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge ({u},{v}) out of range")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise ValueError(f"parallel edge ({u},{v})")
            seen.add(e)
            self.edges.append(e)
        # adjacency as (neighbour, edge index) pairs
        self.adj: list[list[tuple[int, int]]] = [[] for _ in range(n_vertices)]
        for idx, (u, v) in enumerate(self.edges):
            self.adj[u].append((v, idx))
            self.adj[v].append((u, idx))
        self.degrees = [len(a) for a in self.adj]
        self.max_degree = max(self.degrees, default=0)
        self._edge_index = {e: i for i, e in enumerate(self.edges)}
        self._girth: int | None | str = "unset"

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_index(self, u: int, v: int) -> int | None:
        return self._edge_index.get((u, v) if u < v else (v, u))

    def other_end(self, edge_idx: int, v: int) -> int:
        a, b = self.edges[edge_idx]
        return b if v == a else a

    def girth(self) -> int | None:
        """Length of a shortest cycle, None if the graph is a forest.

        One BFS per start vertex; a non-tree edge seen at distance levels
        d(u), d(w) witnesses a closed walk of length d(u)+d(w)+1, and over
        all start vertices the minimum such witness is the girth.
        """
        if self._girth != "unset":
            return self._girth
        best: int | None = None
        for s in range(self.n_vertices):
            dist = [-1] * self.n_vertices
            via = [-1] * self.n_vertices  # edge index used to reach the vertex
            dist[s] = 0
            queue = [s]
            while queue:
                nxt = []
                for u in queue:
                    for w, eidx in self.adj[u]:
                        if eidx == via[u]:
                            continue
                        if dist[w] == -1:
                            dist[w] = dist[u] + 1
                            via[w] = eidx
                            nxt.append(w)
                        else:
                            cand = dist[u] + dist[w] + 1
                            if best is None or cand < best:
                                best = cand
                queue = nxt
        self._girth = best
        return best

    def set_girth(self, value: int | None) -> None:
        """Caller-asserted girth, skipping the BFS sweep."""
        self._girth = value

    @classmethod
    def from_edge_list(cls, text: str) -> "Graph":
        """Parse the `p edges <l> <m>` header plus one `u v` line per edge."""
        n = m = None
        edges: list[tuple[int, int]] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("c"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "edges":
                    raise ValueError(f"line {lineno}: bad header {line!r}")
                n, m = int(parts[2]), int(parts[3])
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'u v', got {line!r}")
            edges.append((int(parts[0]), int(parts[1])))
        if n is None:
            raise ValueError("missing 'p edges <l> <m>' header")
        if m != len(edges):
            raise ValueError(f"header declares {m} edges, found {len(edges)}")
        return cls(n, edges)

    @classmethod
    def read_edge_list(cls, path) -> "Graph":
        with open(path) as fh:
            return cls.from_edge_list(fh.read())

    def to_edge_list(self) -> str:
        lines = [f"p edges {self.n_vertices} {self.m}"]
        lines += [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def cycle_graph(length: int) -> Graph:
    if length < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return Graph(length, [(i, (i + 1) % length) for i in range(length)])


def path_graph(n_vertices: int) -> Graph:
    return Graph(n_vertices, [(i, i + 1) for i in range(n_vertices - 1)])


def complete_graph(n_vertices: int) -> Graph:
    edges = [(u, v) for u in range(n_vertices) for v in range(u + 1, n_vertices)]
    return Graph(n_vertices, edges)


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, [(0, i + 1) for i in range(leaves)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def gnp_graph(n_vertices: int, prob: float, seed: int | None = None) -> Graph:
    rng = random.Random(seed)
    edges = [
        (u, v)
        for u in range(n_vertices)
        for v in range(u + 1, n_vertices)
        if rng.random() < prob
    ]
    return Graph(n_vertices, edges)


def random_regular_graph(degree: int, n_vertices: int, seed: int | None = None) -> Graph:
    """Uniform-ish random d-regular simple graph (pairing model with repair)."""
    import networkx as nx

    g = nx.random_regular_graph(degree, n_vertices, seed=seed)
    return Graph(n_vertices, sorted((min(u, v), max(u, v)) for u, v in g.edges()))
