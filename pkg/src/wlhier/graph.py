"""Simple undirected graphs, rooted views and neighborhood extraction."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np


class GraphError(ValueError):
    pass


def _norm_edge(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple graph on nodes ``0..node_count-1``.

    ``node_colors`` holds one opaque integer per node; all zeros means the
    graph carries no features.
    """

    node_count: int
    edges: frozenset[tuple[int, int]]
    node_colors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        n = self.node_count
        if n < 0:
            raise GraphError("node_count must be non-negative")
        for a, b in self.edges:
            if a == b:
                raise GraphError(f"self-loop at {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise GraphError(f"edge ({a}, {b}) out of range for n={n}")
            if a > b:
                raise GraphError(f"edge ({a}, {b}) not normalized")
        if not self.node_colors:
            object.__setattr__(self, "node_colors", (0,) * n)
        elif len(self.node_colors) != n:
            raise GraphError("node_colors length does not match node_count")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        colors: Sequence[int] | None = None,
    ) -> "Graph":
        es = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise GraphError(f"self-loop at {a}")
            e = _norm_edge(a, b)
            if e in es:
                raise GraphError(f"parallel edge {e}")
            es.add(e)
        return cls(n, frozenset(es), tuple(int(c) for c in colors) if colors is not None else ())

    # structure ------------------------------------------------------------

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        nb: list[list[int]] = [[] for _ in range(self.node_count)]
        for a, b in self.edges:
            nb[a].append(b)
            nb[b].append(a)
        return tuple(tuple(sorted(x)) for x in nb)

    @cached_property
    def adj_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(x) for x in self.adj)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        indptr = np.zeros(self.node_count + 1, dtype=np.int64)
        for v, nb in enumerate(self.adj):
            indptr[v + 1] = indptr[v] + len(nb)
        indices = np.fromiter(
            (w for nb in self.adj for w in nb), dtype=np.int64, count=int(indptr[-1])
        )
        return indptr, indices

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    def has_edge(self, a: int, b: int) -> bool:
        return _norm_edge(a, b) in self.edges

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def distances(self, u: int) -> list[int]:
        """BFS distances from ``u``; -1 marks unreachable nodes."""
        dist = [-1] * self.node_count
        dist[u] = 0
        queue = deque([u])
        adj = self.adj
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def eccentricity(self, u: int) -> int:
        """Largest finite distance from ``u`` (its own component only)."""
        return max(self.distances(u))

    def is_connected(self) -> bool:
        return self.node_count == 0 or min(self.distances(0)) >= 0

    def radius(self) -> int:
        return min(self.eccentricity(u) for u in range(self.node_count))

    def is_regular(self, k: int | None = None) -> bool:
        degs = {len(nb) for nb in self.adj}
        if not degs:
            return True
        return len(degs) == 1 and (k is None or degs == {k})

    # derived graphs -------------------------------------------------------

    def induced_subgraph(self, nodes: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        keep = sorted(set(nodes))
        mapping = {v: i for i, v in enumerate(keep)}
        es = frozenset(
            _norm_edge(mapping[a], mapping[b])
            for a, b in self.edges
            if a in mapping and b in mapping
        )
        cols = tuple(self.node_colors[v] for v in keep)
        return Graph(len(keep), es, cols), mapping

    def remove_nodes(self, nodes: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        drop = set(nodes)
        return self.induced_subgraph(v for v in range(self.node_count) if v not in drop)

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with node ``v`` renamed to ``perm[v]``."""
        n = self.node_count
        if sorted(perm) != list(range(n)):
            raise GraphError("perm is not a permutation")
        es = frozenset(_norm_edge(perm[a], perm[b]) for a, b in self.edges)
        cols = [0] * n
        for v, c in enumerate(self.node_colors):
            cols[perm[v]] = c
        return Graph(n, es, tuple(cols))

    def with_colors(self, colors: Sequence[int]) -> "Graph":
        return Graph(self.node_count, self.edges, tuple(int(c) for c in colors))

    def with_edges(self, add: Iterable[tuple[int, int]] = (), drop: Iterable[tuple[int, int]] = ()) -> "Graph":
        es = set(self.edges)
        es.difference_update(_norm_edge(a, b) for a, b in drop)
        for a, b in add:
            if a == b:
                raise GraphError(f"self-loop at {a}")
            es.add(_norm_edge(a, b))
        return Graph(self.node_count, frozenset(es), self.node_colors)

    # equality is structural on the labeled graph
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self.edges == other.edges
            and self.node_colors == other.node_colors
        )

    def __hash__(self) -> int:
        return hash((self.node_count, self.edges, self.node_colors))

    def __repr__(self) -> str:
        return f"Graph(n={self.node_count}, m={self.edge_count})"

    # serialization --------------------------------------------------------

    def to_text(self) -> str:
        lines = [f"{self.node_count} {self.edge_count}"]
        lines += [f"{a} {b}" for a, b in self.sorted_edges()]
        lines += [f"c {v} {c}" for v, c in enumerate(self.node_colors) if c != 0]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not rows:
            raise GraphError("empty graph text")
        try:
            n, m = int(rows[0][0]), int(rows[0][1])
            edges = [(int(r[0]), int(r[1])) for r in rows[1 : m + 1]]
            colors = [0] * n
            for r in rows[m + 1 :]:
                if r[0] != "c" or len(r) != 3:
                    raise GraphError(f"bad color line: {' '.join(r)}")
                colors[int(r[1])] = int(r[2])
        except (IndexError, ValueError) as exc:
            raise GraphError(f"malformed graph text: {exc}") from exc
        if len(edges) != m:
            raise GraphError(f"expected {m} edges, found {len(edges)}")
        return cls.from_edges(n, edges, colors)

    def to_dot(self, name: str = "G", root: int | None = None) -> str:
        out = [f"graph {name} {{"]
        for v in range(self.node_count):
            attrs = []
            if self.node_colors[v]:
                attrs.append(f'label="{v}:{self.node_colors[v]}"')
            if v == root:
                attrs.append("shape=doublecircle")
            out.append(f"  {v}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
        out += [f"  {a} -- {b};" for a, b in self.sorted_edges()]
        out.append("}")
        return "\n".join(out) + "\n"


@dataclass(frozen=True)
class RootedGraph:
    graph: Graph
    root: int
    # original node id -> node id in ``graph``; empty when ``graph`` is the original
    mapping: Mapping[int, int] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if not 0 <= self.root < self.graph.node_count:
            raise GraphError(f"root {self.root} out of range")


def _check_node(g: Graph, u: int) -> None:
    if not 0 <= u < g.node_count:
        raise GraphError(f"node {u} out of range for n={g.node_count}")


def message_passing_neighborhood(g: Graph, u: int, d: int) -> RootedGraph:
    """Subgraph visible to ``u`` after ``d`` rounds of message passing.

    Nodes within distance ``d``; only edges with an endpoint at distance at
    most ``d - 1`` (edges between two distance-``d`` nodes are invisible).
    """
    _check_node(g, u)
    dist = g.distances(u)
    keep = [v for v in range(g.node_count) if 0 <= dist[v] <= d]
    mapping = {v: i for i, v in enumerate(keep)}
    es = frozenset(
        _norm_edge(mapping[a], mapping[b])
        for a, b in g.edges
        if a in mapping and b in mapping and min(dist[a], dist[b]) <= d - 1
    )
    sub = Graph(len(keep), es, tuple(g.node_colors[v] for v in keep))
    return RootedGraph(sub, mapping[u], mapping)


def induced_radius_neighborhood(g: Graph, u: int, k: int) -> RootedGraph:
    """Subgraph induced by all nodes within distance ``k`` of ``u``."""
    _check_node(g, u)
    dist = g.distances(u)
    sub, mapping = g.induced_subgraph(v for v in range(g.node_count) if 0 <= dist[v] <= k)
    return RootedGraph(sub, mapping[u], mapping)


def disjoint_union(gs: Sequence[Graph]) -> Graph:
    edges: list[tuple[int, int]] = []
    colors: list[int] = []
    offset = 0
    for g in gs:
        edges.extend((a + offset, b + offset) for a, b in g.edges)
        colors.extend(g.node_colors)
        offset += g.node_count
    return Graph(offset, frozenset(edges), tuple(colors))


def apex_join(g: Graph, color: int = 0) -> RootedGraph:
    """Add one node adjacent to every node of ``g``; it becomes the root."""
    n = g.node_count
    es = set(g.edges)
    es.update((v, n) for v in range(n))
    return RootedGraph(Graph(n + 1, frozenset(es), g.node_colors + (color,)), n)


# small families -----------------------------------------------------------

def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs at least 3 nodes")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def empty_graph(n: int = 0) -> Graph:
    return Graph(n, frozenset())


GRAPH_SEPARATOR = "---"


def graphs_to_text(gs: Sequence[Graph]) -> str:
    """Several graphs in the text format, separated by ``---`` lines."""
    return (GRAPH_SEPARATOR + "\n").join(g.to_text() for g in gs)


def graphs_from_text(text: str) -> list[Graph]:
    chunks, cur = [], []
    for ln in text.splitlines():
        if ln.strip() == GRAPH_SEPARATOR:
            chunks.append("\n".join(cur))
            cur = []
        else:
            cur.append(ln)
    chunks.append("\n".join(cur))
    return [Graph.from_text(c) for c in chunks if c.strip()]
