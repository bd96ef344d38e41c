"""Exact isomorphism certificates and connected induced-subgraph enumeration.

Canonical forms come from individualization-refinement: the ordered
partition is refined to an equitable one, a target cell is individualized
vertex by vertex, and the search keeps the leaf with the largest
(trace, adjacency code). Subtrees are cut when their trace falls behind
the current best, and sibling branches are skipped when a discovered
automorphism fixing the current prefix maps one onto the other.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterator

import numpy as np

from wlhier.graph import Graph


class SizeLimitExceeded(ValueError):
    pass


DEFAULT_SIZE_LIMIT = int(os.environ.get("WLHIER_SIZE_LIMIT", "128"))


@dataclass(frozen=True, order=True)
class Certificate:
    data: bytes

    def hex(self) -> str:
        return self.data.hex()

    def __repr__(self) -> str:
        return f"Certificate({self.data[:12].hex()}..., {len(self.data)}B)"


# ---------------------------------------------------------------------------
# partition refinement

def _equitable(adj, cells: list[list[int]]) -> tuple[list[list[int]], tuple]:
    """Refine an ordered partition until equitable.

    Cells split by the per-cell neighbor counts of their members; the pieces
    take the position of the old cell, ordered by signature. Returns the new
    partition and a node-name-free trace of the splits.
    """
    trace = []
    n = sum(len(c) for c in cells)
    cell_of = [0] * n
    while True:
        for ci, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = ci
        new_cells: list[list[int]] = []
        changed = False
        for ci, cell in enumerate(cells):
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: dict[tuple, list[int]] = {}
            for v in cell:
                cnt: dict[int, int] = {}
                for w in adj[v]:
                    c = cell_of[w]
                    cnt[c] = cnt.get(c, 0) + 1
                groups.setdefault(tuple(sorted(cnt.items())), []).append(v)
            if len(groups) == 1:
                new_cells.append(cell)
                continue
            changed = True
            keys = sorted(groups)
            trace.append((ci, tuple((k, len(groups[k])) for k in keys)))
            new_cells.extend(groups[k] for k in keys)
        cells = new_cells
        if not changed:
            return cells, tuple(trace)


def _initial_cells(colors, root: int | None) -> list[list[int]]:
    by: dict[tuple, list[int]] = {}
    for v, c in enumerate(colors):
        by.setdefault((0, c) if v == root else (1, c), []).append(v)
    return [by[k] for k in sorted(by)]


def _leaf_code(order: list[int], edges, colors) -> tuple:
    lab = [0] * len(order)
    for pos, v in enumerate(order):
        lab[v] = pos
    es = sorted((lab[a], lab[b]) if lab[a] < lab[b] else (lab[b], lab[a]) for a, b in edges)
    return (tuple(colors[v] for v in order), tuple(es))


class _Search:
    def __init__(self, g: Graph, root: int | None):
        self.adj = g.adj
        self.edges = g.edges
        self.colors = g.node_colors
        self.n = g.node_count
        self.best_key = None
        self.best_order: list[int] | None = None
        self.best_traces: list = []
        self.autos: list[list[int]] = []
        self.root = root

    def run(self) -> tuple:
        self._visit(_initial_cells(self.colors, self.root), [], ())
        return self.best_key[1]

    def _visit(self, cells, prefix: list[int], traces: tuple) -> None:
        cells, tr = _equitable(self.adj, cells)
        traces = traces + (tr,)
        depth = len(traces)
        if self.best_key is not None:
            ref = self.best_key[0][:depth]
            if traces < ref:
                return
        if len(cells) == self.n:
            order = [c[0] for c in cells]
            key = (traces, _leaf_code(order, self.edges, self.colors))
            if self.best_key is None or key > self.best_key:
                self.best_key, self.best_order = key, order
            elif key == self.best_key:
                gamma = [0] * self.n
                for a, b in zip(self.best_order, order):
                    gamma[a] = b
                self.autos.append(gamma)
            return
        # first smallest non-singleton cell
        ti = min(
            (i for i, c in enumerate(cells) if len(c) > 1),
            key=lambda i: (len(cells[i]), i),
        )
        target = sorted(cells[ti])
        done: list[int] = []
        for v in target:
            if done and self._same_orbit(v, done, prefix):
                continue
            done.append(v)
            rest = [w for w in cells[ti] if w != v]
            child = cells[:ti] + [[v], rest] + cells[ti + 1 :]
            self._visit(child, prefix + [v], traces)

    def _same_orbit(self, v: int, done: list[int], prefix: list[int]) -> bool:
        gens = [g for g in self.autos if all(g[p] == p for p in prefix)]
        if not gens:
            return False
        parent = list(range(self.n))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for g in gens:
            for a in range(self.n):
                ra, rb = find(a), find(g[a])
                if ra != rb:
                    parent[ra] = rb
        rv = find(v)
        return any(find(w) == rv for w in done)


def _encode(n: int, rooted: bool, colors: tuple, edges: tuple) -> bytes:
    head = b"WLC1" + (b"R" if rooted else b"U") + n.to_bytes(4, "big")
    col = np.asarray(colors, dtype=">i8").tobytes()
    bits = np.zeros(n * (n - 1) // 2, dtype=np.uint8)
    for a, b in edges:
        # row-major index of (a, b), a < b, in the strict upper triangle
        bits[a * n - a * (a + 1) // 2 + (b - a - 1)] = 1
    return head + col + np.packbits(bits).tobytes()


@lru_cache(maxsize=1 << 16)
def _certificate_cached(g: Graph, root: int | None) -> Certificate:
    if g.node_count == 0:
        return Certificate(_encode(0, False, (), ()))
    colors, edges = _Search(g, root).run()
    return Certificate(_encode(g.node_count, root is not None, colors, edges))


def certificate(g: Graph, root: int | None = None, limit: int | None = None) -> Certificate:
    """Canonical certificate of ``g``; with ``root`` it is root-preserving."""
    lim = DEFAULT_SIZE_LIMIT if limit is None else limit
    if g.node_count > lim:
        raise SizeLimitExceeded(f"graph has {g.node_count} nodes, limit is {lim}")
    if root is not None and not 0 <= root < g.node_count:
        raise ValueError(f"root {root} out of range")
    return _certificate_cached(g, root)


def are_isomorphic(g1: Graph, g2: Graph, limit: int | None = None) -> bool:
    if g1.node_count != g2.node_count or g1.edge_count != g2.edge_count:
        # still enforce the limit so callers see a consistent contract
        certificate(g1, limit=limit), certificate(g2, limit=limit)
        return False
    return certificate(g1, limit=limit) == certificate(g2, limit=limit)


def brute_force_certificate(g: Graph, root: int | None = None) -> bytes:
    """Lexicographically smallest relabeled code over all permutations.

    Exponential; only meant as a test oracle for graphs up to 8 nodes.
    """
    n = g.node_count
    if n > 8:
        raise SizeLimitExceeded("brute-force certificates are limited to 8 nodes")
    best = None
    nodes = list(range(n))
    for perm in permutations(nodes):
        # perm[pos] = node placed at position pos
        if root is not None and perm[0] != root:
            continue
        code = _leaf_code(list(perm), g.edges, g.node_colors)
        # minimize colors first, then edge list
        if best is None or code < best:
            best = code
    if best is None:
        best = ((), ())
    return _encode(n, root is not None, best[0], best[1])


# ---------------------------------------------------------------------------
# connected induced subgraph enumeration

def connected_sets_containing(g: Graph, u: int, max_size: int) -> Iterator[tuple[int, ...]]:
    """Yield every connected node set containing ``u`` with at most
    ``max_size`` nodes, each exactly once (sorted tuples).

    Branches on the smallest frontier node: either it joins the set or it
    is excluded for the rest of that branch.
    """
    if max_size < 1:
        return
    adj = g.adj_sets

    def rec(members: frozenset[int], frontier: frozenset[int], excluded: frozenset[int]):
        if len(members) == max_size:
            return
        while frontier:
            v = min(frontier)
            frontier = frontier - {v}
            grown = members | {v}
            yield tuple(sorted(grown))
            yield from rec(grown, frontier | (adj[v] - grown - excluded), excluded)
            excluded = excluded | {v}

    start = frozenset((u,))
    yield (u,)
    yield from rec(start, adj[u], start)


@lru_cache(maxsize=1 << 18)
def _small_certificate(size: int, mask: int, colors: tuple[int, ...]) -> Certificate:
    edges = []
    bit = 0
    for i in range(size):
        for j in range(i + 1, size):
            if mask >> bit & 1:
                edges.append((i, j))
            bit += 1
    return certificate(Graph.from_edges(size, edges, colors))


def subset_certificate(g: Graph, nodes: tuple[int, ...]) -> Certificate:
    """Unrooted certificate of the subgraph induced by sorted ``nodes``."""
    adj = g.adj_sets
    mask = 0
    bit = 0
    k = len(nodes)
    for i in range(k):
        ai = adj[nodes[i]]
        for j in range(i + 1, k):
            if nodes[j] in ai:
                mask |= 1 << bit
            bit += 1
    return _small_certificate(k, mask, tuple(g.node_colors[v] for v in nodes))


def connected_induced_subgraphs_at(g: Graph, u: int, size: int) -> Counter:
    """Multiset (Counter) of certificates of connected induced subgraphs on
    exactly ``size`` nodes that contain ``u``."""
    if size < 1:
        raise ValueError("size must be at least 1")
    out: Counter = Counter()
    for s in connected_sets_containing(g, u, size):
        if len(s) == size:
            out[subset_certificate(g, s)] += 1
    return out
