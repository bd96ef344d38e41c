"""Generators for the separating graph pairs."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from wlhier.graph import (
    Graph,
    RootedGraph,
    apex_join,
    cycle_graph,
    disjoint_union,
)


class InvalidParam(ValueError):
    pass


class Family(str, Enum):
    WL1_PAIR = "wl1"
    CLL_VS_C2L = "cll"
    ROOK_SHRIKHANDE = "rook-shrikhande"
    CYCLE_PAIR = "cycle"
    SWL_PAIR = "swl"
    MARKDROP_PAIR = "markdrop"
    CFI_PAIR = "cfi"
    COPY_PAIR = "copy"


@dataclass(frozen=True)
class PairSpec:
    family: Family
    params: dict = field(default_factory=dict)


def gen_wl1_pair() -> tuple[Graph, Graph]:
    """Two triangles versus a hexagon: 2-regular on 6 nodes, 1-WL-equal."""
    return disjoint_union([cycle_graph(3), cycle_graph(3)]), cycle_graph(6)


def gen_cll_vs_c2l(l: int) -> tuple[RootedGraph, RootedGraph]:
    """Two l-cycles and one 2l-cycle, each with an apex root."""
    if l < 3:
        raise InvalidParam("l must be at least 3")
    return (
        apex_join(disjoint_union([cycle_graph(l), cycle_graph(l)])),
        apex_join(cycle_graph(2 * l)),
    )


def gen_rook44() -> Graph:
    """Rook's graph on the 4x4 board: same row or same column."""
    return Graph.from_edges(
        16,
        [(a, b) for a in range(16) for b in range(a + 1, 16) if a // 4 == b // 4 or a % 4 == b % 4],
    )


def gen_shrikhande() -> Graph:
    """Cayley graph of Z4 x Z4 with connection set +-(1,0), +-(0,1), +-(1,1)."""
    steps = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)]
    edges = set()
    for i in range(4):
        for j in range(4):
            for di, dj in steps:
                a, b = 4 * i + j, 4 * ((i + di) % 4) + (j + dj) % 4
                edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(16, edges)


def gen_cycle_pair(k: int) -> tuple[Graph, Graph]:
    if k < 1:
        raise InvalidParam("k must be at least 1")
    return cycle_graph(2 * k + 2), cycle_graph(2 * k + 3)


def gen_swl_pair(k: int) -> tuple[RootedGraph, RootedGraph]:
    """Path u=0..k; G1 closes a triangle at the far end, G2 hangs two
    length-2 paths there."""
    if k < 0:
        raise InvalidParam("k must be non-negative")
    path = [(i, i + 1) for i in range(k)]
    v = k
    g1 = Graph.from_edges(k + 3, path + [(v, k + 1), (v, k + 2), (k + 1, k + 2)])
    g2 = Graph.from_edges(k + 5, path + [(v, k + 1), (k + 1, k + 2), (v, k + 3), (k + 3, k + 4)])
    return RootedGraph(g1, 0), RootedGraph(g2, 0)


@dataclass(frozen=True)
class MarkdropLayout:
    """Node ids of the mark-versus-removal pair.

    ``short[i]`` / ``long[i]`` are the 4-cycle and 10-cycle nodes numbered
    clockwise from 0; ``leaf_of`` maps lower nodes to their upper leaf.
    """

    root: int
    short: tuple[int, ...]
    long: tuple[int, ...]
    leaf_of: dict[int, int]
    crossing: tuple[int, ...]

    @property
    def lower(self) -> tuple[int, ...]:
        return self.short + self.long

    @property
    def upper(self) -> tuple[int, ...]:
        return tuple(sorted(self.leaf_of.values()))


def _markdrop(short_chords, long_chords) -> tuple[Graph, MarkdropLayout]:
    root = 0
    short = tuple(range(1, 5))
    long = tuple(range(5, 15))
    edges = [(root, v) for v in short + long]
    edges += [(short[i], short[(i + 1) % 4]) for i in range(4)]
    edges += [(long[i], long[(i + 1) % 10]) for i in range(10)]
    edges += [(short[a], short[b]) for a, b in short_chords]
    edges += [(long[a], long[b]) for a, b in long_chords]
    chorded = {short[x] for c in short_chords for x in c} | {long[x] for c in long_chords for x in c}
    leaf_of = {}
    nxt = 15
    for v in short + long:
        if v not in chorded:
            leaf_of[v] = nxt
            edges.append((v, nxt))
            nxt += 1
    g = Graph.from_edges(nxt, edges)
    return g, MarkdropLayout(root, short, long, leaf_of, tuple(sorted(chorded)))


def markdrop_layouts() -> tuple[MarkdropLayout, MarkdropLayout]:
    return _markdrop([], [(0, 2), (5, 7)])[1], _markdrop([(0, 2)], [(0, 5)])[1]


def gen_markdrop_pair() -> tuple[RootedGraph, RootedGraph]:
    """Apex over a 4-cycle and a 10-cycle with two chords each way, plus a
    leaf on every lower node of degree 3 (25 nodes)."""
    g1, l1 = _markdrop([], [(0, 2), (5, 7)])
    g2, l2 = _markdrop([(0, 2)], [(0, 5)])
    return RootedGraph(g1, l1.root), RootedGraph(g2, l2.root)


def gen_base_3regular(n0: int) -> Graph:
    """n0-cycle plus chords (4i, 4i+2) and (4i+1, 4i+3)."""
    if n0 < 4 or n0 % 4:
        raise InvalidParam("n0 must be a positive multiple of 4")
    edges = {(i, (i + 1) % n0) for i in range(n0)}
    for i in range(n0 // 4):
        edges |= {(4 * i, 4 * i + 2), (4 * i + 1, 4 * i + 3)}
    return Graph.from_edges(n0, {(min(a, b), max(a, b)) for a, b in edges})


@dataclass(frozen=True)
class CFILayout:
    """Node ids of a CFI graph: per base vertex, its inner nodes keyed by
    the even edge subset, and its outer (a, b) pair per incident edge."""

    inner: dict[int, dict[frozenset, int]]
    outer: dict[tuple[int, tuple[int, int]], tuple[int, int]]


def cfi_graph(base: Graph, twisted: set[tuple[int, int]] | frozenset = frozenset()) -> tuple[Graph, CFILayout]:
    """CFI transform of a 3-regular ``base`` with the given edges twisted."""
    if not base.is_regular(3):
        raise InvalidParam("CFI construction here requires a 3-regular base graph")
    twisted = {(min(a, b), max(a, b)) for a, b in twisted}
    unknown = twisted - set(base.edges)
    if unknown:
        raise InvalidParam(f"twisted edges not in base: {sorted(unknown)}")
    inner: dict[int, dict[frozenset, int]] = {}
    outer: dict[tuple[int, tuple[int, int]], tuple[int, int]] = {}
    edges: list[tuple[int, int]] = []
    nxt = 0
    for v in range(base.node_count):
        inc = sorted((min(v, w), max(v, w)) for w in base.adj[v])
        e1, e2, e3 = inc
        subsets = [frozenset(), frozenset({e1, e2}), frozenset({e1, e3}), frozenset({e2, e3})]
        inner[v] = {s: nxt + i for i, s in enumerate(subsets)}
        nxt += 4
        for e in inc:
            outer[(v, e)] = (nxt, nxt + 1)
            nxt += 2
        for s, node in inner[v].items():
            for e in inc:
                a, b = outer[(v, e)]
                edges.append((node, a if e in s else b))
    for e in base.sorted_edges():
        v, w = e
        av, bv = outer[(v, e)]
        aw, bw = outer[(w, e)]
        if e in twisted:
            edges += [(av, bw), (bv, aw)]
        else:
            edges += [(av, aw), (bv, bw)]
    return Graph.from_edges(nxt, edges), CFILayout(inner, outer)


def gen_cfi_pair(base: Graph, twist: tuple[int, int] | None = None) -> tuple[Graph, Graph]:
    """Untwisted and once-twisted CFI graphs over ``base``."""
    if twist is None:
        twist = base.sorted_edges()[0]
    return cfi_graph(base)[0], cfi_graph(base, {twist})[0]


def gen_copy_pair(l1: int, l2: int) -> tuple[Graph, Graph]:
    """l2 copies of C_l1 versus l1 copies of C_l2 (both on l1*l2 nodes)."""
    if not 3 <= l1 < l2:
        raise InvalidParam("need 3 <= l1 < l2")
    return (
        disjoint_union([cycle_graph(l1)] * l2),
        disjoint_union([cycle_graph(l2)] * l1),
    )


def gen_pair(spec: PairSpec) -> tuple[RootedGraph, RootedGraph]:
    """Rooted pair for a family; unrooted families are rooted at node 0."""
    fam, p = Family(spec.family), spec.params
    if fam is Family.WL1_PAIR:
        a, b = gen_wl1_pair()
    elif fam is Family.CLL_VS_C2L:
        return gen_cll_vs_c2l(int(p.get("l", 5)))
    elif fam is Family.ROOK_SHRIKHANDE:
        a, b = gen_rook44(), gen_shrikhande()
    elif fam is Family.CYCLE_PAIR:
        a, b = gen_cycle_pair(int(p.get("k", 2)))
    elif fam is Family.SWL_PAIR:
        return gen_swl_pair(int(p.get("k", 1)))
    elif fam is Family.MARKDROP_PAIR:
        return gen_markdrop_pair()
    elif fam is Family.CFI_PAIR:
        a, b = gen_cfi_pair(gen_base_3regular(int(p.get("n0", 8))))
        if p.get("apex"):
            return apex_join(a), apex_join(b)
    elif fam is Family.COPY_PAIR:
        a, b = gen_copy_pair(int(p.get("l1", 6)), int(p.get("l2", 7)))
    else:  # pragma: no cover - Enum is exhaustive
        raise InvalidParam(f"unknown family {fam}")
    return RootedGraph(a, 0), RootedGraph(b, 0)


def connected_graphs(max_nodes: int, min_nodes: int = 1) -> list[Graph]:
    """All connected graphs on ``min_nodes..max_nodes`` nodes up to
    isomorphism, grown one node at a time (every connected graph has a
    non-cut node, so each one extends a smaller connected graph)."""
    from wlhier.canonical import certificate

    if max_nodes < 1:
        return []
    layers = [[Graph.from_edges(1, [])]]
    for n in range(2, max_nodes + 1):
        seen: dict = {}
        for g in layers[-1]:
            m = g.node_count
            for mask in range(1, 1 << m):
                edges = list(g.edges) + [(v, m) for v in range(m) if mask >> v & 1]
                h = Graph.from_edges(n, edges)
                seen.setdefault(certificate(h), h)
        layers.append([seen[c] for c in sorted(seen)])
    return [g for layer in layers[min_nodes - 1 :] for g in layer]


def random_graphs(count: int, max_nodes: int = 12, seed: int = 0, min_nodes: int = 3) -> list[Graph]:
    """Seeded Erdos-Renyi style samples: n uniform in [min_nodes, max_nodes],
    edge probability uniform in [0.15, 0.6] per graph."""
    import numpy as np

    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(min_nodes, max_nodes + 1))
        p = float(rng.uniform(0.15, 0.6))
        mask = rng.random((n, n)) < p
        out.append(Graph.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n) if mask[a, b]]))
    return out
