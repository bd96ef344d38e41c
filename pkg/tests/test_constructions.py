from __future__ import annotations

from collections import Counter

import networkx as nx
import pytest
from networkx.generators.atlas import graph_atlas_g

from wlhier.canonical import are_isomorphic, certificate
from wlhier.constructions import (
    Family,
    InvalidParam,
    PairSpec,
    cfi_graph,
    connected_graphs,
    gen_base_3regular,
    gen_cfi_pair,
    gen_cll_vs_c2l,
    gen_copy_pair,
    gen_cycle_pair,
    gen_markdrop_pair,
    gen_pair,
    gen_rook44,
    gen_shrikhande,
    gen_swl_pair,
    markdrop_layouts,
    random_graphs,
)
from wlhier.graph import Graph
from test_graph import to_nx


def srg_params(g: Graph) -> tuple[int, int, int, int] | None:
    n = g.node_count
    if not g.is_regular():
        return None
    k = g.degree(0)
    lam, mu = set(), set()
    for a in range(n):
        for b in range(a + 1, n):
            common = len(g.adj_sets[a] & g.adj_sets[b])
            (lam if g.has_edge(a, b) else mu).add(common)
    if len(lam) != 1 or len(mu) != 1:
        return None
    return n, k, lam.pop(), mu.pop()


def test_rook_and_shrikhande_are_srg_16_6_2_2():
    assert srg_params(gen_rook44()) == (16, 6, 2, 2)
    assert srg_params(gen_shrikhande()) == (16, 6, 2, 2)
    assert not are_isomorphic(gen_rook44(), gen_shrikhande())


def test_rook_is_line_graph_of_k44():
    ref = nx.line_graph(nx.complete_bipartite_graph(4, 4))
    assert nx.is_isomorphic(to_nx(gen_rook44()), ref)


def test_cll_pair_shapes():
    a, b = gen_cll_vs_c2l(5)
    for rg in (a, b):
        assert rg.graph.node_count == 11 and rg.graph.degree(rg.root) == 10
        assert sorted(rg.graph.degree(v) for v in range(10)) == [3] * 10
    with pytest.raises(InvalidParam):
        gen_cll_vs_c2l(2)


def test_cycle_and_copy_pairs():
    g1, g2 = gen_cycle_pair(2)
    assert (g1.node_count, g2.node_count) == (6, 7)
    c1, c2 = gen_copy_pair(6, 7)
    assert c1.node_count == c2.node_count == 42
    assert c1.is_regular(2) and c2.is_regular(2)
    assert len(nx.cycle_basis(to_nx(c1))) == 7 and len(nx.cycle_basis(to_nx(c2))) == 6
    with pytest.raises(InvalidParam):
        gen_copy_pair(7, 6)


def test_swl_pair():
    a, b = gen_swl_pair(1)
    assert a.graph.node_count == 4 and b.graph.node_count == 6
    assert sum(nx.triangles(to_nx(a.graph)).values()) == 3
    assert sum(nx.triangles(to_nx(b.graph)).values()) == 0
    assert nx.is_tree(to_nx(b.graph))


def test_markdrop_pair_structure():
    a, b = gen_markdrop_pair()
    la, lb = markdrop_layouts()
    for rg, lay in ((a, la), (b, lb)):
        g = rg.graph
        assert g.node_count == 25 and g.degree(rg.root) == 14
        assert Counter(g.degree(v) for v in lay.lower) == {4: 14}
        assert Counter(g.degree(v) for v in lay.upper) == {1: 10}
        assert len(lay.crossing) == 4
    # the chord layout from the construction
    assert a.graph.has_edge(la.long[0], la.long[2]) and a.graph.has_edge(la.long[5], la.long[7])
    assert b.graph.has_edge(lb.long[0], lb.long[5]) and b.graph.has_edge(lb.short[0], lb.short[2])
    assert not are_isomorphic(a.graph, b.graph)


def test_cfi_pair_is_nonisomorphic_and_twist_mobile():
    base = gen_base_3regular(8)
    assert base.is_regular(3) and base.is_connected()
    g1, g2 = gen_cfi_pair(base)
    assert g1.node_count == 80 and g1.is_regular(3) and g2.is_regular(3)
    assert certificate(g1) != certificate(g2)
    twisted = {certificate(cfi_graph(base, {e})[0]) for e in base.sorted_edges()}
    assert twisted == {certificate(g2)}
    # two twists cancel
    e1, e2 = base.sorted_edges()[:2]
    assert certificate(cfi_graph(base, {e1, e2})[0]) == certificate(g1)


def test_cfi_rejects_bad_input():
    with pytest.raises(InvalidParam):
        gen_base_3regular(6)
    with pytest.raises(InvalidParam):
        cfi_graph(gen_base_3regular(8), {(0, 5)})


def test_connected_graphs_match_the_atlas():
    ours = connected_graphs(6)
    atlas = [g for g in graph_atlas_g() if 0 < g.number_of_nodes() <= 6 and nx.is_connected(g)]
    assert Counter(g.node_count for g in ours) == Counter(g.number_of_nodes() for g in atlas)
    assert all(g.is_connected() for g in ours)


def test_random_graphs_are_seeded():
    assert random_graphs(5, 10, seed=3) == random_graphs(5, 10, seed=3)
    assert random_graphs(5, 10, seed=3) != random_graphs(5, 10, seed=4)


@pytest.mark.parametrize("family", list(Family))
def test_every_family_dispatches(family):
    a, b = gen_pair(PairSpec(family, {"n0": 8}))
    assert 0 <= a.root < a.graph.node_count and 0 <= b.root < b.graph.node_count
