from __future__ import annotations

from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import graphs, permuted

from wlhier.constructions import gen_cfi_pair, gen_base_3regular, gen_rook44, gen_shrikhande, gen_wl1_pair
from wlhier.graph import Graph, RootedGraph, cycle_graph, disjoint_union
from wlhier.kernels import BACKEND, available_backends, new_interner
from wlhier.refinement import (
    STABLE,
    BudgetExceeded,
    ColorTable,
    graphs_equivalent_kfwl,
    initial_coloring,
    kfwl,
    kfwl_joint,
    refine,
    refine_history,
    rooted_color,
    wl1_equivalent,
)


def naive_wl(g: Graph, rounds: int) -> list[list]:
    """Colors as nested tuples (no interning at all)."""
    cols = [("c", c) for c in g.node_colors]
    out = [cols]
    for _ in range(rounds):
        cols = [(cols[v], tuple(sorted(cols[w] for w in g.adj[v]))) for v in range(g.node_count)]
        out.append(cols)
    return out


def partition_of(labels) -> frozenset:
    groups: dict = {}
    for v, c in enumerate(labels):
        groups.setdefault(c, set()).add(v)
    return frozenset(frozenset(s) for s in groups.values())


@given(graphs(max_nodes=9, colored=True), st.integers(0, 5))
def test_refine_matches_naive_oracle(g, rounds):
    got = refine(g, rounds=rounds)
    assert got.partition() == partition_of(naive_wl(g, rounds)[-1])


@pytest.mark.skipif(len(available_backends()) < 2, reason="compiled kernels not built")
@given(graphs(max_nodes=10, colored=True), st.integers(0, 4), st.data())
def test_backends_assign_identical_ids(g, rounds, data):
    alive = np.array(data.draw(st.lists(st.booleans(), min_size=g.node_count, max_size=g.node_count)), dtype=np.uint8)
    outs = []
    for b in ("python", "cython"):
        t = ColorTable(b)
        c = initial_coloring(g, t)
        outs.append((refine(g, c, rounds).colors.tolist(), refine(g, c, STABLE, alive).colors.tolist(), len(t)))
    assert outs[0] == outs[1]


@pytest.mark.skipif(len(available_backends()) < 2, reason="compiled kernels not built")
def test_backends_intern_rows_identically():
    rows = np.array([[1, 2], [3, 4], [1, 2], [0, 0]], dtype=np.int64)
    a, b = new_interner("python"), new_interner("cython")
    assert a.intern_rows(rows, 7).tolist() == b.intern_rows(rows, 7).tolist() == [0, 1, 0, 2]
    assert a.intern((5, 5)) == b.intern((5, 5)) == 3
    assert a.size == b.size == 4


def test_default_backend_is_available():
    assert BACKEND in available_backends()


@given(graphs(max_nodes=12))
def test_monotone_and_stable_within_n_rounds(g):
    init = initial_coloring(g)
    hist = refine_history(g, init, g.node_count + 1)
    parts = [partition_of(h.tolist()) for h in hist]
    for a, b in zip(parts, parts[1:]):
        # every class of the later partition sits inside a class of the earlier one
        assert all(any(x <= y for y in a) for x in b)
        assert len(b) >= len(a)
    n = g.node_count
    # nothing changes after n - 1 rounds
    assert parts[n - 1] == parts[n] == parts[n + 1]
    stable = refine(g, init, STABLE)
    assert stable.rounds <= n + 1
    assert stable.partition() == parts[-1]


def test_deleted_nodes_are_ignored():
    g = cycle_graph(5)
    alive = np.array([1, 1, 1, 1, 0], dtype=np.uint8)
    got = refine(g, rounds=STABLE, alive=alive)
    assert got[4] == -1
    path = refine(Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)]), rounds=STABLE)
    assert partition_of(got.colors[:4].tolist()) == path.partition()


def test_rooted_color_ignores_far_structure():
    t = ColorTable()
    a = RootedGraph(Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4)]), 0)
    b = RootedGraph(Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (2, 4)]), 0)
    assert rooted_color(a, 2, initial_coloring(a.graph, t)) == rooted_color(b, 2, initial_coloring(b.graph, t))
    assert rooted_color(a, 3, initial_coloring(a.graph, t)) != rooted_color(b, 3, initial_coloring(b.graph, t))


def test_wl1_pair_and_permutations():
    g1, g2 = gen_wl1_pair()
    assert wl1_equivalent(g1, g2)
    assert not wl1_equivalent(cycle_graph(6), Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]))


@given(graphs(max_nodes=8), st.data())
def test_wl1_invariant_under_relabeling(g, data):
    assert wl1_equivalent(g, data.draw(permuted(g)))


def naive_fwl2(g: Graph) -> dict:
    """Plain 2-FWL with nested-tuple colors, run to a fixed point."""
    n = g.node_count
    adj = {(a, b) for a, b in g.edges} | {(b, a) for a, b in g.edges}

    def atom(a, b):
        return (g.node_colors[a], g.node_colors[b], 2 if a == b else int((a, b) in adj))

    col = {(a, b): atom(a, b) for a, b in product(range(n), repeat=2)}
    size = len(set(col.values()))
    while True:
        new = {
            (a, b): (col[(a, b)], tuple(sorted((atom(w, a), atom(w, b), col[(w, b)], col[(a, w)]) for w in range(n))))
            for a, b in col
        }
        new_size = len(set(new.values()))
        col = new
        if new_size == size:
            return col
        size = new_size


@given(graphs(max_nodes=6, colored=True))
@settings(max_examples=40)
def test_fwl2_partition_matches_naive(g):
    got = kfwl(g, 2)
    ref = naive_fwl2(g)
    keys = list(product(range(g.node_count), repeat=2))
    assert partition_of([got[k] for k in keys]) == partition_of([ref[k] for k in keys])


@given(graphs(max_nodes=9, colored=True))
@settings(max_examples=40)
def test_fwl1_equals_color_refinement(g):
    got = kfwl(g, 1)
    assert partition_of(got.colors.tolist()) == refine(g, rounds=STABLE).partition()


def test_fwl2_known_pairs():
    assert not graphs_equivalent_kfwl(cycle_graph(6), disjoint_union([cycle_graph(3)] * 2), 2)
    assert graphs_equivalent_kfwl(gen_rook44(), gen_shrikhande(), 2)
    g1, g2 = gen_cfi_pair(gen_base_3regular(8))
    assert graphs_equivalent_kfwl(g1, g2, 2)


def test_fwl_budget():
    with pytest.raises(BudgetExceeded):
        kfwl_joint([cycle_graph(30)], 3, budget=1000)


def test_empty_table_is_kept():
    t = ColorTable()
    init = initial_coloring(cycle_graph(4), t)
    assert init.table is t and len(t) == 1
