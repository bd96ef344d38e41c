"""Hypothesis strategies shared by the property tests."""

from __future__ import annotations

from hypothesis import strategies as st

from wlhier.graph import Graph


@st.composite
def graphs(draw, min_nodes: int = 1, max_nodes: int = 8, colored: bool = False) -> Graph:
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    colors = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n)) if colored else None
    return Graph.from_edges(n, [e for e, keep in zip(pairs, mask) if keep], colors)


@st.composite
def rooted(draw, **kw) -> tuple[Graph, int]:
    g = draw(graphs(**kw))
    return g, draw(st.integers(0, g.node_count - 1))


@st.composite
def permuted(draw, g: Graph) -> Graph:
    perm = draw(st.permutations(range(g.node_count)))
    return g.relabel(perm)
