from __future__ import annotations

from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import graphs, rooted

from wlhier.analysis import final_node_colors
from wlhier.canonical import certificate
from wlhier.constructions import connected_graphs, gen_rook44, gen_shrikhande, gen_wl1_pair
from wlhier.extensions import (
    CombinatorialBudgetExceeded,
    ExtensionSpec,
    Kind,
    Mode,
    SpecViolation,
    count_runs,
    extended_rooted_color,
    marked_refine,
    mk_inseparable,
    mk_run_profile,
    root_removed_color,
    nk_feature,
    sk_features,
)
from wlhier.graph import RootedGraph, complete_graph, cycle_graph, induced_radius_neighborhood, path_graph
from wlhier.refinement import ColorTable, initial_coloring, refine


def same_partition_implies(fine, coarse) -> bool:
    """Every pair of nodes equal under ``fine`` is equal under ``coarse``."""
    seen: dict[int, int] = {}
    for gi, cols in enumerate(fine):
        for v, c in enumerate(cols.tolist()):
            if seen.setdefault(c, int(coarse[gi][v])) != int(coarse[gi][v]):
                return False
    return True


# -- spec parsing -------------------------------------------------------------

@pytest.mark.parametrize(
    "text, kind, k, d, mode",
    [
        ("M:2:d=2", Kind.MK, 2, 2, Mode.MARK),
        ("M:2:d=2:remove", Kind.RK, 2, 2, Mode.REMOVE),
        ("R:1:d=3:mark", Kind.MK, 1, 3, Mode.MARK),
        ("S:4:d=2", Kind.SK, 4, 2, None),
        ("N:1:d=2", Kind.NK, 1, 2, None),
        ("KFWL:3", Kind.KFWL, 3, None, None),
        ("WL1:d=stable", Kind.WL1, 0, None, None),
    ],
)
def test_parse(text, kind, k, d, mode):
    spec = ExtensionSpec.parse(text)
    assert (spec.kind, spec.k, spec.d, spec.mode) == (kind, k, d, mode)
    assert ExtensionSpec.parse(str(spec)) == spec


@pytest.mark.parametrize("text", ["Q:1", "M:x:d=2", "S:1:d=2:mark", ""])
def test_parse_rejects(text):
    with pytest.raises(SpecViolation):
        ExtensionSpec.parse(text)


def test_check_constraints():
    with pytest.raises(SpecViolation):
        ExtensionSpec.parse("N:2:d=2").check()
    with pytest.raises(SpecViolation):
        ExtensionSpec.parse("M:1:d=0").check()
    with pytest.raises(SpecViolation):
        ExtensionSpec(Kind.SK, 3, None).check()
    # S_5 at d=2 only fails where the component reaches beyond d hops
    ExtensionSpec.parse("S:5:d=2").check(cycle_graph(5))
    with pytest.raises(SpecViolation):
        ExtensionSpec.parse("S:5:d=2").check(path_graph(5))
    ExtensionSpec.parse("S:3:d=2").check(path_graph(9))


# -- S_k and N_k features ---------------------------------------------------

def test_sk_features_small():
    tri, p3 = certificate(complete_graph(3)), certificate(path_graph(3))
    k3 = sk_features(complete_graph(3), 0, 3)
    assert sorted(Counter({s: n for (s, _), n in k3.items()}).items()) == [(1, 1), (2, 2), (3, 1)]
    assert k3[(3, tri)] == 1
    c6 = sk_features(cycle_graph(6), 0, 3)
    assert c6[(3, tri)] == 0 and c6[(3, p3)] == 3


def test_sk_sees_k4_in_rook_only():
    k4 = certificate(complete_graph(4))
    assert sk_features(gen_rook44(), 0, 4)[(4, k4)] == 2
    assert sk_features(gen_shrikhande(), 0, 4)[(4, k4)] == 0


def test_nk_feature():
    g1, g2 = gen_wl1_pair()
    assert nk_feature(g1, 0, 1) != nk_feature(g2, 0, 1)
    assert nk_feature(cycle_graph(6), 0, 2) == nk_feature(cycle_graph(7), 0, 2)
    assert nk_feature(cycle_graph(6), 0, 0) == nk_feature(complete_graph(4), 2, 0)


def test_extended_color_uses_features():
    g1, g2 = gen_wl1_pair()
    a, b = RootedGraph(g1, 0), RootedGraph(g2, 0)
    t = ColorTable()
    assert extended_rooted_color(ExtensionSpec.parse("WL1:d=3"), a, t) == extended_rooted_color(
        ExtensionSpec.parse("WL1:d=3"), b, t
    )
    assert extended_rooted_color(ExtensionSpec.parse("S:3:d=2"), a, t) != extended_rooted_color(
        ExtensionSpec.parse("S:3:d=2"), b, t
    )


# -- markings ----------------------------------------------------------------

@given(graphs(max_nodes=9), st.integers(0, 4))
def test_marking_nothing_or_everything_is_plain_refinement(g, rounds):
    plain = refine(g, rounds=rounds).partition()
    assert marked_refine(g, [], rounds=rounds).partition() == plain
    assert marked_refine(g, range(g.node_count), rounds=rounds).partition() == plain


@given(graphs(min_nodes=1, max_nodes=9), st.data(), st.integers(0, 4))
def test_marked_and_unmarked_never_share_a_class(g, data, rounds):
    marked = data.draw(st.sets(st.integers(0, g.node_count - 1)))
    col = marked_refine(g, marked, rounds=rounds)
    inside = {int(col[v]) for v in marked}
    outside = {int(col[v]) for v in range(g.node_count) if v not in marked}
    assert not inside & outside


def test_antipodal_mark_separates_c4_from_c5():
    t = ColorTable()
    p4 = mk_run_profile(cycle_graph(4), 0, 2, 1, Mode.MARK, t)
    p5 = mk_run_profile(cycle_graph(5), 0, 2, 1, Mode.MARK, t)
    assert p4[0] != p5[0] or p4[1] != p5[1]


def test_profile_shape_and_zero_runs():
    g = cycle_graph(6)
    t = ColorTable()
    prof = mk_run_profile(g, 0, 2, 2, Mode.MARK, t)
    assert [sum(prof[j].values()) for j in range(3)] == [1, 5, 10]
    assert count_runs(5, 2) == 16
    # the empty marking is a plain d-round refinement of the d-hop view
    rg = induced_radius_neighborhood(g, 0, 2)
    bare = marked_refine(rg.graph, [], initial_coloring(rg.graph, t), 2)
    assert list(prof[0]) == [int(bare[rg.root])]


def test_run_cap():
    with pytest.raises(CombinatorialBudgetExceeded):
        mk_run_profile(complete_graph(12), 0, 1, 3, run_cap=100)


def test_removal_of_root_is_a_sentinel():
    t = ColorTable()
    prof = mk_run_profile(path_graph(3), 1, 1, 1, Mode.REMOVE, t)
    gone = root_removed_color(t)
    # the two leaves are symmetric, the root run is the sentinel
    assert prof[1][gone] == 1 and sorted(prof[1].values()) == [1, 2]


def test_mk_known_pairs():
    r, s = RootedGraph(gen_rook44(), 0), RootedGraph(gen_shrikhande(), 0)
    assert mk_inseparable(r, r, 2, 2)
    assert not mk_inseparable(r, s, 2, 2)
    assert not mk_inseparable(RootedGraph(cycle_graph(6), 0), RootedGraph(cycle_graph(7), 0), 3, 1)


# -- orderings on the node-level hierarchy -------------------------------------

@given(rooted(max_nodes=8), rooted(max_nodes=8), st.integers(1, 2))
@settings(max_examples=40)
def test_mk_is_monotone_in_k(a, b, d):
    ra, rb = RootedGraph(*a), RootedGraph(*b)
    verdicts = [mk_inseparable(ra, rb, d, k) for k in range(3)]
    # inseparable at k implies inseparable at every smaller k
    assert verdicts == sorted(verdicts, reverse=True)


@given(rooted(max_nodes=8), rooted(max_nodes=8))
@settings(max_examples=40)
def test_mark_dominates_remove(a, b):
    ra, rb = RootedGraph(*a), RootedGraph(*b)
    for k in (1, 2):
        if mk_inseparable(ra, rb, 2, k, Mode.MARK):
            assert mk_inseparable(ra, rb, 2, k, Mode.REMOVE)


@pytest.fixture(scope="module")
def atlas6():
    return connected_graphs(6)


def test_nk_hierarchy_is_nested(atlas6):
    t = ColorTable()
    n1 = final_node_colors(ExtensionSpec.parse("N:1:d=3"), atlas6, t)
    n2 = final_node_colors(ExtensionSpec.parse("N:2:d=3"), atlas6, t)
    assert same_partition_implies(n2, n1)


def test_zero_extensions_collapse_at_finite_depth(atlas6):
    for d in (1, 2, 3):
        t = ColorTable()
        wl = final_node_colors(ExtensionSpec.parse(f"WL1:d={d}"), atlas6, t)
        wl_next = final_node_colors(ExtensionSpec.parse(f"WL1:d={d + 1}"), atlas6, t)
        for other in (f"N:0:d={d}", f"M:0:d={d}", f"R:0:d={d}"):
            cols = final_node_colors(ExtensionSpec.parse(other), atlas6, t)
            assert same_partition_implies(cols, wl) and same_partition_implies(wl, cols), other
        # the S_2 feature is the degree, one round ahead of plain refinement
        s2 = final_node_colors(ExtensionSpec.parse(f"S:2:d={d}"), atlas6, t)
        assert same_partition_implies(s2, wl_next) and same_partition_implies(wl_next, s2)


@pytest.mark.parametrize("k, d", [(0, 1), (0, 2), (1, 2), (1, 3)])
def test_nk_one_deeper_determines_s_k_plus_2(atlas6, k, d):
    t = ColorTable()
    n = final_node_colors(ExtensionSpec.parse(f"N:{k}:d={d + 1}"), atlas6, t)
    s = final_node_colors(ExtensionSpec.parse(f"S:{k + 2}:d={d}"), atlas6, t)
    assert same_partition_implies(n, s)

