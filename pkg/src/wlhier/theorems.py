"""Theorem reproduction driver.

Every entry builds its construction at desk-scale parameters, runs the
relevant comparisons and records one claim per expected verdict. Reports
follow the JSON layout ``{theorem, params, claims: [{spec, expected,
observed, witness}], runtime_ms}``.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

from wlhier.analysis import (
    CountQuery,
    Pattern,
    can_count,
    degree_profile,
    distinguish,
    distinguish_graph_level,
    final_node_colors,
    incident_count,
    removal_census,
    split_aggregation_refine,
)
from wlhier.canonical import certificate, connected_induced_subgraphs_at
from wlhier.constructions import (
    cfi_graph,
    connected_graphs,
    gen_base_3regular,
    gen_cfi_pair,
    gen_cll_vs_c2l,
    gen_copy_pair,
    gen_cycle_pair,
    gen_markdrop_pair,
    gen_rook44,
    gen_shrikhande,
    gen_swl_pair,
    gen_wl1_pair,
)
from wlhier.extensions import ExtensionSpec, marked_refine
from wlhier.graph import Graph, RootedGraph, apex_join, complete_graph, cycle_graph, path_graph
from wlhier.refinement import STABLE, ColorTable, initial_coloring, kfwl_joint

SEP, INSEP = "SEPARATED", "INSEPARABLE"
WD, CE = "WELL_DEFINED", "COUNTEREXAMPLE"


class ClaimAssertionError(AssertionError):
    """Raised when a reproduction observes something other than the claim."""

    def __init__(self, report: dict):
        self.report = report
        bad = [c["spec"] for c in report["claims"] if c["expected"] != c["observed"]]
        super().__init__(f"{report['theorem']}: violated claims: {', '.join(bad)}")


@dataclass
class Claim:
    spec: str
    expected: str
    observed: str
    witness: dict | None = None

    @property
    def ok(self) -> bool:
        return self.expected == self.observed

    def to_dict(self) -> dict:
        return {"spec": self.spec, "expected": self.expected, "observed": self.observed, "witness": self.witness}


def _node(spec: str, rg1, rg2, expected: str, label: str | None = None) -> Claim:
    r = distinguish(spec, rg1, rg2)
    return Claim(label or spec, expected, r.verdict.value, None if r.witness is None else r.witness.to_dict())


def _graph(spec: str, g1, g2, expected: str) -> Claim:
    r = distinguish_graph_level(spec, g1, g2)
    return Claim(f"{spec} graph-level", expected, r.verdict.value, None if r.witness is None else r.witness.to_dict())


def _count(spec: str, corpus, pattern: str, size: int, expected: str, corpus_name: str) -> Claim:
    res = can_count(spec, corpus, CountQuery(Pattern(pattern), size))
    out = res.to_dict()
    witness = {"counterexample": out["counterexample"]} if "counterexample" in out else None
    return Claim(f"can-count {spec} {pattern} {size} on {corpus_name}", expected, res.verdict, witness)


def _fact(label: str, expected, observed, witness: dict | None = None) -> Claim:
    return Claim(label, str(expected).lower() if isinstance(expected, bool) else str(expected),
                 str(observed).lower() if isinstance(observed, bool) else str(observed), witness)


def _rooted(g: Graph, root: int = 0) -> RootedGraph:
    return RootedGraph(g, root)


def _cll(l: int) -> tuple[RootedGraph, RootedGraph]:
    return gen_cll_vs_c2l(l)


# ---------------------------------------------------------------------------
# individual theorems

def _fmt_census(c) -> str:
    return "; ".join(f"{u}|{','.join(map(str, s))}x{n}" for (u, s), n in sorted(c.items()))


def thm1(p: dict, small: bool) -> list[Claim]:
    """Markings beat removals: the mark-versus-removal pair."""
    a, b = gen_markdrop_pair()
    k, d = int(p.get("k", 2)), int(p.get("d", 2))
    deg = [degree_profile(x) for x in (a, b)]
    fmt = ["{}/{}".format(r, "/".join(f"{deg_}x{n}" for deg_, n in sorted(h.items(), reverse=True))) for r, h in deg]
    claims = [_fact("degree profile (root/degree x count)", "14/4x14/1x10", fmt[0] if fmt[0] == fmt[1] else " vs ".join(fmt))]
    one = [removal_census(x, 1) for x in (a, b)]
    expected_one = "0|1x10; 1|1,1x10; 1|1,1,1x4"
    obs = _fmt_census(one[0]) if one[0] == one[1] else " vs ".join(map(_fmt_census, one))
    claims.append(_fact("one-removal signature census (24 runs)", expected_one, obs))
    two = [removal_census(x, 2) for x in (a, b)]
    claims.append(_fact("two-removal signature census equal", True, two[0] == two[1], {"runs": sum(two[0].values())}))
    claims.append(_node(f"R:{k}:d={d}", a, b, INSEP))
    claims.append(_node(f"M:{k}:d={d}", a, b, SEP))
    return claims


def thm2(p: dict, small: bool) -> list[Claim]:
    """Marked refinement equals separate marked/unmarked aggregation."""
    max_n = int(p.get("max_n", 5 if small else 6))
    rounds = int(p.get("d", 3))
    mismatches, runs = 0, 0
    for g in connected_graphs(max_n):
        for size in range(3):
            for marked in combinations(range(g.node_count), size):
                table = ColorTable()
                init = initial_coloring(g, table)
                ref = split_aggregation_refine(g, marked, rounds)
                for r in range(rounds + 1):
                    runs += 1
                    if marked_refine(g, marked, init, r).partition() != ref[r]:
                        mismatches += 1
    return [_fact(f"marked refinement partitions == split aggregation (graphs <= {max_n} nodes)", 0, mismatches, {"runs": runs})]


def thm3(p: dict, small: bool) -> list[Claim]:
    """C_{l,l} + apex versus C_{2l} + apex."""
    l, k, d = int(p.get("l", 5)), int(p.get("k", 2)), int(p.get("d", 2))
    a, b = _cll(l)
    return [
        _node(f"N:1:d={d}", a, b, SEP),
        _node("KFWL:2", a, b, SEP),
        _node(f"S:{l}:d={d}", a, b, INSEP),
        _node(f"M:{k}:d={d}", a, b, INSEP),
    ]


def thm4(p: dict, small: bool) -> list[Claim]:
    """N_1 beats k-FWL on the apexed CFI pair."""
    n0, k = int(p.get("n0", 8)), int(p.get("k", 2))
    g1, g2 = gen_cfi_pair(gen_base_3regular(n0))
    a, b = apex_join(g1), apex_join(g2)
    return [_node("N:1:d=2", a, b, SEP), _node(f"KFWL:{k}", a, b, INSEP)]


def thm5(p: dict, small: bool) -> list[Claim]:
    """C_{2k+2} versus C_{2k+3} with d = k+1."""
    k = int(p.get("k", 2))
    d = int(p.get("d", k + 1))
    g1, g2 = gen_cycle_pair(k)
    a, b = _rooted(g1), _rooted(g2)
    return [
        _node(f"M:1:d={d}", a, b, SEP),
        _node(f"N:{k}:d={d}", a, b, INSEP),
        _node(f"S:{2 * k + 1}:d={d}", a, b, INSEP),
        _node("KFWL:2", a, b, SEP),
    ]


def _all_roots_kfwl(g1: Graph, g2: Graph, k: int) -> Claim:
    c1, c2 = kfwl_joint([g1, g2], k, STABLE, ColorTable())
    seps = sum(1 for u in range(g1.node_count) for v in range(g2.node_count) if c1.diagonal(u) != c2.diagonal(v))
    pairs = g1.node_count * g2.node_count
    return Claim(f"KFWL:{k} all {pairs} root pairs", INSEP, SEP if seps else INSEP, {"separated_pairs": seps} if seps else None)


def thm6(p: dict, small: bool) -> list[Claim]:
    """M_2 beats 2-FWL on Rook 4x4 versus Shrikhande."""
    r, s = gen_rook44(), gen_shrikhande()
    d = int(p.get("d", 2))
    return [_all_roots_kfwl(r, s, 2), _node(f"M:2:d={d}", _rooted(r), _rooted(s), SEP)]


def thm7(p: dict, small: bool) -> list[Claim]:
    """S_{k+2} contained in N_k; S_{k+3} beats N_k."""
    k = int(p.get("k", 1))
    d = int(p.get("d", k + 1))
    max_n = int(p.get("max_n", 6 if small else 7))
    corpus = connected_graphs(max_n)
    table = ColorTable()
    n_cols = final_node_colors(ExtensionSpec.parse(f"N:{k}:d={d}"), corpus, table)
    s_cols = final_node_colors(ExtensionSpec.parse(f"S:{k + 2}:d={d}"), corpus, table)
    by: dict[int, list[tuple[int, int, int]]] = {}
    for gi, g in enumerate(corpus):
        for v in range(g.node_count):
            by.setdefault(int(n_cols[gi][v]), []).append((gi, v, int(s_cols[gi][v])))
    violations, example = 0, None
    for members in by.values():
        for x, y in combinations(members, 2):
            if x[2] != y[2]:
                violations += 1
                if example is None:
                    example = {
                        "first": {"edges": corpus[x[0]].sorted_edges(), "node": x[1]},
                        "second": {"edges": corpus[y[0]].sorted_edges(), "node": y[1]},
                    }
    claims = [_fact(f"equal N:{k}:d={d} color => equal S:{k + 2}:d={d} color (connected graphs <= {max_n} nodes): violations", 0, violations, example)]
    a, b = gen_swl_pair(k)
    dd = int(p.get("d_sep", k + 3))
    claims.append(_node(f"N:{k}:d={dd}", a, b, INSEP))
    claims.append(_node(f"S:{k + 3}:d={dd}", a, b, SEP))
    return claims


def _s3_census(g: Graph, u: int) -> tuple[int, int]:
    """(triangles, induced 3-paths) through u from the subgraph census."""
    found = connected_induced_subgraphs_at(g, u, 3)
    tri = certificate(complete_graph(3))
    path = certificate(path_graph(3))
    return found.get(tri, 0), found.get(path, 0)


def _brute_s3(g: Graph, u: int) -> tuple[int, int]:
    tri = path = 0
    adj = g.adj_sets
    for a, b in combinations([v for v in range(g.node_count) if v != u], 2):
        e = (b in adj[a]) + (u in adj[a]) + (u in adj[b])
        if e == 3:
            tri += 1
        elif e == 2:
            path += 1
    return tri, path


def thm8(p: dict, small: bool) -> list[Claim]:
    """S_4 beats 2-FWL on Rook 4x4 versus Shrikhande; S_3 does not."""
    r, s = gen_rook44(), gen_shrikhande()
    d = int(p.get("d", 2))
    a, b = _rooted(r), _rooted(s)
    census = [_s3_census(g, 0) for g in (r, s)]
    brute = [_brute_s3(g, 0) for g in (r, s)]
    k4 = [incident_count(g, 0, CountQuery(Pattern.CLIQUE, 4)) for g in (r, s)]
    return [
        _all_roots_kfwl(r, s, 2),
        _node(f"S:4:d={d}", a, b, SEP),
        _node(f"S:3:d={d}", a, b, INSEP),
        _fact("S_3 census (triangles, 3-paths) rook == shrikhande == brute force", True,
              census[0] == census[1] == brute[0] == brute[1], {"census": census, "brute_force": brute}),
        _fact("incident 4-cliques rook/shrikhande", "2/0", f"{k4[0]}/{k4[1]}"),
    ]


def thm9(p: dict, small: bool) -> list[Claim]:
    """S_{2k+2} beats M_k on C_{l,l} + apex versus C_{2l} + apex, l = 2k+1."""
    k = int(p.get("k", 1))
    l = int(p.get("l", 2 * k + 1))
    d = int(p.get("d", 2))
    a, b = _cll(l)
    claims = [_node(f"M:{k}:d={d}", a, b, INSEP), _node(f"S:{2 * k + 2}:d={d}", a, b, SEP)]
    if l == 3:
        k4 = [incident_count(x.graph, x.root, CountQuery(Pattern.CLIQUE, 4)) for x in (a, b)]
        claims.append(_fact("root incident 4-cliques", "2/0", f"{k4[0]}/{k4[1]}"))
    return claims


def thm10(p: dict, small: bool) -> list[Claim]:
    """CFI pair: non-isomorphic, yet 1-WL, 2-FWL and small markings agree."""
    n0 = int(p.get("n0", 8))
    base = gen_base_3regular(n0)
    g1, g2 = gen_cfi_pair(base)
    diam = max(g1.eccentricity(v) for v in range(g1.node_count))
    d = int(p.get("d", diam))
    twisted = {certificate(cfi_graph(base, {e})[0]) for e in base.sorted_edges()}
    claims = [
        _fact("certificates differ (non-isomorphic)", True, certificate(g1) != certificate(g2)),
        _fact(f"twist mobility: all {base.edge_count} single twists isomorphic", True,
              len(twisted) == 1 and certificate(g2) in twisted),
        _graph("WL1:d=stable", g1, g2, INSEP),
        _graph("KFWL:2", g1, g2, INSEP),
        _node(f"M:1:d={d}", _rooted(g1), _rooted(g2), INSEP),
        _node(f"M:2:d={d}", _rooted(g1), _rooted(g2), INSEP),
    ]
    return claims


def _apexed_c33() -> list[Graph]:
    a, b = _cll(3)
    return [a.graph, b.graph]


def thm11(p: dict, small: bool) -> list[Claim]:
    """S_k counts k-cliques and k-cycles but not (k+1)-cycles."""
    wl1 = list(gen_wl1_pair())
    c4c5 = list(gen_cycle_pair(1))
    claims = [
        _count("S:3:d=2", wl1 + c4c5, "CLIQUE", 3, WD, "wl1 pair + C4/C5"),
        _count("S:3:d=2", wl1 + c4c5, "INDUCED_CYCLE", 3, WD, "wl1 pair + C4/C5"),
        _count("S:3:d=2", c4c5, "INDUCED_CYCLE", 4, CE, "C4/C5"),
    ]
    for k in (3, 4):
        pair = [cycle_graph(k + 1), cycle_graph(k + 2)]
        claims.append(_count(f"S:{k}:d={k - 1}", pair, "INDUCED_CYCLE", k + 1, CE, f"C{k + 1}/C{k + 2}"))
    return claims


def thm12(p: dict, small: bool) -> list[Claim]:
    """N_1 counts cliques; N_k counts (2k+1)- but not (2k+2)-cycles."""
    rs = [gen_rook44(), gen_shrikhande()]
    return [
        _count("N:1:d=2", rs, "CLIQUE", 4, WD, "rook + shrikhande"),
        _count("N:1:d=2", _apexed_c33() + list(gen_wl1_pair()), "CLIQUE", 3, WD, "apexed C3,3/C6 + wl1 pair"),
        _count("N:2:d=3", [cycle_graph(5), cycle_graph(6), cycle_graph(7)], "INDUCED_CYCLE", 5, WD, "C5/C6/C7"),
        _count("N:2:d=3", [cycle_graph(6), cycle_graph(7)], "INDUCED_CYCLE", 6, CE, "C6/C7"),
    ]


def thm13(p: dict, small: bool) -> list[Claim]:
    """M_k counts (k+2)-cliques; tight for k = 0, 1."""
    rs = [gen_rook44(), gen_shrikhande()]
    return [
        _count("M:2:d=3", rs, "CLIQUE", 4, WD, "rook + shrikhande"),
        _count("M:0:d=2", list(gen_wl1_pair()), "CLIQUE", 3, CE, "wl1 pair"),
        _count("M:1:d=2", _apexed_c33(), "CLIQUE", 4, CE, "apexed C3,3/C6"),
    ]


def thm14(p: dict, small: bool) -> list[Claim]:
    """M_k counts (k+1)-cycles once d >= k+1."""
    corpus = list(gen_wl1_pair()) + _apexed_c33() + list(gen_cycle_pair(1))
    return [
        _count("M:2:d=3", corpus, "INDUCED_CYCLE", 3, WD, "wl1 pair + apexed C3,3/C6 + C4/C5"),
        _count("M:3:d=4", corpus, "INDUCED_CYCLE", 4, WD, "wl1 pair + apexed C3,3/C6 + C4/C5"),
    ]


def g_copy(p: dict, small: bool) -> list[Claim]:
    """Graph-level cycle pair: l2 copies of C_l1 versus l1 copies of C_l2."""
    l1, l2 = int(p.get("l1", 6)), int(p.get("l2", 7))
    d = int(p.get("d", 3))
    g1, g2 = gen_copy_pair(l1, l2)
    return [_graph(f"S:{l1 - 1}:d={d}", g1, g2, INSEP), _graph(f"M:1:d={d}", g1, g2, SEP)]


def g_cll(p: dict, small: bool) -> list[Claim]:
    """Graph-level C_{l,l} + apex versus C_{2l} + apex."""
    l, d = int(p.get("l", 7)), int(p.get("d", 3))
    a, b = _cll(l)
    return [_graph(f"M:2:d={d}", a.graph, b.graph, INSEP), _graph(f"S:{l - 1}:d={d}", a.graph, b.graph, INSEP)]


THEOREMS: dict[str, Callable[[dict, bool], list[Claim]]] = {
    "thm1": thm1,
    "thm2": thm2,
    "thm3": thm3,
    "thm4": thm4,
    "thm5": thm5,
    "thm6": thm6,
    "thm7": thm7,
    "thm8": thm8,
    "thm9": thm9,
    "thm10": thm10,
    "thm11": thm11,
    "thm12": thm12,
    "thm13": thm13,
    "thm14": thm14,
    "g-copy": g_copy,
    "g-cll": g_cll,
}


def theorem_ids() -> list[str]:
    return list(THEOREMS)


def run_theorem(theorem: str, params: dict | None = None, small: bool = True, timing: bool = True) -> dict:
    """Run one reproduction and return its report (claims may fail)."""
    key = theorem.lower()
    if key not in THEOREMS:
        raise KeyError(f"unknown theorem {theorem!r}; known: {', '.join(THEOREMS)}")
    params = dict(params or {})
    t0 = time.perf_counter()
    claims = THEOREMS[key](params, small)
    ms = round((time.perf_counter() - t0) * 1000, 1)
    return {
        "theorem": key,
        "params": params,
        "claims": [c.to_dict() for c in claims],
        "runtime_ms": ms if timing else None,
    }


def report_ok(report: dict) -> bool:
    return all(c["expected"] == c["observed"] for c in report["claims"])


def reproduce_theorem(theorem: str, params: dict | None = None, small: bool = True, timing: bool = True) -> dict:
    """Like :func:`run_theorem` but raises :class:`ClaimAssertionError`
    naming the violated claims."""
    report = run_theorem(theorem, params, small, timing)
    if not report_ok(report):
        raise ClaimAssertionError(report)
    return report


def _job(args) -> dict:
    return run_theorem(*args)


def run_many(theorems: list[str], params: dict | None = None, small: bool = True,
             timing: bool = True, jobs: int = 1) -> list[dict]:
    """Reports in the order given, optionally computed in worker processes."""
    tasks = [(t, params, small, timing) for t in theorems]
    if jobs <= 1 or len(tasks) <= 1:
        return [_job(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_job, tasks))
