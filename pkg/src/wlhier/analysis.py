"""Distinguishability and counting oracles over the extension hierarchies."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Sequence

import numpy as np

from wlhier.extensions import (
    ExtensionSpec,
    Kind,
    _extended_history,
    extended_node_colors,
    feature_coloring,
    first_profile_difference,
    mk_node_colors,
    mk_run_profile,
)
from wlhier.graph import Graph, RootedGraph, disjoint_union
from wlhier.refinement import (
    STABLE,
    BudgetExceeded,
    ColorTable,
    initial_coloring,
    kfwl_joint,
    refine,
    refine_history,
)


class Verdict(str, Enum):
    SEPARATED = "SEPARATED"
    INSEPARABLE = "INSEPARABLE"


class Level(str, Enum):
    NODE = "NODE"
    GRAPH = "GRAPH"


@dataclass(frozen=True)
class Witness:
    """Where two color objects first diverge."""

    round: int | None = None
    k_prime: int | None = None
    detail: str | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in (("round", self.round), ("k_prime", self.k_prime), ("detail", self.detail)) if v is not None}


@dataclass(frozen=True)
class DistinguishReport:
    verdict: Verdict
    spec: ExtensionSpec
    level: Level
    witness: Witness | None = None

    @property
    def separated(self) -> bool:
        return self.verdict is Verdict.SEPARATED

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "spec": str(self.spec),
            "level": self.level.value,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }


def _report(spec, level, witness: Witness | None) -> DistinguishReport:
    verdict = Verdict.SEPARATED if witness is not None else Verdict.INSEPARABLE
    return DistinguishReport(verdict, spec, level, witness)


def _first_diff(h1: Sequence, h2: Sequence) -> int | None:
    for r, (a, b) in enumerate(zip(h1, h2)):
        if a != b:
            return r
    return None


def _kfwl_rooted(spec: ExtensionSpec, rg1: RootedGraph, rg2: RootedGraph, table: ColorTable, budget) -> Witness | None:
    c1, c2 = kfwl_joint([rg1.graph, rg2.graph], spec.k, STABLE, table, budget)
    if c1.diagonal(rg1.root) != c2.diagonal(rg2.root):
        return Witness(round=c1.rounds, detail="diagonal tuple color")
    return None


def _stable_rooted(rg1: RootedGraph, rg2: RootedGraph, table: ColorTable) -> Witness | None:
    union = disjoint_union([rg1.graph, rg2.graph])
    init = initial_coloring(union, table)
    done = refine(union, init, STABLE).rounds
    hist = refine_history(union, init, done)
    r2 = rg1.graph.node_count + rg2.root
    r = _first_diff([h[rg1.root] for h in hist], [h[r2] for h in hist])
    return None if r is None else Witness(round=r)


def distinguish(
    spec: ExtensionSpec | str,
    rg1: RootedGraph,
    rg2: RootedGraph,
    table: ColorTable | None = None,
    run_cap: int | None = None,
    budget: int | None = None,
) -> DistinguishReport:
    """Node-level comparison of two rooted graphs under one extension."""
    spec = ExtensionSpec.parse(spec) if isinstance(spec, str) else spec
    spec.check(rg1.graph, rg1.root)
    spec.check(rg2.graph, rg2.root)
    table = ColorTable() if table is None else table
    if spec.kind is Kind.KFWL:
        w = _kfwl_rooted(spec, rg1, rg2, table, budget)
    elif spec.kind is Kind.WL1 and spec.d is None:
        w = _stable_rooted(rg1, rg2, table)
    elif spec.kind in (Kind.MK, Kind.RK):
        p1 = mk_run_profile(rg1.graph, rg1.root, spec.d, spec.k, spec.mode, table, run_cap)
        p2 = mk_run_profile(rg2.graph, rg2.root, spec.d, spec.k, spec.mode, table, run_cap)
        kp = first_profile_difference(p1, p2)
        w = None if kp is None else Witness(k_prime=kp)
    else:
        r = _first_diff(_extended_history(spec, rg1, table), _extended_history(spec, rg2, table))
        w = None
        if r is not None:
            w = Witness(round=r, detail="root feature" if r == 0 and spec.kind in (Kind.SK, Kind.NK) else None)
    return _report(spec, Level.NODE, w)


def _union_history(spec: ExtensionSpec, g1: Graph, g2: Graph, table: ColorTable) -> Witness | None:
    union = disjoint_union([g1, g2])
    n1 = g1.node_count
    if spec.kind is Kind.WL1:
        init = initial_coloring(union, table)
    else:
        init = feature_coloring(spec, union, table)
    rounds = spec.d if spec.d is not None else refine(union, init, STABLE).rounds
    for r, cols in enumerate(refine_history(union, init, rounds)):
        if Counter(cols[:n1].tolist()) != Counter(cols[n1:].tolist()):
            return Witness(round=r)
    return None


def _mk_graph_witness(spec: ExtensionSpec, g1: Graph, g2: Graph, table: ColorTable, run_cap) -> Witness | None:
    profs = [
        [mk_run_profile(g, v, spec.d, spec.k, spec.mode, table, run_cap) for v in range(g.node_count)]
        for g in (g1, g2)
    ]
    for kp in range(spec.k + 1):
        # multiset of per-node profiles truncated at k'
        ms = [
            Counter(tuple(tuple(sorted(p[j].items())) for j in range(kp + 1)) for p in ps)
            for ps in profs
        ]
        if ms[0] != ms[1]:
            return Witness(k_prime=kp)
    return None


def distinguish_graph_level(
    spec: ExtensionSpec | str,
    g1: Graph,
    g2: Graph,
    table: ColorTable | None = None,
    run_cap: int | None = None,
    budget: int | None = None,
) -> DistinguishReport:
    """Graph-level comparison: readout is the multiset of final node colors
    (stable tuple colors for k-FWL, per-node run profiles for M_k / R_k)."""
    spec = ExtensionSpec.parse(spec) if isinstance(spec, str) else spec
    spec.check(g1)
    spec.check(g2)
    table = ColorTable() if table is None else table
    if g1.node_count != g2.node_count:
        return _report(spec, Level.GRAPH, Witness(round=0, detail="node counts differ"))
    if spec.kind is Kind.KFWL:
        c1, c2 = kfwl_joint([g1, g2], spec.k, STABLE, table, budget)
        w = None if c1.histogram() == c2.histogram() else Witness(round=c1.rounds)
    elif spec.kind in (Kind.MK, Kind.RK):
        w = _mk_graph_witness(spec, g1, g2, table, run_cap)
    else:
        w = _union_history(spec, g1, g2, table)
    return _report(spec, Level.GRAPH, w)


# ---------------------------------------------------------------------------
# counting

MAX_PATTERN = 8
MAX_POOL = 64


class Pattern(str, Enum):
    CLIQUE = "CLIQUE"
    INDUCED_CYCLE = "INDUCED_CYCLE"


@dataclass(frozen=True)
class CountQuery:
    pattern: Pattern
    size: int

    def __post_init__(self):
        object.__setattr__(self, "pattern", Pattern(self.pattern))
        if self.size < 3:
            raise ValueError("pattern size must be at least 3")

    def __str__(self) -> str:
        return f"{self.pattern.value} {self.size}"


def _is_cycle(g: Graph, nodes: tuple[int, ...]) -> bool:
    adj = g.adj_sets
    s = set(nodes)
    if any(len(adj[v] & s) != 2 for v in nodes):
        return False
    # 2-regular: a single cycle iff connected
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        for w in adj[stack.pop()] & s:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(s)


def incident_count(g: Graph, u: int, q: CountQuery) -> int:
    """Exhaustive count of l-cliques or induced l-cycles that contain ``u``."""
    ell = q.size
    if ell > MAX_PATTERN:
        raise BudgetExceeded(f"pattern size {ell} exceeds {MAX_PATTERN}")
    adj = g.adj_sets
    if q.pattern is Pattern.CLIQUE:
        pool = sorted(adj[u])
        if len(pool) > MAX_POOL:
            raise BudgetExceeded(f"{len(pool)} candidate nodes exceed {MAX_POOL}")
        return sum(
            1
            for s in combinations(pool, ell - 1)
            if all(b in adj[a] for a, b in combinations(s, 2))
        )
    dist = g.distances(u)
    pool = [v for v in range(g.node_count) if v != u and 0 <= dist[v] <= ell // 2]
    if len(pool) > MAX_POOL:
        raise BudgetExceeded(f"{len(pool)} candidate nodes exceed {MAX_POOL}")
    return sum(1 for s in combinations(pool, ell - 1) if _is_cycle(g, (u,) + s))


@dataclass(frozen=True)
class CanCountResult:
    """WELL_DEFINED, or the first pair of nodes (graph index, node, count)
    sharing a final color with different incident counts."""

    well_defined: bool
    counterexample: tuple[tuple[int, int, int], tuple[int, int, int]] | None = None

    @property
    def verdict(self) -> str:
        return "WELL_DEFINED" if self.well_defined else "COUNTEREXAMPLE"

    def to_dict(self) -> dict:
        out: dict = {"verdict": self.verdict}
        if self.counterexample:
            out["counterexample"] = [dict(zip(("graph", "node", "count"), x)) for x in self.counterexample]
        return out


def final_node_colors(
    spec: ExtensionSpec,
    corpus: Sequence[Graph],
    table: ColorTable,
    run_cap: int | None = None,
    budget: int | None = None,
) -> list[np.ndarray]:
    """Every node's maximally refined color under ``spec``, one shared table."""
    if spec.kind is Kind.KFWL:
        cols = kfwl_joint(list(corpus), spec.k, STABLE, table, budget)
        return [np.array([c.diagonal(v) for v in range(c.n)], dtype=np.int64) for c in cols]
    if spec.kind is Kind.WL1 and spec.d is None:
        union = disjoint_union(list(corpus))
        col = refine(union, initial_coloring(union, table), STABLE).colors
        out, off = [], 0
        for g in corpus:
            out.append(col[off : off + g.node_count])
            off += g.node_count
        return out
    if spec.kind in (Kind.MK, Kind.RK):
        return [mk_node_colors(spec, g, table, run_cap) for g in corpus]
    return [extended_node_colors(spec, g, table) for g in corpus]


def can_count(
    spec: ExtensionSpec | str,
    corpus: Sequence[Graph],
    q: CountQuery,
    run_cap: int | None = None,
    budget: int | None = None,
) -> CanCountResult:
    """Does the final color determine the incident count on this corpus?"""
    spec = ExtensionSpec.parse(spec) if isinstance(spec, str) else spec
    for g in corpus:
        spec.check(g)
    table = ColorTable()
    colors = final_node_colors(spec, corpus, table, run_cap, budget)
    first: dict[int, tuple[int, int, int]] = {}
    for gi, g in enumerate(corpus):
        for v in range(g.node_count):
            c = int(colors[gi][v])
            cnt = incident_count(g, v, q)
            prev = first.get(c)
            if prev is None:
                first[c] = (gi, v, cnt)
            elif prev[2] != cnt:
                return CanCountResult(False, (prev, (gi, v, cnt)))
    return CanCountResult(True)


# ---------------------------------------------------------------------------
# removal signatures

def degree_profile(rg: RootedGraph) -> tuple[int, dict[int, int]]:
    """Root degree and the degree histogram of the other nodes."""
    g = rg.graph
    rest = Counter(g.degree(v) for v in range(g.node_count) if v != rg.root)
    return g.degree(rg.root), dict(sorted(rest.items()))


def removal_signature(rg: RootedGraph, removed: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """(drop in root degree, sorted positive degree drops among the root's
    surviving neighbors): what two rounds of refinement from a uniform start
    can tell the root about a removal."""
    g, u = rg.graph, rg.root
    gone = set(removed)
    if u in gone:
        raise ValueError("the root is not removable here")
    drops = []
    for w in g.adj_sets[u] - gone:
        lost = len(g.adj_sets[w] & gone)
        if lost:
            drops.append(lost)
    return len(g.adj_sets[u] & gone), tuple(sorted(drops, reverse=True))


def removal_census(rg: RootedGraph, size: int) -> Counter:
    """Counter of removal signatures over all ``size``-subsets avoiding the root."""
    others = [v for v in range(rg.graph.node_count) if v != rg.root]
    return Counter(removal_signature(rg, s) for s in combinations(others, size))


# ---------------------------------------------------------------------------
# separate-aggregation reference for marked refinement

def split_aggregation_refine(g: Graph, marked, rounds: int) -> list[frozenset[frozenset[int]]]:
    """Partitions after each round when every node keeps (marked bit, color,
    marked-neighbor multiset, unmarked-neighbor multiset); plain dicts only."""
    mset = set(marked)
    adj = g.adj
    cols = {v: (v in mset, g.node_colors[v]) for v in range(g.node_count)}
    out = []
    for _ in range(rounds + 1):
        groups: dict = {}
        for v, c in cols.items():
            groups.setdefault(c, set()).add(v)
        out.append(frozenset(frozenset(s) for s in groups.values()))
        table: dict = {}
        nxt = {}
        for v in range(g.node_count):
            key = (
                v in mset,
                cols[v],
                tuple(sorted((cols[w] for w in adj[v] if w in mset), key=repr)),
                tuple(sorted((cols[w] for w in adj[v] if w not in mset), key=repr)),
            )
            nxt[v] = table.setdefault(key, len(table))
        cols = nxt
    return out
