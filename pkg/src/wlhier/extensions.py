"""The extension hierarchies as refinement machinery.

* S_k: per-node counts of connected induced subgraphs (by isomorphism
  class) on at most k nodes containing the node.
* N_k: per-node rooted certificate of the induced radius-k neighborhood.
* M_k / R_k: runs over every set of at most k nodes of the root's d-hop
  neighborhood, marking (or deleting) the set, refining d rounds and
  collecting the root's colors per run size.
"""

from __future__ import annotations

import os
import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from math import comb

import numpy as np

from wlhier.canonical import (
    Certificate,
    certificate,
    connected_sets_containing,
    subset_certificate,
)
from wlhier.graph import (
    Graph,
    RootedGraph,
    induced_radius_neighborhood,
    message_passing_neighborhood,
)
from wlhier.refinement import (
    ColorTable,
    Coloring,
    initial_coloring,
    refine,
    refine_history,
)

DEFAULT_RUN_CAP = int(float(os.environ.get("WLHIER_RUN_CAP", "2e6")))


class SpecViolation(ValueError):
    pass


class CombinatorialBudgetExceeded(RuntimeError):
    pass


class Kind(str, Enum):
    WL1 = "WL1"
    KFWL = "KFWL"
    SK = "S"
    NK = "N"
    MK = "M"
    RK = "R"


class Mode(str, Enum):
    MARK = "mark"
    REMOVE = "remove"


_ALIASES = {
    "WL1": Kind.WL1, "WL": Kind.WL1, "1WL": Kind.WL1,
    "KFWL": Kind.KFWL, "FWL": Kind.KFWL,
    "S": Kind.SK, "SK": Kind.SK,
    "N": Kind.NK, "NK": Kind.NK,
    "M": Kind.MK, "MK": Kind.MK,
    "R": Kind.RK, "RK": Kind.RK,
}


@dataclass(frozen=True)
class ExtensionSpec:
    """Which hierarchy, its parameter ``k`` and the message-passing depth
    ``d`` (``None`` means refine to stability, only meaningful for WL1 and
    KFWL)."""

    kind: Kind
    k: int = 0
    d: int | None = 2

    @property
    def mode(self) -> Mode | None:
        if self.kind is Kind.MK:
            return Mode.MARK
        if self.kind is Kind.RK:
            return Mode.REMOVE
        return None

    def with_mode(self, mode: Mode | str) -> "ExtensionSpec":
        if self.kind not in (Kind.MK, Kind.RK):
            raise SpecViolation("mode only applies to marking runs")
        kind = Kind.RK if Mode(mode) is Mode.REMOVE else Kind.MK
        return ExtensionSpec(kind, self.k, self.d)

    @classmethod
    def parse(cls, text: str) -> "ExtensionSpec":
        """Parse ``KIND:k:d=D[:mode]``, e.g. ``M:2:d=2:remove`` or ``KFWL:2``."""
        parts = [p.strip() for p in text.strip().split(":") if p.strip()]
        if not parts or parts[0].upper() not in _ALIASES:
            raise SpecViolation(f"unknown extension kind in {text!r}")
        kind = _ALIASES[parts[0].upper()]
        k, d, mode = 0, (None if kind is Kind.KFWL else 2), None
        for p in parts[1:]:
            m = re.fullmatch(r"d=(\d+|stable)", p, re.I)
            if m:
                d = None if m.group(1).lower() == "stable" else int(m.group(1))
            elif p.isdigit():
                k = int(p)
            elif p.lower() in ("mark", "remove"):
                mode = p.lower()
            else:
                raise SpecViolation(f"cannot parse {p!r} in {text!r}")
        if kind is Kind.KFWL and k == 0:
            k = 2
        spec = cls(kind, k, d)
        return spec.with_mode(mode) if mode else spec

    def __str__(self) -> str:
        d = "stable" if self.d is None else str(self.d)
        if self.kind is Kind.WL1:
            return f"WL1:d={d}"
        if self.kind is Kind.KFWL:
            return f"KFWL:{self.k}"
        return f"{self.kind.value}:{self.k}:d={d}"

    def check(self, g: Graph | None = None, u: int | None = None) -> None:
        """Raise :class:`SpecViolation` if the spec is unusable for the
        d-hop neighborhood of ``u`` (or every node when ``u`` is None)."""
        if self.k < 0:
            raise SpecViolation("k must be non-negative")
        if self.kind is Kind.KFWL:
            if self.k < 1:
                raise SpecViolation("k-FWL needs k >= 1")
            return
        if self.d is None:
            if self.kind is not Kind.WL1:
                raise SpecViolation(f"{self.kind.value} needs a finite depth d")
            return
        if self.d < 0:
            raise SpecViolation("d must be non-negative")
        if self.kind is Kind.NK and not self.k < self.d:
            raise SpecViolation(f"N_k needs k < d (k={self.k}, d={self.d})")
        if self.kind in (Kind.MK, Kind.RK) and self.d < 1:
            raise SpecViolation("marking runs need d >= 1")
        if self.kind is Kind.SK:
            if self.k < 1:
                raise SpecViolation("S_k needs k >= 1")
            if self.k > self.d + 1 and g is not None:
                nodes = range(g.node_count) if u is None else _within(g, u, self.d)
                for v in nodes:
                    if g.eccentricity(v) > self.d:
                        raise SpecViolation(
                            f"S_{self.k} with d={self.d}: node {v} sees subgraphs beyond its "
                            "d-hop neighborhood (need k <= d+1 or the component within d hops)"
                        )


def _within(g: Graph, u: int, d: int) -> list[int]:
    dist = g.distances(u)
    return [v for v in range(g.node_count) if 0 <= dist[v] <= d]


# ---------------------------------------------------------------------------
# S_k and N_k features

def sk_features(g: Graph, u: int, k: int) -> Counter:
    """Counter keyed by ``(size, Certificate)``; absent classes count 0."""
    if k < 1:
        raise ValueError("k must be at least 1")
    out: Counter = Counter()
    for s in connected_sets_containing(g, u, k):
        out[(len(s), subset_certificate(g, s))] += 1
    return out


def nk_feature(g: Graph, u: int, k: int) -> Certificate:
    rg = induced_radius_neighborhood(g, u, k)
    return certificate(rg.graph, rg.root)


def _feature_key(spec: ExtensionSpec, g: Graph, v: int):
    if spec.kind is Kind.SK:
        feats = sk_features(g, v, spec.k)
        return ("S", g.node_colors[v], tuple(sorted((s, c.data, n) for (s, c), n in feats.items())))
    if spec.kind is Kind.NK:
        return ("N", g.node_colors[v], nk_feature(g, v, spec.k).data)
    return ("node", g.node_colors[v])


def feature_coloring(spec: ExtensionSpec, g: Graph, table: ColorTable, nodes=None) -> Coloring:
    """Initial coloring that interns (original color, extension feature);
    ``nodes`` restricts which nodes are computed (others stay -1)."""
    nodes = range(g.node_count) if nodes is None else nodes
    cols = np.full(g.node_count, -1, dtype=np.int64)
    for v in nodes:
        cols[v] = table.intern(_feature_key(spec, g, v))
    return Coloring(cols, table)


def _extended_history(spec: ExtensionSpec, rg: RootedGraph, table: ColorTable) -> list[int]:
    if spec.kind not in (Kind.SK, Kind.NK, Kind.WL1):
        raise SpecViolation(f"{spec.kind.value} has no extended feature coloring")
    if spec.d is None:
        raise SpecViolation("extended colors need a finite depth")
    spec.check(rg.graph, rg.root)
    g, d = rg.graph, spec.d
    # features come from the full graph; refinement sees only the d-hop view
    sub = message_passing_neighborhood(g, rg.root, d)
    order = sorted(sub.mapping, key=sub.mapping.__getitem__)
    full = feature_coloring(spec, g, table, order)
    local = Coloring(full.colors[order], table)
    return [int(c[sub.root]) for c in refine_history(sub.graph, local, d)]


def extended_rooted_color(spec: ExtensionSpec, rg: RootedGraph, table: ColorTable | None = None) -> int:
    """Root color after ``spec.d`` rounds with S_k / N_k features added."""
    return _extended_history(spec, rg, table if table is not None else ColorTable())[-1]


def extended_node_colors(spec: ExtensionSpec, g: Graph, table: ColorTable) -> np.ndarray:
    """Every node's d-round extended color (whole-graph refinement)."""
    spec.check(g)
    return refine(g, feature_coloring(spec, g, table), spec.d).colors


# ---------------------------------------------------------------------------
# markings and removals

def _mark_colors(base: np.ndarray, table: ColorTable) -> tuple[np.ndarray, np.ndarray]:
    unmarked = np.array([table.intern(("mark", 0, int(c))) for c in base], dtype=np.int64)
    marked = np.array([table.intern(("mark", 1, int(c))) for c in base], dtype=np.int64)
    return unmarked, marked


def marked_refine(g: Graph, marked, init: Coloring | None = None, rounds=2) -> Coloring:
    """Refinement with marked and unmarked nodes kept apart.

    The marked bit is folded into the initial color, so marked and
    unmarked colors never coincide; a node's multiset of neighbor colors
    then splits unambiguously into its marked and unmarked parts, which is
    the same information as aggregating the two groups separately.
    """
    init = init if init is not None else initial_coloring(g)
    unmarked, marked_c = _mark_colors(init.colors, init.table)
    cols = unmarked.copy()
    idx = list(marked)
    cols[idx] = marked_c[idx]
    return refine(g, Coloring(cols, init.table, init.rounds), rounds)


def root_removed_color(table: ColorTable) -> int:
    return table.intern(("ROOT_REMOVED",))


def count_runs(size: int, k: int) -> int:
    return sum(comb(size, j) for j in range(k + 1))


def mk_run_profile(
    g: Graph,
    u: int,
    d: int,
    k: int,
    mode: Mode | str = Mode.MARK,
    table: ColorTable | None = None,
    run_cap: int | None = None,
    init: Coloring | None = None,
) -> dict[int, Counter]:
    """For each k' <= k, the multiset of root colors over all k'-subsets of
    the d-hop neighborhood, each run refining d rounds on the subgraph
    induced by that neighborhood."""
    if d < 1:
        raise SpecViolation("marking runs need d >= 1")
    mode = Mode(mode)
    table = table if table is not None else (init.table if init is not None else ColorTable())
    cap = DEFAULT_RUN_CAP if run_cap is None else run_cap
    rg = induced_radius_neighborhood(g, u, d)
    h, root = rg.graph, rg.root
    size = h.node_count
    runs = count_runs(size, k)
    if runs > cap:
        raise CombinatorialBudgetExceeded(f"{runs} runs exceed the cap of {cap}")
    if init is not None:
        order = sorted(rg.mapping, key=rg.mapping.__getitem__)
        base = init.colors[order]
    else:
        base = initial_coloring(h, table).colors
    indptr, indices = h.csr
    kernel = table.kernel
    profile: dict[int, Counter] = {}
    if mode is Mode.MARK:
        unmarked, marked = _mark_colors(base, table)
        for kp in range(k + 1):
            counts: Counter = Counter()
            for subset in combinations(range(size), kp):
                cols = unmarked.copy()
                if subset:
                    sel = list(subset)
                    cols[sel] = marked[sel]
                out, _ = kernel.refine(indptr, indices, cols, d, False, None)
                counts[int(out[root])] += 1
            profile[kp] = counts
    else:
        gone = root_removed_color(table)
        for kp in range(k + 1):
            counts = Counter()
            for subset in combinations(range(size), kp):
                if root in subset:
                    counts[gone] += 1
                    continue
                alive = np.ones(size, dtype=np.uint8)
                alive[list(subset)] = 0
                out, _ = kernel.refine(indptr, indices, base, d, False, alive)
                counts[int(out[root])] += 1
            profile[kp] = counts
    return profile


def profile_color(profile: dict[int, Counter], mode: Mode | str, table: ColorTable) -> int:
    key = (
        "profile",
        Mode(mode).value,
        tuple((kp, tuple(sorted(profile[kp].items()))) for kp in sorted(profile)),
    )
    return table.intern(key)


def first_profile_difference(p1: dict[int, Counter], p2: dict[int, Counter]) -> int | None:
    for kp in sorted(set(p1) | set(p2)):
        if p1.get(kp, Counter()) != p2.get(kp, Counter()):
            return kp
    return None


def mk_inseparable(
    rg1: RootedGraph,
    rg2: RootedGraph,
    d: int,
    k: int,
    mode: Mode | str = Mode.MARK,
    table: ColorTable | None = None,
    run_cap: int | None = None,
) -> bool:
    """Equal per-k' multisets of run colors, i.e. a color-preserving
    bijection between the two sets of markings exists."""
    table = ColorTable() if table is None else table
    p1 = mk_run_profile(rg1.graph, rg1.root, d, k, mode, table, run_cap)
    p2 = mk_run_profile(rg2.graph, rg2.root, d, k, mode, table, run_cap)
    return first_profile_difference(p1, p2) is None


def mk_node_colors(spec: ExtensionSpec, g: Graph, table: ColorTable, run_cap: int | None = None) -> np.ndarray:
    """Per-node interned M_k / R_k profile colors."""
    spec.check(g)
    mode = spec.mode
    return np.array(
        [profile_color(mk_run_profile(g, v, spec.d, spec.k, mode, table, run_cap), mode, table)
         for v in range(g.node_count)],
        dtype=np.int64,
    )
