"""Color refinement (1-WL) and folklore k-WL with exact interned colors.

Every color id is the image of a structural key in a :class:`ColorTable`.
Two colorings are comparable exactly when they were produced with the same
table, which is why comparisons always run inside one shared table.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from wlhier.graph import Graph, RootedGraph, disjoint_union, message_passing_neighborhood
from wlhier.kernels import REFINE_TAG, new_interner

STABLE = "stable"

OBJ_TAG = 1
KFWL_INIT_TAG = 2
KFWL_VEC_TAG = 3
KFWL_STEP_TAG = 4

DEFAULT_KFWL_BUDGET = int(float(os.environ.get("WLHIER_KFWL_BUDGET", "1e7")))


class BudgetExceeded(RuntimeError):
    pass


class ColorTable:
    """Interning table shared by every graph taking part in one comparison."""

    def __init__(self, backend: str | None = None) -> None:
        self.kernel = new_interner(backend)
        self._objs: dict[Hashable, int] = {}

    def __len__(self) -> int:
        return self.kernel.size

    def __bool__(self) -> bool:
        # an empty table is still a table; never let `or` swap it out
        return True

    def intern(self, obj: Hashable) -> int:
        """Id for an arbitrary hashable structural key."""
        cid = self._objs.get(obj)
        if cid is None:
            cid = self._objs[obj] = self.kernel.intern((OBJ_TAG, len(self._objs)))
        return cid

    def node_color(self, c: int) -> int:
        return self.intern(("node", c))


@dataclass
class Coloring:
    colors: np.ndarray
    table: ColorTable
    rounds: int = 0

    def __len__(self) -> int:
        return len(self.colors)

    def __getitem__(self, v: int) -> int:
        return int(self.colors[v])

    def num_classes(self) -> int:
        return len(set(self.colors.tolist()))

    def histogram(self) -> Counter:
        return Counter(self.colors.tolist())

    def partition(self) -> frozenset[frozenset[int]]:
        groups: dict[int, set[int]] = {}
        for v, c in enumerate(self.colors.tolist()):
            groups.setdefault(c, set()).add(v)
        return frozenset(frozenset(s) for s in groups.values())


def initial_coloring(g: Graph, table: ColorTable | None = None) -> Coloring:
    """Coloring from the graph's own node colors (uniform when featureless)."""
    table = ColorTable() if table is None else table
    return Coloring(np.array([table.node_color(c) for c in g.node_colors], dtype=np.int64), table)


def _rounds_arg(rounds) -> tuple[int, bool]:
    if rounds == STABLE or rounds is None:
        return -1, True
    if rounds < 0:
        raise ValueError("rounds must be non-negative or STABLE")
    return int(rounds), False


def refine(g: Graph, init: Coloring | None = None, rounds=STABLE, alive=None) -> Coloring:
    """1-WL refinement: a node's next color interns (own color, sorted
    neighbor colors). With ``STABLE`` it stops once the class count no
    longer grows. ``alive`` masks out deleted nodes (they get color -1)."""
    init = init if init is not None else initial_coloring(g)
    if len(init) != g.node_count:
        raise ValueError("initial coloring does not cover the graph")
    r, stable = _rounds_arg(rounds)
    indptr, indices = g.csr
    cols, done = init.table.kernel.refine(indptr, indices, init.colors, r, stable, alive)
    return Coloring(cols, init.table, init.rounds + done)


def refine_history(g: Graph, init: Coloring, rounds: int, alive=None) -> list[np.ndarray]:
    """Colorings after 0, 1, ..., ``rounds`` rounds."""
    indptr, indices = g.csr
    hist = [init.colors.copy()]
    if alive is not None:
        hist[0][~np.asarray(alive, dtype=bool)] = -1
    cur = init.colors
    for _ in range(rounds):
        cur, _ = init.table.kernel.refine(indptr, indices, cur, 1, False, alive)
        hist.append(cur)
    return hist


def rooted_color(rg: RootedGraph, d: int, init: Coloring | None = None) -> int:
    """Root's color after ``d`` rounds inside its message-passing d-hop
    neighborhood; ``init`` colors the nodes of ``rg.graph``."""
    table = init.table if init is not None else ColorTable()
    init = init if init is not None else initial_coloring(rg.graph, table)
    sub = message_passing_neighborhood(rg.graph, rg.root, d)
    keep = sorted(sub.mapping, key=sub.mapping.__getitem__)
    local = Coloring(init.colors[keep], table)
    return refine(sub.graph, local, d)[sub.root]


def colors_after(g: Graph, init: Coloring, d: int) -> Coloring:
    """All nodes' d-round colors at once (same ids as ``rooted_color``)."""
    return refine(g, init, d)


def wl1_equivalent(g1: Graph, g2: Graph, table: ColorTable | None = None) -> bool:
    """Graph-level 1-WL test on the disjoint union (stable coloring)."""
    table = ColorTable() if table is None else table
    union = disjoint_union([g1, g2])
    col = refine(union, initial_coloring(union, table), STABLE).colors
    n1 = g1.node_count
    return g1.node_count == g2.node_count and Counter(col[:n1].tolist()) == Counter(col[n1:].tolist())


# ---------------------------------------------------------------------------
# folklore k-WL

@dataclass
class TupleColoring:
    colors: np.ndarray  # flat, tuple (v_0..v_{k-1}) at sum v_j n^(k-1-j)
    k: int
    n: int
    table: ColorTable
    rounds: int = 0

    def __getitem__(self, tup: Sequence[int]) -> int:
        return int(self.colors[self.index(tup)])

    def index(self, tup: Sequence[int]) -> int:
        i = 0
        for v in tup:
            i = i * self.n + v
        return i

    def histogram(self) -> Counter:
        return Counter(self.colors.tolist())

    def diagonal(self, v: int) -> int:
        return self[(v,) * self.k]

    def num_classes(self) -> int:
        return len(np.unique(self.colors))


def _tuple_nodes(n: int, k: int) -> np.ndarray:
    if n == 0:
        return np.zeros((k, 0), dtype=np.int64)
    grids = np.indices((n,) * k, dtype=np.int64)
    return grids.reshape(k, -1)


def _pair_code(adj: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    code = adj[a, b].astype(np.int64)
    code[a == b] = 2
    return code


class _FWLState:
    def __init__(self, g: Graph, k: int, table: ColorTable):
        n = g.node_count
        self.n, self.k = n, k
        self.table = table
        adj = np.zeros((n, n), dtype=bool)
        for a, b in g.edges:
            adj[a, b] = adj[b, a] = True
        self.adj = adj
        T = _tuple_nodes(n, k)
        self.T = T
        ncol = np.array([table.node_color(c) for c in g.node_colors], dtype=np.int64)
        cols = [ncol[T[j]] for j in range(k)]
        cols += [_pair_code(adj, T[i], T[j]) for i in range(k) for j in range(i + 1, k)]
        init = np.stack(cols, axis=1) if cols else np.zeros((T.shape[1], 0), dtype=np.int64)
        self.colors = table.kernel.intern_rows(np.ascontiguousarray(init), KFWL_INIT_TAG)
        # substituted tuple indices for every (tuple, w, position): shape (N, n, k)
        w = np.arange(n, dtype=np.int64)
        sub = np.empty((T.shape[1], n, k), dtype=np.int64)
        flat = np.zeros(T.shape[1], dtype=np.int64)
        for j in range(k):
            flat = flat * n + T[j]
        for j in range(k):
            stride = n ** (k - 1 - j)
            sub[:, :, j] = (flat - T[j] * stride)[:, None] + w[None, :] * stride
        self.sub = sub
        # atomic relation of w to each tuple entry, packed base 3
        atp = np.zeros((T.shape[1], n), dtype=np.int64)
        for j in range(k):
            code = adj[T[j][:, None], w[None, :]].astype(np.int64)
            code[T[j][:, None] == w[None, :]] = 2
            atp = atp * 3 + code
        self.atp = atp

    def step(self) -> None:
        N, n, k = self.sub.shape[0], self.n, self.k
        if N == 0:
            return
        vec = np.concatenate([self.atp[:, :, None], self.colors[self.sub]], axis=2)
        vid = self.table.kernel.intern_rows(np.ascontiguousarray(vec.reshape(N * n, k + 1)), KFWL_VEC_TAG)
        vid = np.sort(vid.reshape(N, n), axis=1)
        rows = np.concatenate([self.colors[:, None], vid], axis=1)
        self.colors = self.table.kernel.intern_rows(np.ascontiguousarray(rows), KFWL_STEP_TAG)


def kfwl_joint(
    graphs: Sequence[Graph],
    k: int,
    rounds=STABLE,
    table: ColorTable | None = None,
    budget: int | None = None,
) -> list[TupleColoring]:
    """Folklore k-WL on several graphs in lockstep with one shared table.

    A tuple's next color interns (old color, multiset over all nodes w of
    (relation of w to the tuple, colors of the k tuples with w substituted
    at each position)). ``STABLE`` stops when the class count over all
    graphs stops growing.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    budget = DEFAULT_KFWL_BUDGET if budget is None else budget
    for g in graphs:
        slots = g.node_count ** (k + 1)
        if slots > budget:
            raise BudgetExceeded(f"{k}-FWL on {g.node_count} nodes needs {slots} tuple-slots > {budget}")
    table = ColorTable() if table is None else table
    states = [_FWLState(g, k, table) for g in graphs]

    def classes() -> int:
        return len(np.unique(np.concatenate([s.colors for s in states]))) if states else 0

    r, stable = _rounds_arg(rounds)
    if stable:
        r = max((s.colors.size for s in states), default=0) + 1
    done = 0
    before = classes()
    for _ in range(r):
        for s in states:
            s.step()
        done += 1
        if stable:
            after = classes()
            if after == before:
                break
            before = after
    return [TupleColoring(s.colors, k, s.n, table, done) for s in states]


def kfwl(g: Graph, k: int, rounds=STABLE, table: ColorTable | None = None, budget: int | None = None) -> TupleColoring:
    return kfwl_joint([g], k, rounds, table, budget)[0]


def graphs_equivalent_kfwl(g1: Graph, g2: Graph, k: int, budget: int | None = None) -> bool:
    """True iff the stable tuple-color multisets agree under one table."""
    if g1.node_count != g2.node_count:
        return False
    c1, c2 = kfwl_joint([g1, g2], k, STABLE, ColorTable(), budget)
    return c1.histogram() == c2.histogram()


__all__ = [
    "STABLE",
    "BudgetExceeded",
    "ColorTable",
    "Coloring",
    "TupleColoring",
    "initial_coloring",
    "refine",
    "refine_history",
    "rooted_color",
    "colors_after",
    "wl1_equivalent",
    "kfwl",
    "kfwl_joint",
    "graphs_equivalent_kfwl",
    "REFINE_TAG",
]
