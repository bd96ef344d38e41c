"""Pure-Python refinement kernels (fallback for the compiled ``_ckernels``)."""

from __future__ import annotations

import numpy as np

REFINE_TAG = 0


class Interner:
    """Maps integer-tuple keys to dense ids in first-seen order."""

    def __init__(self) -> None:
        self._table: dict[tuple[int, ...], int] = {}

    @property
    def size(self) -> int:
        return len(self._table)

    def intern(self, key) -> int:
        key = tuple(int(x) for x in key)
        table = self._table
        cid = table.get(key)
        if cid is None:
            cid = table[key] = len(table)
        return cid

    def intern_rows(self, rows, tag: int) -> np.ndarray:
        table = self._table
        out = np.empty(len(rows), dtype=np.int64)
        for i, row in enumerate(np.asarray(rows, dtype=np.int64).tolist()):
            key = (tag, *row)
            cid = table.get(key)
            if cid is None:
                cid = table[key] = len(table)
            out[i] = cid
        return out

    def refine(self, indptr, indices, colors, rounds: int, until_stable: bool, alive=None):
        n = len(indptr) - 1
        ptr = np.asarray(indptr).tolist()
        idx = np.asarray(indices).tolist()
        cur = [int(c) for c in colors]
        live = None if alive is None else [bool(x) for x in np.asarray(alive).tolist()]
        if live is not None:
            cur = [c if live[v] else -1 for v, c in enumerate(cur)]
            nbrs = [[w for w in idx[ptr[v] : ptr[v + 1]] if live[w]] for v in range(n)]
        else:
            nbrs = [idx[ptr[v] : ptr[v + 1]] for v in range(n)]
        table = self._table
        before = _count(cur)
        if rounds < 0:
            rounds = n + 1
        done = 0
        for _ in range(rounds):
            nxt = [-1] * n
            for v in range(n):
                if live is not None and not live[v]:
                    continue
                key = (REFINE_TAG, cur[v], *sorted(cur[w] for w in nbrs[v]))
                cid = table.get(key)
                if cid is None:
                    cid = table[key] = len(table)
                nxt[v] = cid
            cur = nxt
            done += 1
            if until_stable:
                after = _count(cur)
                if after == before:
                    break
                before = after
        return np.array(cur, dtype=np.int64), done


def _count(cols) -> int:
    return len({c for c in cols if c >= 0})
