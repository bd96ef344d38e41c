# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled refinement kernels.

Same contract as ``wlhier._pykernels``; ids are handed out in first-seen
order, so both backends produce identical colorings for identical call
sequences.
"""

from cython.operator cimport dereference as deref
from libcpp cimport bool as cbool
from libcpp.algorithm cimport sort
from libcpp.map cimport map as cmap
from libcpp.pair cimport pair
from libcpp.vector cimport vector

import numpy as np

ctypedef long long i64

REFINE_TAG = 0


cdef class Interner:
    cdef cmap[vector[i64], i64] _table
    cdef i64 _next

    def __cinit__(self):
        self._next = 0

    @property
    def size(self):
        return self._next

    cdef inline i64 _get(self, const vector[i64]& key):
        cdef pair[cmap[vector[i64], i64].iterator, cbool] res
        res = self._table.insert(pair[vector[i64], i64](key, self._next))
        if res.second:
            self._next += 1
        return deref(res.first).second

    def intern(self, key):
        cdef vector[i64] k
        for x in key:
            k.push_back(<i64>x)
        return self._get(k)

    def intern_rows(self, const i64[:, :] rows, i64 tag):
        cdef Py_ssize_t n = rows.shape[0], m = rows.shape[1], i, j
        out = np.empty(n, dtype=np.int64)
        cdef i64[:] o = out
        cdef vector[i64] k
        k.reserve(m + 1)
        for i in range(n):
            k.clear()
            k.push_back(tag)
            for j in range(m):
                k.push_back(rows[i, j])
            o[i] = self._get(k)
        return out

    def refine(self, const i64[:] indptr, const i64[:] indices, colors,
               int rounds, bint until_stable, alive=None):
        cdef Py_ssize_t n = indptr.shape[0] - 1, v, p, start
        cdef int r, done = 0
        cdef i64 w
        cur_arr = np.array(colors, dtype=np.int64, copy=True)
        nxt_arr = np.empty(n, dtype=np.int64)
        cdef i64[:] cur = cur_arr
        cdef i64[:] nxt = nxt_arr
        cdef const unsigned char[:] live
        cdef bint masked = alive is not None
        if masked:
            live = np.ascontiguousarray(alive, dtype=np.uint8)
            for v in range(n):
                if not live[v]:
                    cur[v] = -1
        cdef vector[i64] key
        cdef Py_ssize_t before = _count(cur), after
        if rounds < 0:
            rounds = <int>n + 1
        for r in range(rounds):
            for v in range(n):
                if masked and not live[v]:
                    nxt[v] = -1
                    continue
                key.clear()
                key.push_back(0)
                key.push_back(cur[v])
                start = 2
                for p in range(indptr[v], indptr[v + 1]):
                    w = indices[p]
                    if masked and not live[w]:
                        continue
                    key.push_back(cur[w])
                sort(key.begin() + start, key.end())
                nxt[v] = self._get(key)
            cur, nxt = nxt, cur
            cur_arr, nxt_arr = nxt_arr, cur_arr
            done += 1
            if until_stable:
                after = _count(cur)
                if after == before:
                    break
                before = after
        return cur_arr, done


cdef Py_ssize_t _count(const i64[:] cols):
    cdef vector[i64] tmp
    cdef Py_ssize_t i, c = 0
    for i in range(cols.shape[0]):
        if cols[i] >= 0:
            tmp.push_back(cols[i])
    if tmp.size() == 0:
        return 0
    sort(tmp.begin(), tmp.end())
    c = 1
    for i in range(1, <Py_ssize_t>tmp.size()):
        if tmp[i] != tmp[i - 1]:
            c += 1
    return c
