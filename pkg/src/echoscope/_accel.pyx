# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pair-accumulation kernel for co-comment graph construction.

For each article's sorted distinct-commenter list, every unordered user
pair gains weight 1. Pair keys are packed into 64-bit integers, sorted in
place, and run-length encoded; no hashing, one allocation for the key
buffer.
"""

import numpy as np

cimport numpy as cnp
from libcpp.algorithm cimport sort
from libcpp.vector cimport vector

cnp.import_array()


def accumulate_pair_counts(cnp.int64_t[::1] indptr, cnp.int32_t[::1] members):
    """Tally co-occurrence weights for all unordered pairs.

    indptr: article boundaries into `members` (len n_articles + 1)
    members: per-article sorted distinct user indices, concatenated

    Returns (u, v, w) int64 arrays sorted by (u, v), with u < v.
    """
    cdef Py_ssize_t a, i, j, start, stop
    cdef cnp.int64_t ui
    cdef Py_ssize_t n_articles = indptr.shape[0] - 1
    cdef Py_ssize_t total = 0, size

    for a in range(n_articles):
        size = indptr[a + 1] - indptr[a]
        total += size * (size - 1) // 2

    cdef vector[cnp.int64_t] keys
    keys.reserve(total)
    for a in range(n_articles):
        start = indptr[a]
        stop = indptr[a + 1]
        for i in range(start, stop):
            ui = (<cnp.int64_t> members[i]) << 32
            for j in range(i + 1, stop):
                keys.push_back(ui | <cnp.int64_t> members[j])

    if keys.size() > 0:
        sort(keys.begin(), keys.end())

    # run-length encode the sorted keys
    cdef Py_ssize_t n_pairs = 0
    cdef Py_ssize_t n = keys.size()
    for i in range(n):
        if i == 0 or keys[i] != keys[i - 1]:
            n_pairs += 1

    out_keys = np.empty(n_pairs, dtype=np.int64)
    out_counts = np.empty(n_pairs, dtype=np.int64)
    cdef cnp.int64_t[::1] keys_v = out_keys
    cdef cnp.int64_t[::1] counts_v = out_counts
    cdef Py_ssize_t pos = -1
    for i in range(n):
        if i == 0 or keys[i] != keys[i - 1]:
            pos += 1
            keys_v[pos] = keys[i]
            counts_v[pos] = 1
        else:
            counts_v[pos] += 1

    return out_keys >> 32, out_keys & 0xFFFFFFFF, out_counts
