"""Pure-numpy fallback for the pair-accumulation kernel.

Generates packed 64-bit pair keys article by article and aggregates them
with np.unique in bounded-size chunks, so peak memory stays proportional
to the chunk size plus the distinct-pair count.
"""

import numpy as np

_CHUNK_KEYS = 4_000_000


def _merge(keys_a, counts_a, keys_b, counts_b):
    keys = np.concatenate([keys_a, keys_b])
    counts = np.concatenate([counts_a, counts_b])
    uniq, inv = np.unique(keys, return_inverse=True)
    summed = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(summed, inv, counts)
    return uniq, summed


def accumulate_pair_counts(indptr, members):
    """Same contract as the compiled kernel: (u, v, w) sorted by (u, v)."""
    indptr = np.asarray(indptr, dtype=np.int64)
    members = np.asarray(members, dtype=np.int64)
    acc_keys = np.empty(0, dtype=np.int64)
    acc_counts = np.empty(0, dtype=np.int64)
    pending = []
    pending_size = 0

    def flush():
        nonlocal acc_keys, acc_counts, pending, pending_size
        if not pending:
            return
        chunk = np.concatenate(pending)
        uniq, counts = np.unique(chunk, return_counts=True)
        acc_keys, acc_counts = _merge(acc_keys, acc_counts, uniq, counts)
        pending = []
        pending_size = 0

    for a in range(len(indptr) - 1):
        group = members[indptr[a] : indptr[a + 1]]
        k = len(group)
        if k < 2:
            continue
        iu, ju = np.triu_indices(k, k=1)
        pending.append((group[iu] << 32) | group[ju])
        pending_size += len(iu)
        if pending_size >= _CHUNK_KEYS:
            flush()
    flush()
    return acc_keys >> 32, acc_keys & 0xFFFFFFFF, acc_counts
