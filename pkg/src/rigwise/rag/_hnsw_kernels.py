"""Numba kernels for the base-layer beam search and neighbor selection.

Array-based binary heaps; the visited set is an epoch-stamped int64 array so
no per-search allocation or clearing is needed.
"""

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _dot(a, b):
    # eight independent accumulation chains: deterministic order, keeps the
    # FP pipeline full (a single-chain reduction is latency-bound)
    n = a.shape[0]
    n8 = 8 * (n // 8)
    s0 = 0.0
    s1 = 0.0
    s2 = 0.0
    s3 = 0.0
    s4 = 0.0
    s5 = 0.0
    s6 = 0.0
    s7 = 0.0
    for t in range(0, n8, 8):
        s0 += a[t] * b[t]
        s1 += a[t + 1] * b[t + 1]
        s2 += a[t + 2] * b[t + 2]
        s3 += a[t + 3] * b[t + 3]
        s4 += a[t + 4] * b[t + 4]
        s5 += a[t + 5] * b[t + 5]
        s6 += a[t + 6] * b[t + 6]
        s7 += a[t + 7] * b[t + 7]
    s = ((s0 + s1) + (s2 + s3)) + ((s4 + s5) + (s6 + s7))
    for t in range(n8, n):
        s += a[t] * b[t]
    return s


@njit(cache=True, inline="always")
def _heap_push(keys, vals, size, k, v):
    i = size
    keys[i] = k
    vals[i] = v
    while i > 0:
        p = (i - 1) >> 1
        if keys[p] <= keys[i]:
            break
        keys[p], keys[i] = keys[i], keys[p]
        vals[p], vals[i] = vals[i], vals[p]
        i = p
    return size + 1


@njit(cache=True, inline="always")
def _heap_pop(keys, vals, size):
    k = keys[0]
    v = vals[0]
    size -= 1
    keys[0] = keys[size]
    vals[0] = vals[size]
    i = 0
    while True:
        left = 2 * i + 1
        right = left + 1
        smallest = i
        if left < size and keys[left] < keys[smallest]:
            smallest = left
        if right < size and keys[right] < keys[smallest]:
            smallest = right
        if smallest == i:
            break
        keys[smallest], keys[i] = keys[i], keys[smallest]
        vals[smallest], vals[i] = vals[i], vals[smallest]
        i = smallest
    return k, v, size


@njit(cache=True)
def search_layer0(vectors, links, counts, q, entries, ef, stamp, epoch,
                  cand_k, cand_v, best_k, best_v):
    """Beam search on the base layer.

    Returns (dists, nodes) of up to ef results; caller sorts by (dist, node).
    """
    nc = 0
    nb = 0
    for idx in range(entries.shape[0]):
        node = entries[idx]
        if stamp[node] == epoch:
            continue
        stamp[node] = epoch
        d = 1.0 - _dot(vectors[node], q)
        nc = _heap_push(cand_k, cand_v, nc, d, node)
        nb = _heap_push(best_k, best_v, nb, -d, node)
        if nb > ef:
            _, _, nb = _heap_pop(best_k, best_v, nb)
    while nc > 0:
        d, node, nc = _heap_pop(cand_k, cand_v, nc)
        if nb >= ef and d > -best_k[0]:
            break
        c = counts[node]
        for j in range(c):
            neigh = links[node, j]
            if stamp[neigh] == epoch:
                continue
            stamp[neigh] = epoch
            dn = 1.0 - _dot(vectors[neigh], q)
            if nb < ef or dn < -best_k[0]:
                nc = _heap_push(cand_k, cand_v, nc, dn, neigh)
                nb = _heap_push(best_k, best_v, nb, -dn, neigh)
                if nb > ef:
                    _, _, nb = _heap_pop(best_k, best_v, nb)
    out_d = np.empty(nb, np.float64)
    out_i = np.empty(nb, np.int64)
    for i in range(nb - 1, -1, -1):
        k, v, nb = _heap_pop(best_k, best_v, nb)
        out_d[i] = -k
        out_i[i] = v
    return out_d, out_i


@njit(cache=True)
def select_diverse(vectors, cand_ids, cand_dists, m, out):
    """Diversity heuristic: keep a candidate only if it is closer to the query
    than to every already-kept neighbor; backfill nearest-first from the
    pruned. ``cand_dists`` must be ascending. Returns the selected count."""
    n = cand_ids.shape[0]
    if n <= m:
        for i in range(n):
            out[i] = cand_ids[i]
        return n
    skipped = np.empty(n, np.int64)
    n_sel = 0
    n_skip = 0
    for i in range(n):
        if n_sel >= m:
            break
        node = cand_ids[i]
        d_q = cand_dists[i]
        keep = True
        for j in range(n_sel):
            if 1.0 - _dot(vectors[node], vectors[out[j]]) <= d_q:
                keep = False
                break
        if keep:
            out[n_sel] = node
            n_sel += 1
        else:
            skipped[n_skip] = node
            n_skip += 1
    i = 0
    while n_sel < m and i < n_skip:
        out[n_sel] = skipped[i]
        n_sel += 1
        i += 1
    return n_sel


@njit(cache=True)
def drop_farthest(vectors, links, counts, node):
    """Degree-cap pruning: remove the link farthest from the node."""
    c = counts[node]
    worst = 0
    worst_d = -np.inf
    for j in range(c):
        d = 1.0 - _dot(vectors[links[node, j]], vectors[node])
        if d > worst_d:
            worst_d = d
            worst = j
    links[node, worst] = links[node, c - 1]
    links[node, c - 1] = -1
    counts[node] = c - 1
