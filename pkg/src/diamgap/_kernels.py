"""Hot distance kernels, compiled with numba when it is available.

Every kernel is written once as a plain function over numpy arrays and
wrapped with @njit at import time.  Setting DIAMGAP_PURE_PYTHON=1 (or
running without numba installed) keeps the uncompiled versions; the
module always exposes the plain functions under *_py names so the test
suite and the benchmark can compare both code paths in one process.

Graphs arrive as int64 CSR (indptr, indices).  Cliques are kept as an
overlay instead of materialised edges: clique_class[v] is the class id
of v or -1, and (class_indptr, class_members) lists each class's
vertices.  A BFS expands a class the first time any member is popped,
which gives exact distances because later expansions could only assign
larger labels.
"""

from __future__ import annotations

import os

import numpy as np

_PURE = os.environ.get("DIAMGAP_PURE_PYTHON", "") not in ("", "0")

try:
    if _PURE:
        raise ImportError
    from numba import njit, prange

    USING_NUMBA = True
except ImportError:
    USING_NUMBA = False
    prange = range

    def njit(*args, **kwargs):  # type: ignore[misc]
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


def _bfs_fill(
    indptr, indices, clique_class, class_indptr, class_members, source, dist, class_done, queue
):
    """Single-source BFS with clique-overlay expansion, writing into dist.

    dist must be pre-filled with -1 and class_done with 0.  Returns the
    number of vertices reached; queue[:returned] is the visit order, so
    the last entry is a farthest vertex.
    """
    head = 0
    tail = 0
    dist[source] = 0
    queue[tail] = source
    tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        nd = dist[u] + 1
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if dist[v] < 0:
                dist[v] = nd
                queue[tail] = v
                tail += 1
        c = clique_class[u]
        if c >= 0 and class_done[c] == 0:
            class_done[c] = 1
            for p in range(class_indptr[c], class_indptr[c + 1]):
                v = class_members[p]
                if dist[v] < 0:
                    dist[v] = nd
                    queue[tail] = v
                    tail += 1
    return tail


def _zero_one_fill(indptr, indices, weights, source, dist, settled, buf):
    """Deque-based shortest paths for 0/1 edge weights, writing into dist.

    dist pre-filled with -1, settled with 0; buf must hold at least
    2 * (len(indices) + 1) entries (the deque grows from the middle).
    Stale queue entries are skipped via the settled flags, so each
    vertex's edges are scanned exactly once.
    """
    mid = indices.shape[0] + 1
    head = mid
    tail = mid
    dist[source] = 0
    buf[tail] = source
    tail += 1
    while head < tail:
        u = buf[head]
        head += 1
        if settled[u] == 1:
            continue
        settled[u] = 1
        du = dist[u]
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            w = weights[p]
            nd = du + w
            if dist[v] < 0 or nd < dist[v]:
                dist[v] = nd
                if w == 0:
                    head -= 1
                    buf[head] = v
                else:
                    buf[tail] = v
                    tail += 1


def _ecc_batch(indptr, indices, clique_class, class_indptr, class_members, sources):
    """Eccentricities from many sources (parallel when compiled).

    Returns (ecc, far, reached): for each source its eccentricity, one
    farthest vertex, and how many vertices its BFS reached.
    """
    n_vertices = indptr.shape[0] - 1
    n_classes = class_indptr.shape[0] - 1
    n_sources = sources.shape[0]
    ecc = np.empty(n_sources, np.int64)
    far = np.empty(n_sources, np.int64)
    reached = np.empty(n_sources, np.int64)
    for si in prange(n_sources):
        dist = np.full(n_vertices, -1, np.int64)
        class_done = np.zeros(n_classes, np.uint8)
        queue = np.empty(n_vertices, np.int64)
        head = 0
        tail = 0
        source = sources[si]
        dist[source] = 0
        queue[tail] = source
        tail += 1
        while head < tail:
            u = queue[head]
            head += 1
            nd = dist[u] + 1
            for p in range(indptr[u], indptr[u + 1]):
                v = indices[p]
                if dist[v] < 0:
                    dist[v] = nd
                    queue[tail] = v
                    tail += 1
            c = clique_class[u]
            if c >= 0 and class_done[c] == 0:
                class_done[c] = 1
                for p in range(class_indptr[c], class_indptr[c + 1]):
                    v = class_members[p]
                    if dist[v] < 0:
                        dist[v] = nd
                        queue[tail] = v
                        tail += 1
        last = queue[tail - 1]
        ecc[si] = dist[last]
        far[si] = last
        reached[si] = tail
    return ecc, far, reached


bfs_fill_py = _bfs_fill
zero_one_fill_py = _zero_one_fill
ecc_batch_py = _ecc_batch

if USING_NUMBA:
    bfs_fill = njit(cache=True)(_bfs_fill)
    zero_one_fill = njit(cache=True)(_zero_one_fill)
    ecc_batch = njit(cache=True, parallel=True)(_ecc_batch)
else:
    bfs_fill = _bfs_fill
    zero_one_fill = _zero_one_fill
    ecc_batch = _ecc_batch
