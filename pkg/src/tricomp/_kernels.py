"""Array kernels shared by the connectivity and decomposition layers.

Everything here works on CSR adjacency (indptr, indices) over vertices
0..n-1 and is written in plain loops so numba can compile it.  If numba is
unavailable (or TRICOMP_NO_NUMBA is set) the same code runs as pure Python,
just slower.
"""

from __future__ import annotations

import os

import numpy as np

if os.environ.get("TRICOMP_NO_NUMBA"):
    _HAVE_NUMBA = False
else:
    try:
        from numba import njit as _njit

        _HAVE_NUMBA = True
    except ImportError:  # pragma: no cover
        _HAVE_NUMBA = False

if _HAVE_NUMBA:
    def njit(fn):
        return _njit(cache=True)(fn)
else:  # pragma: no cover - exercised only without numba
    def njit(fn):
        return fn


@njit
def component_labels(indptr, indices, removed):
    """Label connected components of the graph minus removed vertices.

    Returns (labels, count); removed vertices get label -1.
    """
    n = indptr.shape[0] - 1
    labels = np.full(n, -1, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    count = 0
    for s in range(n):
        if removed[s] or labels[s] >= 0:
            continue
        labels[s] = count
        top = 0
        stack[0] = s
        top = 1
        while top > 0:
            top -= 1
            v = stack[top]
            for k in range(indptr[v], indptr[v + 1]):
                w = indices[k]
                if not removed[w] and labels[w] < 0:
                    labels[w] = count
                    stack[top] = w
                    top += 1
        count += 1
    return labels, count


@njit
def is_connected(indptr, indices, removed):
    """True iff the surviving vertices form one (possibly empty) component."""
    n = indptr.shape[0] - 1
    start = -1
    alive = 0
    for v in range(n):
        if not removed[v]:
            alive += 1
            if start < 0:
                start = v
    if alive <= 1:
        return True
    seen = np.zeros(n, dtype=np.uint8)
    stack = np.empty(n, dtype=np.int64)
    stack[0] = start
    seen[start] = 1
    top = 1
    reached = 1
    while top > 0:
        top -= 1
        v = stack[top]
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if not removed[w] and seen[w] == 0:
                seen[w] = 1
                reached += 1
                stack[top] = w
                top += 1
    return reached == alive


@njit
def articulation_points(indptr, indices, removed):
    """Articulation points of the graph minus removed vertices (iterative Tarjan).

    Returns an int64 array of articulation vertices (unsorted); if the
    surviving graph is disconnected, articulation points of every component
    are reported.
    """
    n = indptr.shape[0] - 1
    disc = np.full(n, -1, dtype=np.int64)
    low = np.empty(n, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    ptr = np.empty(n, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    is_art = np.zeros(n, dtype=np.uint8)
    timer = 0
    for s in range(n):
        if removed[s] or disc[s] >= 0:
            continue
        root = s
        root_children = 0
        disc[s] = timer
        low[s] = timer
        timer += 1
        ptr[s] = indptr[s]
        stack[0] = s
        top = 1
        while top > 0:
            v = stack[top - 1]
            if ptr[v] < indptr[v + 1]:
                w = indices[ptr[v]]
                ptr[v] += 1
                if removed[w]:
                    continue
                if disc[w] < 0:
                    parent[w] = v
                    disc[w] = timer
                    low[w] = timer
                    timer += 1
                    ptr[w] = indptr[w]
                    stack[top] = w
                    top += 1
                    if v == root:
                        root_children += 1
                elif w != parent[v] and disc[w] < low[v]:
                    low[v] = disc[w]
            else:
                top -= 1
                p = parent[v]
                if p >= 0:
                    if low[v] < low[p]:
                        low[p] = low[v]
                    if p != root and low[v] >= disc[p]:
                        is_art[p] = 1
        if root_children >= 2:
            is_art[root] = 1
    cnt = 0
    for v in range(n):
        if is_art[v]:
            cnt += 1
    out = np.empty(cnt, dtype=np.int64)
    k = 0
    for v in range(n):
        if is_art[v]:
            out[k] = v
            k += 1
    return out


@njit
def cut_pairs_batch(indptr, indices, cands):
    """All pairs (s, w) with s in cands such that {s, w} disconnects the graph.

    The input graph must be connected.  Output rows are (s, w); each
    unordered 2-cut {a,b} with both members in cands appears twice.
    """
    n = indptr.shape[0] - 1
    removed = np.zeros(n, dtype=np.uint8)
    cap = 16
    out = np.empty((cap, 2), dtype=np.int64)
    cnt = 0
    for ci in range(cands.shape[0]):
        s = cands[ci]
        removed[s] = 1
        arts = articulation_points(indptr, indices, removed)
        for k in range(arts.shape[0]):
            if cnt == cap:
                cap *= 2
                tmp = np.empty((cap, 2), dtype=np.int64)
                tmp[:cnt] = out[:cnt]
                out = tmp
            out[cnt, 0] = s
            out[cnt, 1] = arts[k]
            cnt += 1
        removed[s] = 0
    return out[:cnt]


@njit
def ni_forest_partition(indptr, indices, arc_edge):
    """Nagamochi-Ibaraki forest partition.

    arc_edge[k] is the undirected edge id of CSR arc k.  Returns an array
    forest_of_edge with 1-based forest indices: scanning vertices in
    max-label-first order, each edge (x, y) scanned from x goes to forest
    r(y)+1 and increments r(y).
    """
    n = indptr.shape[0] - 1
    m = arc_edge.max() + 1 if arc_edge.shape[0] > 0 else 0
    forest = np.zeros(m, dtype=np.int64)
    r = np.zeros(n, dtype=np.int64)
    scanned = np.zeros(n, dtype=np.uint8)
    # lazy bucket queue over r values; each r increment pushes once.
    # r(y) is bounded by y's (multigraph) degree, not by n
    cap = n + arc_edge.shape[0] + 1
    bucket_vertex = np.empty(cap, dtype=np.int64)
    bucket_next = np.empty(cap, dtype=np.int64)
    max_deg = 0
    for v in range(n):
        dv = indptr[v + 1] - indptr[v]
        if dv > max_deg:
            max_deg = dv
    nbuckets = max_deg + 2
    bucket_head = np.full(nbuckets, -1, dtype=np.int64)
    free = 0
    # push all vertices at level 0
    for v in range(n):
        bucket_vertex[free] = v
        bucket_next[free] = bucket_head[0]
        bucket_head[0] = free
        free += 1
    cur = 0
    remaining = n
    while remaining > 0:
        # find highest non-empty bucket with a fresh entry
        x = -1
        while cur >= 0:
            slot = bucket_head[cur]
            if slot < 0:
                cur -= 1
                continue
            bucket_head[cur] = bucket_next[slot]
            v = bucket_vertex[slot]
            if scanned[v] == 0 and r[v] == cur:
                x = v
                break
        if x < 0:
            # safety net: requeue any unscanned vertex (cannot normally occur;
            # every unscanned vertex keeps a live entry at its current level)
            found = False
            v = 0
            for u in range(n):
                if scanned[u] == 0:
                    v = u
                    found = True
                    break
            if not found:
                break
            bucket_vertex[free] = v
            bucket_next[free] = bucket_head[r[v]]
            bucket_head[r[v]] = free
            free += 1
            cur = r[v]
            continue
        scanned[x] = 1
        remaining -= 1
        for k in range(indptr[x], indptr[x + 1]):
            y = indices[k]
            if scanned[y]:
                continue
            e = arc_edge[k]
            forest[e] = r[y] + 1
            r[y] += 1
            bucket_vertex[free] = y
            bucket_next[free] = bucket_head[r[y]]
            bucket_head[r[y]] = free
            free += 1
            if r[y] > cur:
                cur = r[y]
    return forest


@njit
def maxflow_vertex_capacity(indptr, indices, s, t, cap_limit):
    """Max number of internally vertex-disjoint s-t paths, capped.

    Standard vertex-splitting construction with unit capacities; s and t
    are uncapacitated.  Returns min(cap_limit, max paths).  BFS augmenting
    (each augmentation is one path).
    """
    n = indptr.shape[0] - 1
    m2 = indices.shape[0]  # number of directed arcs in CSR (2m)
    # node ids: v_in = 2v, v_out = 2v+1
    # arcs: for each v: (v_in -> v_out) and reverse;
    #       for each CSR arc (v,w): (v_out -> w_in) and reverse.
    narcs = 2 * n + 2 * m2
    head = np.empty(narcs, dtype=np.int64)
    nxt = np.empty(narcs, dtype=np.int64)
    capa = np.empty(narcs, dtype=np.int64)
    first = np.full(2 * n, -1, dtype=np.int64)
    a = 0
    for v in range(n):
        # v_in -> v_out
        head[a] = 2 * v + 1
        capa[a] = 1000000 if (v == s or v == t) else 1
        nxt[a] = first[2 * v]
        first[2 * v] = a
        a += 1
        head[a] = 2 * v
        capa[a] = 0
        nxt[a] = first[2 * v + 1]
        first[2 * v + 1] = a
        a += 1
    for v in range(n):
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            head[a] = 2 * w
            capa[a] = 1
            nxt[a] = first[2 * v + 1]
            first[2 * v + 1] = a
            a += 1
            head[a] = 2 * v + 1
            capa[a] = 0
            nxt[a] = first[2 * w]
            first[2 * w] = a
            a += 1
    source = 2 * s + 1
    sink = 2 * t
    flow = 0
    parent_arc = np.empty(2 * n, dtype=np.int64)
    queue = np.empty(2 * n, dtype=np.int64)
    while flow < cap_limit:
        for i in range(2 * n):
            parent_arc[i] = -1
        parent_arc[source] = -2
        queue[0] = source
        qh = 0
        qt = 1
        reached = False
        while qh < qt and not reached:
            v = queue[qh]
            qh += 1
            arc = first[v]
            while arc >= 0:
                if capa[arc] > 0 and parent_arc[head[arc]] == -1:
                    parent_arc[head[arc]] = arc
                    if head[arc] == sink:
                        reached = True
                        break
                    queue[qt] = head[arc]
                    qt += 1
                arc = nxt[arc]
        if not reached:
            break
        v = sink
        while v != source:
            arc = parent_arc[v]
            capa[arc] -= 1
            capa[arc ^ 1] += 1
            # arcs are allocated in pairs, so arc ^ 1 is the reverse arc
            v = head[arc ^ 1]
        flow += 1
    return flow


@njit
def bfs_reach(indptr, indices, start, removed):
    """Vertices reachable from start avoiding removed; uint8 mask."""
    n = indptr.shape[0] - 1
    seen = np.zeros(n, dtype=np.uint8)
    if removed[start]:
        return seen
    stack = np.empty(n, dtype=np.int64)
    stack[0] = start
    seen[start] = 1
    top = 1
    while top > 0:
        top -= 1
        v = stack[top]
        for k in range(indptr[v], indptr[v + 1]):
            w = indices[k]
            if not removed[w] and seen[w] == 0:
                seen[w] = 1
                stack[top] = w
                top += 1
    return seen


def warmup() -> None:
    """Compile the kernels on a toy graph (no-op without numba)."""
    indptr = np.array([0, 2, 4, 6, 8], dtype=np.int64)
    indices = np.array([1, 3, 0, 2, 1, 3, 2, 0], dtype=np.int64)
    removed = np.zeros(4, dtype=np.uint8)
    component_labels(indptr, indices, removed)
    is_connected(indptr, indices, removed)
    articulation_points(indptr, indices, removed)
    cut_pairs_batch(indptr, indices, np.array([0], dtype=np.int64))
    arc_edge = np.array([0, 3, 0, 1, 1, 2, 2, 3], dtype=np.int64)
    ni_forest_partition(indptr, indices, arc_edge)
    maxflow_vertex_capacity(indptr, indices, 0, 2, 3)
    bfs_reach(indptr, indices, 0, removed)
