"""Pure-Python fallback kernels.

Mirrors the compiled extension in tiltflow._kernels: a blocking-flow
(Dinic) maximal flow over a paired-arc residual structure, and a
multi-source Dijkstra over the dual graph.  Semantics and iteration
order match the compiled version so both backends produce identical
results; only speed differs.
"""

from collections import deque

import numpy as np

IMPLEMENTATION = "python"

_INT_INF = 2**62


def dinic(nv, s, t, adj_start, adj_arc, arc_to, arc_cap, eps):
    """Maximum flow from s to t on the residual arc structure.

    Arc a's reverse twin is a ^ 1.  arc_cap is mutated in place to the
    final residual capacities.  Residual capacities <= eps are treated
    as zero (eps = 0 for exact integer capacities).

    Returns (value, level) where level[v] >= 0 iff v is reachable from s
    in the final residual graph.
    """
    adj_start = adj_start.tolist()
    adj_arc = adj_arc.tolist()
    arc_to = arc_to.tolist()
    cap = arc_cap.tolist()
    level = [-1] * nv
    total = 0

    while True:
        # BFS layering on the residual graph
        level = [-1] * nv
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for k in range(adj_start[u], adj_start[u + 1]):
                a = adj_arc[k]
                if cap[a] > eps:
                    w = arc_to[a]
                    if level[w] < 0:
                        level[w] = level[u] + 1
                        queue.append(w)
        if level[t] < 0:
            break

        it = list(adj_start[:nv])
        path = []  # arc ids of the current partial path
        u = s
        while True:
            if u == t:
                bottleneck = min(cap[a] for a in path)
                for a in path:
                    cap[a] -= bottleneck
                    cap[a ^ 1] += bottleneck
                total += bottleneck
                # retreat to the tail of the first saturated arc
                cut_at = 0
                for j, a in enumerate(path):
                    if cap[a] <= eps:
                        cut_at = j
                        break
                del path[cut_at:]
                u = s if not path else arc_to[path[-1]]
                continue
            advanced = False
            while it[u] < adj_start[u + 1]:
                a = adj_arc[it[u]]
                w = arc_to[a]
                if cap[a] > eps and level[w] == level[u] + 1:
                    path.append(a)
                    u = w
                    advanced = True
                    break
                it[u] += 1
            if advanced:
                continue
            if u == s:
                break
            level[u] = -1  # dead end within this phase
            a = path.pop()
            u = arc_to[a ^ 1]
            it[u] += 1

    arc_cap[:] = cap
    return total, np.array(level, dtype=np.int32)


def dijkstra(n, adj_start, adj_to, adj_eid, weights, sources, target_mask):
    """Multi-source Dijkstra with nonnegative per-edge weights.

    weights is indexed by the edge id stored in adj_eid.  If target_mask
    is not None, stops at the first settled target and returns its id as
    ``hit`` (-1 when unreachable); dist entries of unsettled vertices
    are upper bounds in that case.

    Returns (dist, parent_node, parent_eid, hit).
    """
    import heapq

    adj_start = adj_start.tolist()
    adj_to = adj_to.tolist()
    adj_eid = adj_eid.tolist()
    wts = weights.tolist()
    integer = weights.dtype.kind in "iu"
    inf = _INT_INF if integer else float("inf")

    dist = [inf] * n
    parent_node = [-1] * n
    parent_eid = [-1] * n
    settled = [False] * n
    heap = []
    for srcs in sources.tolist():
        dist[srcs] = 0
        heapq.heappush(heap, (0, srcs))

    hit = -1
    targets = target_mask.tolist() if target_mask is not None else None
    while heap:
        d, u = heapq.heappop(heap)
        if settled[u]:
            continue
        settled[u] = True
        if targets is not None and targets[u]:
            hit = u
            break
        for k in range(adj_start[u], adj_start[u + 1]):
            v = adj_to[k]
            if settled[v]:
                continue
            nd = d + wts[adj_eid[k]]
            if nd < dist[v]:
                dist[v] = nd
                parent_node[v] = u
                parent_eid[v] = adj_eid[k]
                heapq.heappush(heap, (nd, v))

    dtype = np.int64 if integer else np.float64
    return (
        np.array(dist, dtype=dtype),
        np.array(parent_node, dtype=np.int32),
        np.array(parent_eid, dtype=np.int32),
        hit,
    )
