# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: blocking-flow maximal flow and multi-source Dijkstra.

Same contracts and iteration order as tiltflow._kernels_py; see there
for documentation.  Fused capacity type covers exact int64 numerators
and float64 weights.
"""

import numpy as np

from libc.stdlib cimport free, malloc

IMPLEMENTATION = "compiled"

ctypedef long long ll

ctypedef fused cap_t:
    ll
    double

cdef ll _INT_INF = 2 ** 62


def dinic(int nv, int s, int t,
          int[::1] adj_start, int[::1] adj_arc, int[::1] arc_to,
          cap_t[::1] arc_cap, cap_t eps):
    level_arr = np.empty(nv, dtype=np.int32)
    cdef int[::1] level = level_arr
    cdef int* queue = <int*> malloc(nv * sizeof(int))
    cdef int* it = <int*> malloc(nv * sizeof(int))
    cdef int* path = <int*> malloc((nv + 1) * sizeof(int))
    if queue == NULL or it == NULL or path == NULL:
        free(queue); free(it); free(path)
        raise MemoryError()
    cdef cap_t total = 0
    cdef cap_t bottleneck
    cdef int u, w, a, k, qh, qt, plen, j, cut_at
    cdef bint advanced

    with nogil:
        while True:
            # BFS layering
            for u in range(nv):
                level[u] = -1
            level[s] = 0
            queue[0] = s
            qh = 0
            qt = 1
            while qh < qt:
                u = queue[qh]
                qh += 1
                for k in range(adj_start[u], adj_start[u + 1]):
                    a = adj_arc[k]
                    if arc_cap[a] > eps:
                        w = arc_to[a]
                        if level[w] < 0:
                            level[w] = level[u] + 1
                            queue[qt] = w
                            qt += 1
            if level[t] < 0:
                break

            for u in range(nv):
                it[u] = adj_start[u]
            plen = 0
            u = s
            while True:
                if u == t:
                    bottleneck = arc_cap[path[0]]
                    for j in range(1, plen):
                        if arc_cap[path[j]] < bottleneck:
                            bottleneck = arc_cap[path[j]]
                    for j in range(plen):
                        a = path[j]
                        arc_cap[a] -= bottleneck
                        arc_cap[a ^ 1] += bottleneck
                    total += bottleneck
                    cut_at = 0
                    for j in range(plen):
                        if arc_cap[path[j]] <= eps:
                            cut_at = j
                            break
                    plen = cut_at
                    u = s if plen == 0 else arc_to[path[plen - 1]]
                    continue
                advanced = False
                while it[u] < adj_start[u + 1]:
                    a = adj_arc[it[u]]
                    w = arc_to[a]
                    if arc_cap[a] > eps and level[w] == level[u] + 1:
                        path[plen] = a
                        plen += 1
                        u = w
                        advanced = True
                        break
                    it[u] += 1
                if advanced:
                    continue
                if u == s:
                    break
                level[u] = -1
                plen -= 1
                a = path[plen]
                u = arc_to[a ^ 1]
                it[u] += 1

    free(queue)
    free(it)
    free(path)
    return total, level_arr


def dijkstra(int n, int[::1] adj_start, int[::1] adj_to, int[::1] adj_eid,
             cap_t[::1] weights, int[::1] sources, target_mask):
    if cap_t is ll:
        dist_arr = np.full(n, _INT_INF, dtype=np.int64)
    else:
        dist_arr = np.full(n, np.inf, dtype=np.float64)
    parent_node_arr = np.full(n, -1, dtype=np.int32)
    parent_eid_arr = np.full(n, -1, dtype=np.int32)
    cdef cap_t[::1] dist = dist_arr
    cdef int[::1] parent_node = parent_node_arr
    cdef int[::1] parent_eid = parent_eid_arr

    cdef unsigned char[::1] targets
    cdef bint has_targets = target_mask is not None
    if has_targets:
        targets = target_mask
    else:
        targets = np.zeros(1, dtype=np.uint8)

    settled_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[::1] settled = settled_arr

    cdef Py_ssize_t nsrc = sources.shape[0]
    cdef Py_ssize_t heap_cap = nsrc + adj_eid.shape[0] + 16
    cdef cap_t* hkey = <cap_t*> malloc(heap_cap * sizeof(cap_t))
    cdef int* hnode = <int*> malloc(heap_cap * sizeof(int))
    if hkey == NULL or hnode == NULL:
        free(hkey); free(hnode)
        raise MemoryError()

    cdef Py_ssize_t hsize = 0, pos, parent, child, i
    cdef cap_t d, nd, kd
    cdef int u, v, kn, k
    cdef int hit = -1

    with nogil:
        for i in range(nsrc):
            u = sources[i]
            dist[u] = 0
            hkey[hsize] = 0
            hnode[hsize] = u
            pos = hsize
            hsize += 1
            while pos > 0:
                parent = (pos - 1) >> 1
                if hkey[parent] <= hkey[pos]:
                    break
                kd = hkey[pos]; hkey[pos] = hkey[parent]; hkey[parent] = kd
                kn = hnode[pos]; hnode[pos] = hnode[parent]; hnode[parent] = kn
                pos = parent

        while hsize > 0:
            d = hkey[0]
            u = hnode[0]
            hsize -= 1
            hkey[0] = hkey[hsize]
            hnode[0] = hnode[hsize]
            pos = 0
            while True:
                child = 2 * pos + 1
                if child >= hsize:
                    break
                if child + 1 < hsize and hkey[child + 1] < hkey[child]:
                    child += 1
                if hkey[child] < hkey[pos]:
                    kd = hkey[pos]; hkey[pos] = hkey[child]; hkey[child] = kd
                    kn = hnode[pos]; hnode[pos] = hnode[child]; hnode[child] = kn
                    pos = child
                else:
                    break
            if settled[u]:
                continue
            settled[u] = 1
            if has_targets and targets[u]:
                hit = u
                break
            for k in range(adj_start[u], adj_start[u + 1]):
                v = adj_to[k]
                if settled[v]:
                    continue
                nd = d + weights[adj_eid[k]]
                if nd < dist[v]:
                    dist[v] = nd
                    parent_node[v] = u
                    parent_eid[v] = adj_eid[k]
                    hkey[hsize] = nd
                    hnode[hsize] = v
                    pos = hsize
                    hsize += 1
                    while pos > 0:
                        parent = (pos - 1) >> 1
                        if hkey[parent] <= hkey[pos]:
                            break
                        kd = hkey[pos]; hkey[pos] = hkey[parent]; hkey[parent] = kd
                        kn = hnode[pos]; hnode[pos] = hnode[parent]; hnode[parent] = kn
                        pos = parent

    free(hkey)
    free(hnode)
    return dist_arr, parent_node_arr, parent_eid_arr, hit
