"""Dual geodesics and the planar-duality identity.

A minimal cut between the top and the bottom of a cylinder dualizes to
a self-avoiding path between the left and right dual terminal sets, so
the maximal top-bottom flow equals the minimum weight of such a path.
This module computes those paths (multi-source Dijkstra with the primal
capacities as weights) and certifies the equality, which is the central
cross-algorithm oracle of the package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tiltflow._backend import kernels
from tiltflow.capacities import CapacityMap
from tiltflow.errors import CapacityLengthMismatch, NoDualTerminals
from tiltflow.flow import DUALITY_RTOL, phi
from tiltflow.lattice import CylinderGraph, CylinderSpec, DualGraph, build_cylinder, build_dual

__all__ = [
    "DualPathResult",
    "PairDistanceTable",
    "DualityReport",
    "dual_shortest_path",
    "enumerate_boundary_pair_distances",
    "verify_duality",
]


@dataclass(frozen=True)
class DualPathResult:
    """Minimum-weight left-to-right dual path.

    path holds dual vertex coordinates in order; exactly its first
    vertex lies in left_star and exactly its last in right_star.
    crossed_edges are the primal edge indices the path severs, and
    weight is the sum of their capacities.
    """

    weight: float
    path: np.ndarray           # (k, 2) float64 dual vertex centres
    path_ids: np.ndarray       # (k,) dual vertex indices
    crossed_edges: np.ndarray  # primal edge indices, in path order
    weight_numer: int | None = None


@dataclass(frozen=True)
class PairDistanceTable:
    """All-pairs dual distances between left and right terminals."""

    left_ids: np.ndarray
    right_ids: np.ndarray
    distances: np.ndarray  # (|left|, |right|) in capacity units
    distances_numer: np.ndarray | None = None  # int64 numerators in integer mode

    @property
    def size(self) -> int:
        return self.distances.size

    def min(self):
        return self.distances.min()

    def rows(self):
        for i, u in enumerate(self.left_ids):
            for j, v in enumerate(self.right_ids):
                yield int(u), int(v), self.distances[i, j]


@dataclass(frozen=True)
class DualityReport:
    flow_value: float
    dual_weight: float
    equal: bool
    discrepancy: float


def _dual_csr(dual: DualGraph):
    n = dual.n_dual_vertices
    de = dual.dual_edges
    tails = np.concatenate([de[:, 0], de[:, 1]]).astype(np.int64)
    heads = np.concatenate([de[:, 1], de[:, 0]]).astype(np.int32)
    eids = np.concatenate([np.arange(len(de)), np.arange(len(de))]).astype(np.int32)
    order = np.argsort(tails, kind="stable")
    counts = np.bincount(tails, minlength=n)
    adj_start = np.zeros(n + 1, dtype=np.int32)
    adj_start[1:] = np.cumsum(counts).astype(np.int32)
    return adj_start, heads[order], eids[order]


def _check_terminals(dual: DualGraph):
    if dual.left_star.size == 0 or dual.right_star.size == 0:
        raise NoDualTerminals("left or right dual terminal set is empty")


def _weights_for(dual: DualGraph, caps: CapacityMap) -> np.ndarray:
    if caps.n_edges != dual.graph.n_edges:
        raise CapacityLengthMismatch(
            f"{caps.n_edges} capacities for {dual.graph.n_edges} edges"
        )
    return caps.weights()


def dual_shortest_path(dual: DualGraph, caps: CapacityMap) -> DualPathResult:
    """Minimum-weight dual path from left_star to right_star.

    The Dijkstra tree path is trimmed so that only its endpoints touch
    the terminal sets (zero-weight prefixes through other terminals are
    dropped), preserving the optimal weight.
    """
    _check_terminals(dual)
    weights = _weights_for(dual, caps)
    adj_start, adj_to, adj_eid = _dual_csr(dual)
    n = dual.n_dual_vertices
    target_mask = np.zeros(n, dtype=np.uint8)
    target_mask[dual.right_star] = 1
    sources = dual.left_star.astype(np.int32)
    dist, parent_node, parent_eid, hit = kernels.dijkstra(
        n, adj_start, adj_to, adj_eid, weights, sources, target_mask
    )
    if hit < 0:
        raise NoDualTerminals("right terminal set unreachable in the dual graph")

    ids = [int(hit)]
    eids = []
    u = int(hit)
    while parent_node[u] >= 0:
        eids.append(int(parent_eid[u]))
        u = int(parent_node[u])
        ids.append(u)
    ids.reverse()
    eids.reverse()

    left_set = set(int(v) for v in dual.left_star)
    right_set = set(int(v) for v in dual.right_star)
    start = max(i for i, v in enumerate(ids) if v in left_set)
    stop = min(i for i, v in enumerate(ids) if i >= start and v in right_set)
    ids = ids[start : stop + 1]
    eids = eids[start:stop]

    crossed = np.array(eids, dtype=np.int64)
    w = weights[crossed].sum() if len(crossed) else weights.dtype.type(0)
    integer = caps.mode == "exact_integer"
    return DualPathResult(
        weight=caps.value_from_weight(w),
        path=dual.dual_vertices[ids],
        path_ids=np.array(ids, dtype=np.int64),
        crossed_edges=crossed,
        weight_numer=int(w) if integer else None,
    )


def enumerate_boundary_pair_distances(dual: DualGraph, caps: CapacityMap) -> PairDistanceTable:
    """Dual distances for every (left terminal, right terminal) pair.

    The finite family of boundary conditions a cylinder supports is
    realized by these O(h^2) terminal pairs; the table minimum equals
    the top-bottom maximal flow.
    """
    _check_terminals(dual)
    weights = _weights_for(dual, caps)
    adj_start, adj_to, adj_eid = _dual_csr(dual)
    n = dual.n_dual_vertices
    out = np.empty((dual.left_star.size, dual.right_star.size), dtype=weights.dtype)
    for i, u in enumerate(dual.left_star):
        dist, _, _, _ = kernels.dijkstra(
            n,
            adj_start,
            adj_to,
            adj_eid,
            weights,
            np.array([u], dtype=np.int32),
            None,
        )
        out[i] = dist[dual.right_star]
    if caps.mode == "exact_integer":
        scaled = out.astype(np.float64) / caps.scale
    else:
        scaled = out
    table = PairDistanceTable(
        left_ids=dual.left_star.copy(),
        right_ids=dual.right_star.copy(),
        distances=scaled,
    )
    # keep exact numerators available for integer-mode comparisons
    object.__setattr__(table, "_numer", out if caps.mode == "exact_integer" else None)
    return table


def verify_duality(spec: CylinderSpec, caps: CapacityMap) -> DualityReport:
    """Certify flow value == dual geodesic weight for one instance.

    Exact equality in integer mode; within a relative tolerance of
    1e-6 in real mode.
    """
    graph = build_cylinder(spec)
    flow_res = phi(graph, caps)
    dual = build_dual(graph)
    path = dual_shortest_path(dual, caps)
    if caps.mode == "exact_integer":
        equal = flow_res.value_numer == path.weight_numer
        discrepancy = abs(flow_res.value_numer - path.weight_numer) / caps.scale
    else:
        discrepancy = abs(flow_res.value - path.weight)
        equal = discrepancy <= DUALITY_RTOL * (1.0 + flow_res.value)
    return DualityReport(
        flow_value=flow_res.value,
        dual_weight=path.weight,
        equal=bool(equal),
        discrepancy=float(discrepancy),
    )
