"""Discrete tilted cylinders on the square lattice.

A cylinder is the closed rectangle swept by translating a basis segment
[a, b] (scaled by an integer n) along its unit normal v = (cos theta,
sin theta) over [-h, h].  This module builds the induced subgraph of Z^2
inside that region, classifies boundary vertices by which face their
exit edges cross (top, bottom, left, right), splits the outer boundary
by an admissible chord condition (k, theta_tilde), and constructs the
planar dual graph together with its side terminal sets.

Conventions: theta in [0, pi) is always the angle of the *normal*;
the in-segment direction is w = (sin theta, -cos theta), and endpoints
are labelled so that (b - a) . w > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from tiltflow.errors import (
    ChordOutside,
    DegenerateCylinder,
    InvalidSpec,
    NotAdmissible,
)

# Closed point-in-region and face-crossing tests expand by this tolerance so
# lattice points exactly on the boundary are kept deterministically.
GEOM_TOL = 1e-9


@dataclass(frozen=True)
class CylinderSpec:
    """Continuous description of a tilted cylinder.

    The basis segment runs from ``a`` to ``b``; the cylinder uses the
    scaled segment n*a -> n*b and extends height_h on both sides of it
    along the normal (cos theta, sin theta).  Endpoints are normalized
    at construction so that (b - a) . (sin theta, -cos theta) > 0.
    """

    a: tuple[float, float]
    b: tuple[float, float]
    theta: float
    scale_n: int
    height_h: float

    def __post_init__(self):
        ax, ay = float(self.a[0]), float(self.a[1])
        bx, by = float(self.b[0]), float(self.b[1])
        if not (0.0 <= self.theta < math.pi):
            raise InvalidSpec(f"theta must lie in [0, pi), got {self.theta}")
        if int(self.scale_n) != self.scale_n or self.scale_n < 1:
            raise InvalidSpec(f"scale_n must be a positive integer, got {self.scale_n}")
        if not self.height_h > 0:
            raise InvalidSpec(f"height_h must be positive, got {self.height_h}")
        dx, dy = bx - ax, by - ay
        length = math.hypot(dx, dy)
        if length <= 0:
            raise InvalidSpec("basis segment has zero length")
        vx, vy = math.cos(self.theta), math.sin(self.theta)
        if abs(dx * vx + dy * vy) > 1e-12:
            raise InvalidSpec(
                "basis segment is not orthogonal to the normal (cos theta, sin theta)"
            )
        # Endpoint labels follow the orientation convention; swap if needed.
        if dx * math.sin(self.theta) - dy * math.cos(self.theta) < 0:
            object.__setattr__(self, "a", (bx, by))
            object.__setattr__(self, "b", (ax, ay))
        else:
            object.__setattr__(self, "a", (ax, ay))
            object.__setattr__(self, "b", (bx, by))
        object.__setattr__(self, "scale_n", int(self.scale_n))
        object.__setattr__(self, "height_h", float(self.height_h))
        object.__setattr__(self, "theta", float(self.theta))

    @property
    def normal(self) -> tuple[float, float]:
        return (math.cos(self.theta), math.sin(self.theta))

    @property
    def along(self) -> tuple[float, float]:
        """Unit vector from a to b (the perp of the normal)."""
        return (math.sin(self.theta), -math.cos(self.theta))

    @property
    def basis_length(self) -> float:
        """Euclidean length of the unscaled basis segment."""
        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])

    @property
    def scaled_length(self) -> float:
        """Length of the scaled basis n * l(A)."""
        return self.scale_n * self.basis_length

    @property
    def origin(self) -> tuple[float, float]:
        """Scaled left endpoint n * a."""
        return (self.scale_n * self.a[0], self.scale_n * self.a[1])

    def frame_coords(self, x: float, y: float) -> tuple[float, float]:
        """Return (s, t): chord parameter along the basis and normal offset."""
        ox, oy = self.origin
        wx, wy = self.along
        vx, vy = self.normal
        px, py = x - ox, y - oy
        return (px * wx + py * wy, px * vx + py * vy)

    def contains(self, x: float, y: float) -> bool:
        s, t = self.frame_coords(x, y)
        h = self.height_h
        return (-GEOM_TOL <= s <= self.scaled_length + GEOM_TOL) and (
            -h - GEOM_TOL <= t <= h + GEOM_TOL
        )


@dataclass(frozen=True)
class CylinderGraph:
    """Induced lattice subgraph of a cylinder with classified boundary sets.

    Vertices are sorted lexicographically by coordinates; edges are sorted
    lexicographically by (lower endpoint, upper endpoint) and their row
    index is the stable edge index used everywhere else.
    """

    spec: CylinderSpec
    vertices: np.ndarray        # (V, 2) int64, lex sorted
    edges: np.ndarray           # (E, 2) int32 vertex indices, u < v lex
    boundary_top: np.ndarray    # vertex indices, sorted
    boundary_bottom: np.ndarray
    boundary_left: np.ndarray
    boundary_right: np.ndarray
    outer_boundary: np.ndarray  # vertices with a lattice neighbour outside the region
    _index: dict = field(repr=False)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def vertex_id(self, x: int, y: int) -> int:
        return self._index[(x, y)]

    def edge_endpoints(self, eid: int) -> tuple[tuple[int, int], tuple[int, int]]:
        u, v = self.edges[eid]
        return tuple(self.vertices[u]), tuple(self.vertices[v])


@dataclass(frozen=True)
class BoundaryCondition:
    """An admissible boundary condition and the vertex split it realizes.

    The chord through c (at height 2kh on the left side) orthogonal to
    v(theta_tilde) divides the outer boundary into the side A1 toward
    the top face and the side A2 toward the bottom; vertices within
    GEOM_TOL of the chord line are cut through and belong to neither.
    """

    k: float
    theta_tilde: float
    realized_split: tuple[np.ndarray, np.ndarray]
    c: tuple[float, float]
    d: tuple[float, float]


@dataclass(frozen=True)
class DualGraph:
    """Planar dual of a cylinder graph.

    One dual edge per primal edge (same row index), crossing it
    perpendicularly at its midpoint.  left_star / right_star are the
    outer endpoints of dual edges whose segment crosses the left / right
    side of the cylinder; dual geodesics between them realize minimal
    top-bottom cuts.
    """

    graph: CylinderGraph
    dual_vertices: np.ndarray  # (W, 2) float64 centres on (Z + 1/2)^2
    dual_edges: np.ndarray     # (E, 2) int32 dual vertex indices, row = primal edge
    left_star: np.ndarray      # dual vertex indices, sorted
    right_star: np.ndarray

    @property
    def n_dual_vertices(self) -> int:
        return len(self.dual_vertices)

    def primal_edge_of(self, dual_eid: int) -> int:
        """Dual edges carry the index of the primal edge they cross."""
        return dual_eid


def _face_crossing(s1, t1, s2, t2, axis_value, lo, hi, along_first):
    """Does the segment (s1,t1)-(s2,t2) meet the face at coordinate
    ``axis_value`` spanning [lo, hi] in the other coordinate?

    ``along_first`` selects whether the face is a t = const segment
    (True: top/bottom, s spans [lo, hi]) or an s = const segment.
    """
    if along_first:
        u1, u2, w1, w2 = t1, t2, s1, s2
    else:
        u1, u2, w1, w2 = s1, s2, t1, t2
    du = u2 - u1
    if abs(du) < 1e-15:
        if abs(u1 - axis_value) > GEOM_TOL:
            return False
        return max(w1, w2) >= lo - GEOM_TOL and min(w1, w2) <= hi + GEOM_TOL
    lam = (axis_value - u1) / du
    if lam < -GEOM_TOL or lam > 1 + GEOM_TOL:
        return False
    w = w1 + lam * (w2 - w1)
    return lo - GEOM_TOL <= w <= hi + GEOM_TOL


def build_cylinder(spec: CylinderSpec) -> CylinderGraph:
    """Build the induced subgraph of Z^2 inside the cylinder of spec.

    Boundary classification: a vertex is in the top (bottom, left, right)
    set iff it has a lattice neighbour outside the region and the edge
    segment toward it crosses the corresponding face.  Corner vertices may
    belong to several sets.

    Raises DegenerateCylinder when h < 1, the scaled basis is shorter
    than 2, no lattice vertex lies inside, or top and bottom intersect.
    """
    h = spec.height_h
    L = spec.scaled_length
    if h < 1 - 1e-12:
        raise DegenerateCylinder(f"height_h must be >= 1, got {h}")
    if L < 2 - 1e-12:
        raise DegenerateCylinder(f"scaled basis length must be >= 2, got {L}")

    ox, oy = spec.origin
    vx, vy = spec.normal
    wx, wy = spec.along
    corners_x = [ox + t * vx + s * wx for s in (0.0, L) for t in (-h, h)]
    corners_y = [oy + t * vy + s * wy for s in (0.0, L) for t in (-h, h)]
    xmin = math.floor(min(corners_x)) - 1
    xmax = math.ceil(max(corners_x)) + 1
    ymin = math.floor(min(corners_y)) - 1
    ymax = math.ceil(max(corners_y)) + 1

    xs = np.arange(xmin, xmax + 1, dtype=np.int64)
    ys = np.arange(ymin, ymax + 1, dtype=np.int64)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    px = gx.ravel().astype(np.float64) - ox
    py = gy.ravel().astype(np.float64) - oy
    ss = px * wx + py * wy
    tt = px * vx + py * vy
    keep = (
        (ss >= -GEOM_TOL)
        & (ss <= L + GEOM_TOL)
        & (tt >= -h - GEOM_TOL)
        & (tt <= h + GEOM_TOL)
    )
    vertices = np.column_stack([gx.ravel()[keep], gy.ravel()[keep]])
    if len(vertices) == 0:
        raise DegenerateCylinder("no lattice vertex inside the cylinder")
    # meshgrid with ij indexing already yields lexicographic (x, y) order
    index = {(int(x), int(y)): i for i, (x, y) in enumerate(vertices)}

    s_of = dict(zip(index.keys(), ss[keep]))
    t_of = dict(zip(index.keys(), tt[keep]))

    def frame(pt):
        if pt in s_of:
            return s_of[pt], t_of[pt]
        fx, fy = pt[0] - ox, pt[1] - oy
        return fx * wx + fy * wy, fx * vx + fy * vy

    edges = []
    for (x, y), u in index.items():
        for nb in ((x, y + 1), (x + 1, y)):
            v = index.get(nb)
            if v is not None:
                edges.append((u, v))
    edges = np.array(edges, dtype=np.int32).reshape(-1, 2)

    top, bottom, left, right, outer = [], [], [], [], []
    for (x, y), u in index.items():
        on_outer = False
        for nb in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if nb in index:
                continue
            s2, t2 = frame(nb)
            if (
                -GEOM_TOL <= s2 <= L + GEOM_TOL
                and -h - GEOM_TOL <= t2 <= h + GEOM_TOL
            ):
                # neighbour is geometrically inside; cannot happen for lattice
                # points (every inside point is a vertex), kept as a guard
                continue
            on_outer = True
            s1, t1 = s_of[(x, y)], t_of[(x, y)]
            if _face_crossing(s1, t1, s2, t2, h, 0.0, L, True):
                top.append(u)
            if _face_crossing(s1, t1, s2, t2, -h, 0.0, L, True):
                bottom.append(u)
            if _face_crossing(s1, t1, s2, t2, 0.0, -h, h, False):
                left.append(u)
            if _face_crossing(s1, t1, s2, t2, L, -h, h, False):
                right.append(u)
        if on_outer:
            outer.append(u)

    top = np.unique(np.array(top, dtype=np.int64))
    bottom = np.unique(np.array(bottom, dtype=np.int64))
    left = np.unique(np.array(left, dtype=np.int64))
    right = np.unique(np.array(right, dtype=np.int64))
    outer = np.unique(np.array(outer, dtype=np.int64))
    if np.intersect1d(top, bottom).size:
        raise DegenerateCylinder("top and bottom boundary sets intersect")

    return CylinderGraph(
        spec=spec,
        vertices=vertices,
        edges=edges,
        boundary_top=top,
        boundary_bottom=bottom,
        boundary_left=left,
        boundary_right=right,
        outer_boundary=outer,
        _index=index,
    )


def admissible_window(spec: CylinderSpec) -> tuple[float, float]:
    """Closed angle interval, symmetric about theta, of admissible chord angles."""
    half = math.atan(2.0 * spec.height_h / spec.scaled_length)
    return (spec.theta - half, spec.theta + half)


def split_boundary(graph: CylinderGraph, k: float, theta_tilde: float) -> BoundaryCondition:
    """Split the outer boundary by the chord of condition (k, theta_tilde).

    The chord starts at c = n*a + (2k-1) h v(theta) on the left side and
    runs orthogonally to v(theta_tilde) until it hits the right side at d.
    A1 collects outer-boundary vertices on the v(theta_tilde) side of the
    chord line (toward the top face), A2 the opposite side; vertices on
    the line (within GEOM_TOL) belong to neither.
    """
    spec = graph.spec
    h = spec.height_h
    L = spec.scaled_length
    dtheta = theta_tilde - spec.theta
    lo = -math.atan(2.0 * h * k / L)
    hi = math.atan(2.0 * h * (1.0 - k) / L)
    if not (-GEOM_TOL <= k <= 1 + GEOM_TOL):
        raise NotAdmissible(f"k must lie in [0, 1], got {k}")
    if not (lo - GEOM_TOL <= dtheta <= hi + GEOM_TOL):
        raise NotAdmissible(
            f"theta_tilde offset {dtheta:.6g} outside [{lo:.6g}, {hi:.6g}]"
        )
    t_d = L * math.tan(dtheta) + (2.0 * k - 1.0) * h
    if abs(t_d) > h + 1e-6 * (1.0 + h):
        raise ChordOutside(f"chord endpoint offset {t_d:.6g} exceeds height {h}")

    ox, oy = spec.origin
    vx, vy = spec.normal
    wx, wy = spec.along
    cx = ox + (2.0 * k - 1.0) * h * vx
    cy = oy + (2.0 * k - 1.0) * h * vy
    dx = ox + L * wx + t_d * vx
    dy = oy + L * wy + t_d * vy

    nx, ny = math.cos(theta_tilde), math.sin(theta_tilde)
    pts = graph.vertices[graph.outer_boundary].astype(np.float64)
    side = (pts[:, 0] - cx) * nx + (pts[:, 1] - cy) * ny
    a1 = graph.outer_boundary[side > GEOM_TOL]
    a2 = graph.outer_boundary[side < -GEOM_TOL]
    return BoundaryCondition(
        k=float(k),
        theta_tilde=float(theta_tilde),
        realized_split=(a1, a2),
        c=(cx, cy),
        d=(dx, dy),
    )


def build_dual(graph: CylinderGraph) -> DualGraph:
    """Construct the planar dual restricted to the cylinder's edges.

    Face centres of Z^2 become dual vertices; the dual edge of primal
    edge i keeps row index i.  A dual vertex joins left_star (right_star)
    when it is the outer endpoint of a dual edge whose segment crosses
    the left (right) side of the cylinder.
    """
    spec = graph.spec
    verts = graph.vertices
    faces = np.empty((graph.n_edges, 2, 2), dtype=np.int64)
    for i, (u, v) in enumerate(graph.edges):
        x1, y1 = verts[u]
        x2, y2 = verts[v]
        if y1 == y2:  # horizontal primal edge -> vertical dual segment
            faces[i, 0] = (min(x1, x2), y1 - 1)
            faces[i, 1] = (min(x1, x2), y1)
        else:  # vertical primal edge -> horizontal dual segment
            faces[i, 0] = (x1 - 1, min(y1, y2))
            faces[i, 1] = (x1, min(y1, y2))

    flat = faces.reshape(-1, 2)
    uniq, inv = np.unique(flat, axis=0, return_inverse=True)
    dual_edges = inv.reshape(-1, 2).astype(np.int32)
    dual_vertices = uniq.astype(np.float64) + 0.5

    h = spec.height_h
    L = spec.scaled_length
    left_ids, right_ids = [], []
    for i in range(graph.n_edges):
        p = dual_vertices[dual_edges[i, 0]]
        q = dual_vertices[dual_edges[i, 1]]
        s1, t1 = spec.frame_coords(p[0], p[1])
        s2, t2 = spec.frame_coords(q[0], q[1])
        if abs(s1 - s2) < 1e-12:
            continue  # dual segment parallel to the side faces
        if _face_crossing(s1, t1, s2, t2, 0.0, -h, h, False):
            outer = dual_edges[i, 0] if s1 < s2 else dual_edges[i, 1]
            left_ids.append(outer)
        if _face_crossing(s1, t1, s2, t2, L, -h, h, False):
            outer = dual_edges[i, 0] if s1 > s2 else dual_edges[i, 1]
            right_ids.append(outer)

    return DualGraph(
        graph=graph,
        dual_vertices=dual_vertices,
        dual_edges=dual_edges,
        left_star=np.unique(np.array(left_ids, dtype=np.int64)),
        right_star=np.unique(np.array(right_ids, dtype=np.int64)),
    )
