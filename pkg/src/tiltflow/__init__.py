"""Maximal flows through tilted cylinders of the square lattice.

The package builds discrete cylinders (rectangles swept from a basis
segment along its unit normal), equips their edges with reproducibly
sampled random capacities, computes exact maximal flows / minimal cuts
between boundary pieces, certifies the planar-duality identity between
top-bottom min cuts and side-to-side dual geodesics, and estimates the
direction-dependent flow constant by Monte Carlo.

Hot kernels (blocking-flow max-flow and multi-source Dijkstra) run in a
compiled extension when available, with a pure-Python fallback selected
at import time (see :mod:`tiltflow._backend`).
"""

from tiltflow._backend import BACKEND
from tiltflow import capacities, cli, duality, estimate, flow, lattice

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    "capacities",
    "cli",
    "duality",
    "estimate",
    "flow",
    "lattice",
]
