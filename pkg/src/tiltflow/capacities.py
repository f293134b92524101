"""Capacity distributions and reproducible i.i.d. capacity sampling.

Each edge draw is a pure function of (seed, replication, edge index):
a counter-based Philox stream is keyed by (seed, replication) and edge i
consumes exactly the i-th 64-bit position, so draws can be reproduced
for any subset of edges in any order, and permuting the edge enumeration
permutes the values with it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from tiltflow.errors import UnsupportedMode

__all__ = [
    "Dirac",
    "Bernoulli",
    "UniformReal",
    "Exponential",
    "DiscreteTable",
    "CapacityMap",
    "sample",
    "theory_flags",
    "distribution_from_record",
]


class Distribution:
    """Common interface: moments, CDF, quantile, and sampling metadata."""

    continuous = False

    def mass_at_zero(self) -> float:
        raise NotImplementedError

    def mean(self) -> float:
        raise NotImplementedError

    def second_moment(self) -> float:
        raise NotImplementedError

    def has_finite_first_moment(self) -> bool:
        return True

    def has_finite_second_moment(self) -> bool:
        return True

    def cdf(self, x):
        raise NotImplementedError

    def quantile(self, u: np.ndarray) -> np.ndarray:
        """Inverse CDF, vectorized over uniforms in [0, 1)."""
        raise NotImplementedError

    def to_record(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Dirac(Distribution):
    value: float = 1.0

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("Dirac value must be nonnegative")

    def mass_at_zero(self):
        return 1.0 if self.value == 0 else 0.0

    def mean(self):
        return float(self.value)

    def second_moment(self):
        return float(self.value) ** 2

    def cdf(self, x):
        return np.where(np.asarray(x, dtype=float) >= self.value, 1.0, 0.0)

    def quantile(self, u):
        return np.full_like(np.asarray(u, dtype=float), float(self.value))

    def to_record(self):
        return {"kind": "dirac", "value": self.value}


@dataclass(frozen=True)
class Bernoulli(Distribution):
    """Capacity equals ``value`` with probability p, else 0."""

    p: float
    value: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("Bernoulli p must lie in [0, 1]")
        if self.value < 0:
            raise ValueError("Bernoulli value must be nonnegative")

    def mass_at_zero(self):
        return 1.0 if self.value == 0 else 1.0 - self.p

    def mean(self):
        return self.p * self.value

    def second_moment(self):
        return self.p * self.value**2

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= 0, 1.0 - self.p, 0.0)
        return np.where(x >= self.value, 1.0, out)

    def quantile(self, u):
        return np.where(np.asarray(u) >= 1.0 - self.p, float(self.value), 0.0)

    def to_record(self):
        return {"kind": "bernoulli", "p": self.p, "value": self.value}


@dataclass(frozen=True)
class UniformReal(Distribution):
    lo: float
    hi: float
    continuous = True

    def __post_init__(self):
        if self.lo < 0 or self.hi <= self.lo:
            raise ValueError("UniformReal requires 0 <= lo < hi")

    def mass_at_zero(self):
        return 0.0

    def mean(self):
        return 0.5 * (self.lo + self.hi)

    def second_moment(self):
        return (self.hi**2 + self.hi * self.lo + self.lo**2) / 3.0

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.clip((x - self.lo) / (self.hi - self.lo), 0.0, 1.0)

    def quantile(self, u):
        return self.lo + (self.hi - self.lo) * np.asarray(u, dtype=float)

    def to_record(self):
        return {"kind": "uniform", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class Exponential(Distribution):
    rate: float
    continuous = True

    def __post_init__(self):
        if self.rate <= 0:
            raise ValueError("Exponential rate must be positive")

    def mass_at_zero(self):
        return 0.0

    def mean(self):
        return 1.0 / self.rate

    def second_moment(self):
        return 2.0 / self.rate**2

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0, -np.expm1(-self.rate * x), 0.0)

    def quantile(self, u):
        return -np.log1p(-np.asarray(u, dtype=float)) / self.rate

    def to_record(self):
        return {"kind": "exponential", "rate": self.rate}


class DiscreteTable(Distribution):
    """Finitely supported distribution given by atoms and probabilities."""

    def __init__(self, values, probs):
        values = np.asarray(values, dtype=np.float64)
        probs = np.asarray(probs, dtype=np.float64)
        if values.ndim != 1 or values.shape != probs.shape or len(values) == 0:
            raise ValueError("values and probs must be equal-length 1-d sequences")
        if np.any(values < 0) or np.any(probs < 0):
            raise ValueError("values and probs must be nonnegative")
        if abs(probs.sum() - 1.0) > 1e-12:
            raise ValueError("probs must sum to 1 within 1e-12")
        order = np.argsort(values, kind="stable")
        self.values = values[order]
        self.probs = probs[order]
        self._cum = np.cumsum(self.probs)

    def __repr__(self):
        return f"DiscreteTable(values={self.values.tolist()}, probs={self.probs.tolist()})"

    def __eq__(self, other):
        return (
            isinstance(other, DiscreteTable)
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.probs, other.probs)
        )

    def mass_at_zero(self):
        return float(self.probs[np.abs(self.values) <= 1e-12].sum())

    def mean(self):
        return float(np.dot(self.probs, self.values))

    def second_moment(self):
        return float(np.dot(self.probs, self.values**2))

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.values, x, side="right")
        cum = np.concatenate([[0.0], self._cum])
        return cum[idx]

    def quantile(self, u):
        idx = np.searchsorted(self._cum, np.asarray(u, dtype=float), side="right")
        idx = np.minimum(idx, len(self.values) - 1)
        return self.values[idx]

    def to_record(self):
        return {
            "kind": "table",
            "values": self.values.tolist(),
            "probs": self.probs.tolist(),
        }


@dataclass(frozen=True)
class CapacityMap:
    """Nonnegative capacities indexed by edge index.

    In exact_integer mode, values are stored as int64 numerators of
    multiples of 1/scale so flow arithmetic stays exact; in real mode
    they are plain float64.
    """

    mode: str                 # "exact_integer" | "real"
    seed: int
    replication: int
    scale: int | None         # None in real mode
    numerators: np.ndarray | None
    _real_values: np.ndarray | None

    @property
    def values(self) -> np.ndarray:
        if self.mode == "exact_integer":
            return self.numerators.astype(np.float64) / self.scale
        return self._real_values

    @property
    def n_edges(self) -> int:
        arr = self.numerators if self.mode == "exact_integer" else self._real_values
        return len(arr)

    def weights(self) -> np.ndarray:
        """Array used by the flow/dual kernels: int64 numerators or float64."""
        if self.mode == "exact_integer":
            return self.numerators
        return self._real_values

    def value_from_weight(self, w):
        """Convert a kernel-scale weight back to capacity units."""
        if self.mode == "exact_integer":
            return float(w) / self.scale
        return float(w)


def _integer_scale_ok(dist: Distribution, scale: int) -> bool:
    if isinstance(dist, Dirac):
        atoms = [dist.value]
    elif isinstance(dist, Bernoulli):
        atoms = [0.0, dist.value]
    elif isinstance(dist, DiscreteTable):
        atoms = dist.values
    else:
        return False
    return all(abs(a * scale - round(a * scale)) <= 1e-9 for a in atoms)


def _uniform_stream(seed: int, replication: int, count: int) -> np.ndarray:
    key = np.array([np.uint64(seed), np.uint64(replication)], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.random(count)


def sample(dist: Distribution, graph, seed: int, replication: int = 0,
           mode: str | None = None, scale: int | None = None) -> CapacityMap:
    """Sample one i.i.d. capacity per edge of ``graph``.

    mode defaults to exact_integer for discrete kinds (scale 1 when the
    atoms are integers) and to real for continuous kinds.  Requesting
    exact_integer for a continuous law, or with a scale that does not
    make every atom integral, raises UnsupportedMode.
    """
    m = graph.n_edges
    if mode is None:
        mode = "real" if dist.continuous else "exact_integer"
    if mode not in ("exact_integer", "real"):
        raise UnsupportedMode(f"unknown mode {mode!r}")

    if mode == "exact_integer":
        if dist.continuous:
            raise UnsupportedMode(
                f"exact_integer mode is unsupported for {type(dist).__name__}"
            )
        if scale is None:
            scale = 1
        if int(scale) != scale or scale < 1:
            raise UnsupportedMode(f"scale must be a positive integer, got {scale}")
        scale = int(scale)
        if not _integer_scale_ok(dist, scale):
            raise UnsupportedMode(
                f"scale {scale} does not make every atom of {dist!r} integral"
            )
        if isinstance(dist, Dirac):
            values = np.full(m, float(dist.value))
        else:
            values = dist.quantile(_uniform_stream(seed, replication, m))
        numer = np.rint(values * scale).astype(np.int64)
        return CapacityMap(
            mode="exact_integer",
            seed=int(seed),
            replication=int(replication),
            scale=scale,
            numerators=numer,
            _real_values=None,
        )

    if isinstance(dist, Dirac):
        values = np.full(m, float(dist.value))
    else:
        values = np.asarray(
            dist.quantile(_uniform_stream(seed, replication, m)), dtype=np.float64
        )
    return CapacityMap(
        mode="real",
        seed=int(seed),
        replication=int(replication),
        scale=None,
        numerators=None,
        _real_values=values,
    )


def theory_flags(dist: Distribution) -> dict:
    """Distribution metadata the limit theory consumes.

    nu_positive reports whether the flow constant is strictly positive,
    which holds exactly when the mass at zero is below 1/2.
    """
    f0 = dist.mass_at_zero()
    return {
        "F0": f0,
        "mean": dist.mean() if dist.has_finite_first_moment() else math.inf,
        "second_moment": dist.second_moment() if dist.has_finite_second_moment() else math.inf,
        "nu_positive": f0 < 0.5,
    }


def distribution_from_record(record: dict) -> Distribution:
    """Build a Distribution from its tagged JSON record."""
    if not isinstance(record, dict) or "kind" not in record:
        raise ValueError("distribution record must be a dict with a 'kind' tag")
    rec = dict(record)
    kind = rec.pop("kind")
    try:
        if kind == "dirac":
            return Dirac(**rec)
        if kind == "bernoulli":
            return Bernoulli(**rec)
        if kind == "uniform":
            return UniformReal(**rec)
        if kind == "exponential":
            return Exponential(**rec)
        if kind == "table":
            return DiscreteTable(**rec)
    except TypeError as exc:
        raise ValueError(f"bad parameters for distribution kind {kind!r}: {exc}") from exc
    raise ValueError(f"unknown distribution kind {kind!r}")
