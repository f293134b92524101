"""Exception types raised by the public API."""


class TiltflowError(Exception):
    """Base class for all package errors."""


class InvalidSpec(TiltflowError):
    """Cylinder description violates an orthogonality or positivity constraint."""


class DegenerateCylinder(TiltflowError):
    """Cylinder too small to carry the boundary structure (h < 1, width < 2,
    no interior lattice point, or top/bottom sets would intersect)."""


class NotAdmissible(TiltflowError):
    """Boundary condition (k, theta_tilde) fails the admissibility window test."""


class ChordOutside(TiltflowError):
    """Chord endpoint d falls outside the right side (numerically inconsistent input)."""


class UnsupportedMode(TiltflowError):
    """Capacity sampling mode incompatible with the distribution."""


class OverlappingTerminals(TiltflowError):
    """Source and sink vertex sets intersect."""


class CapacityLengthMismatch(TiltflowError):
    """Capacity array length does not match the graph's edge count."""


class NoDualTerminals(TiltflowError):
    """Dual graph has an empty left or right terminal set."""


class InfiniteMean(TiltflowError):
    """Distribution lacks the finite first moment required by the estimator."""


class BadSchedule(TiltflowError):
    """Size schedule n_values is not strictly increasing, or the height rule
    does not increase along it."""


class ScheduleViolation(TiltflowError):
    """log h(n) / n increases across the last supplied sizes."""


class ZeroFlowRegime(TiltflowError):
    """Distribution has mass >= 1/2 at zero, so the deviation experiment is vacuous."""


class EmptyGrid(TiltflowError):
    """Angle grid for the limit functional is empty or below the minimum size."""


class ConfigError(TiltflowError):
    """Experiment configuration failed validation."""
