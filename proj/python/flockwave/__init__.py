"""Flock dynamics with next-nearest-neighbour coupling."""

from ._core import (
    FlockSpec,
    FlockwaveError,
    __version__,
    characterize,
    classify,
    eigencurves,
    line_eigen_stability,
    load_spec,
    parse_spec,
    signal_velocities,
    simulate,
    validate,
)

__all__ = [
    "FlockSpec",
    "FlockwaveError",
    "__version__",
    "characterize",
    "classify",
    "eigencurves",
    "line_eigen_stability",
    "load_spec",
    "parse_spec",
    "signal_velocities",
    "simulate",
    "validate",
]
