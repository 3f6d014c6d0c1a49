"""Python bindings for the resokit C++ library."""

from ._core import (
    DomainError,
    ParseError,
    Potential,
    ResokitError,
    __version__,
    blaschke_sum,
    cluster_boundary_lengths,
    clusters_json,
    counting_function,
    interpolate,
    jost,
    log_strip_clearance,
    obstruction_profile,
    phase_sum,
    resonances,
    set_max_threads,
)

__all__ = [
    "DomainError",
    "ParseError",
    "Potential",
    "ResokitError",
    "__version__",
    "blaschke_sum",
    "cluster_boundary_lengths",
    "clusters_json",
    "counting_function",
    "interpolate",
    "jost",
    "log_strip_clearance",
    "obstruction_profile",
    "phase_sum",
    "resonances",
    "set_max_threads",
]
