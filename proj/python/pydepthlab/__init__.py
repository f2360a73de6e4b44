from ._core import (
    contaminate,
    depth,
    depth_contours,
    depth_region,
    max_depth,
    run_experiment,
    sample,
    simulate_limit,
    tukey_median,
)

__all__ = [
    "contaminate",
    "depth",
    "depth_contours",
    "depth_region",
    "max_depth",
    "run_experiment",
    "sample",
    "simulate_limit",
    "tukey_median",
]
