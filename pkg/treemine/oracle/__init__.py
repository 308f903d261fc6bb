"""Brute-force ground truth for checking the miners on small inputs."""

from oracle.brute_force import (
    Host,
    OracleEntry,
    OracleResult,
    enumerate_frequent_naive,
    filter_closed_naive,
    iter_embeddings,
    pattern_to_shape,
    run_oracle,
    shape_to_pattern,
)

__all__ = [
    "Host",
    "OracleEntry",
    "OracleResult",
    "enumerate_frequent_naive",
    "filter_closed_naive",
    "iter_embeddings",
    "pattern_to_shape",
    "run_oracle",
    "shape_to_pattern",
]
