"""Concrete detection oracles, their reductions and instance handling."""

from .base import WITNESS_CAP, ReductionOracle
from .blowup import BlowUp, duplicate_blowup
from .clique import CliqueOracle, clique_oracle, clique_to_kpartite
from .ds import DSOracle, DSReduction, ds_oracle, ds_to_kpartite
from .graphs import KPartiteGraph, SimpleGraph
from .instances import (
    HypergraphInstance,
    InstanceError,
    KSumValues,
    dumps_instance,
    instance_from_dict,
    load_instance,
    planted_clique_graph,
    random_graph,
    random_hypergraph,
    random_ksum,
    save_instance,
)
from .ksum import KSumInstance, KSumOracle, ksum_oracle, ksum_to_colorful
from .matrix import bool_matmul, count_matmul, trace_count, trace_nonzero
from .partition import partition_three, partition_two

__all__ = [
    "WITNESS_CAP",
    "ReductionOracle",
    "BlowUp",
    "duplicate_blowup",
    "CliqueOracle",
    "clique_oracle",
    "clique_to_kpartite",
    "DSOracle",
    "DSReduction",
    "ds_oracle",
    "ds_to_kpartite",
    "KPartiteGraph",
    "SimpleGraph",
    "HypergraphInstance",
    "InstanceError",
    "KSumValues",
    "dumps_instance",
    "instance_from_dict",
    "load_instance",
    "planted_clique_graph",
    "random_graph",
    "random_hypergraph",
    "random_ksum",
    "save_instance",
    "KSumInstance",
    "KSumOracle",
    "ksum_oracle",
    "ksum_to_colorful",
    "bool_matmul",
    "count_matmul",
    "trace_count",
    "trace_nonzero",
    "partition_three",
    "partition_two",
]
