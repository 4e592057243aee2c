"""Densest temporal episodes: split a timeline into k intervals whose induced
subgraphs have maximal total density."""
from .coverage import CountMinSketch, CoverReport, CoverState, cover_report, kgcvr_segment
from .incremental import IncrementalDensest, find, find_densest, update_stream
from .segmentation import (
    MODES,
    Episode,
    InfeasibleError,
    Segmentation,
    approx_dp_segment,
    brute_force_segment,
    exact_dp_segment,
    post_process,
    segment,
)
from .static_densest import (
    DensestResult,
    NodeWeights,
    brute_force_densest,
    charikar_peel,
    exact_densest,
    greedy_k_static,
    static_greedy_generalized,
)
from .synth import GroundTruth, SyntheticSpec, evaluate, generate, synthetic1, synthetic2
from .temporal_graph import EdgeListError, Interval, StaticGraph, TemporalGraph, parse_edge_list

__version__ = "0.1.0"

__all__ = [
    "MODES",
    "CountMinSketch",
    "CoverReport",
    "CoverState",
    "DensestResult",
    "EdgeListError",
    "Episode",
    "GroundTruth",
    "IncrementalDensest",
    "InfeasibleError",
    "Interval",
    "NodeWeights",
    "Segmentation",
    "StaticGraph",
    "SyntheticSpec",
    "TemporalGraph",
    "approx_dp_segment",
    "brute_force_densest",
    "brute_force_segment",
    "charikar_peel",
    "cover_report",
    "evaluate",
    "exact_densest",
    "exact_dp_segment",
    "find",
    "find_densest",
    "generate",
    "greedy_k_static",
    "kgcvr_segment",
    "parse_edge_list",
    "post_process",
    "segment",
    "static_greedy_generalized",
    "synthetic1",
    "synthetic2",
    "update_stream",
]
