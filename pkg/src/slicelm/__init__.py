"""Lateral-movement detection on host-container access graphs of sliced 5G cores.

Pipeline: :func:`ingest.read_event_stream` -> :func:`graph.build_graph` ->
:func:`paths.enumerate_paths` -> :func:`scoring.score_path` ->
:func:`detect.calibrate_threshold` / :func:`detect.detect_paths` ->
:func:`evaluate.evaluate_edges`. :mod:`slicelm.sim` produces labeled datasets
to drive it.
"""

from .detect import (
    DetectionReport,
    DetectorParams,
    Threshold,
    apply_fp_filter,
    calibrate_threshold,
    detect_paths,
    predicted_edge_set,
)
from .evaluate import Metrics, evaluate_edges
from .graph import AccessEdge, AccessGraph, EdgeCategory, EdgeId, build_graph
from .ingest import AccessEvent, EventKind, EventStream, parse_raw_line, read_event_stream
from .model import Topology, default_topology, load_topology
from .paths import Path, enumerate_paths
from .scoring import (
    DetectorVariant,
    EdgeProbTable,
    ScoredPath,
    SubScores,
    edge_prob,
    learn_edge_probs,
    score_path,
)
from .sim import SimConfig, simulate

__version__ = "0.1.0"

__all__ = [
    "AccessEdge",
    "AccessEvent",
    "AccessGraph",
    "DetectionReport",
    "DetectorParams",
    "DetectorVariant",
    "EdgeCategory",
    "EdgeId",
    "EdgeProbTable",
    "EventKind",
    "EventStream",
    "Metrics",
    "Path",
    "ScoredPath",
    "SimConfig",
    "SubScores",
    "Threshold",
    "Topology",
    "apply_fp_filter",
    "build_graph",
    "calibrate_threshold",
    "default_topology",
    "detect_paths",
    "edge_prob",
    "enumerate_paths",
    "evaluate_edges",
    "learn_edge_probs",
    "load_topology",
    "parse_raw_line",
    "predicted_edge_set",
    "read_event_stream",
    "score_path",
    "simulate",
]
