"""Threshold calibration, anomaly flagging and the single-container-edge filter."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .errors import ConfigError
from .graph import DEFAULT_DEDUP_WINDOW, AccessEdge, AccessGraph, EdgeCategory, build_graph
from .ingest import EventStream
from .model import Topology
from .paths import DEFAULT_MAX_HOPS, DEFAULT_TAU, enumerate_paths
from .scoring import (
    DetectorVariant,
    EdgeProbTable,
    ScoredPath,
    edge_prob,
    learn_edge_probs,
    score_paths,
)


@dataclass(frozen=True)
class Threshold:
    variant: DetectorVariant
    alpha: float


@dataclass(frozen=True)
class DetectionReport:
    variant: DetectorVariant
    alpha: float
    flagged_paths: tuple[ScoredPath, ...]
    predicted_edges: frozenset[AccessEdge]
    filter_applied: bool = False

    def to_json(self) -> dict:
        return {
            "variant": self.variant.value,
            "alpha": self.alpha,
            "filter_applied": self.filter_applied,
            "flagged": [sp.to_json() for sp in self.flagged_paths],
            "predicted_edges": [
                e.to_json() for e in sorted(self.predicted_edges, key=AccessEdge.sort_key)
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def calibrate_threshold(
    training_scored: Iterable[ScoredPath], variant: DetectorVariant
) -> Threshold:
    """alpha is the largest training score for ``variant`` (0 with no paths)."""
    return Threshold(variant, max((sp.score[variant] for sp in training_scored), default=0.0))


def predicted_edge_set(report: DetectionReport | Iterable[ScoredPath]) -> frozenset[AccessEdge]:
    flagged = report.flagged_paths if isinstance(report, DetectionReport) else report
    return frozenset(e for sp in flagged for e in sp.path.edges)


def detect_paths(test_scored: Sequence[ScoredPath], threshold: Threshold) -> DetectionReport:
    """Flag every path whose score strictly exceeds alpha."""
    variant = threshold.variant
    flagged = []
    for sp in test_scored:
        if variant not in sp.score:
            raise ConfigError(f"path was not scored for variant {variant.value!r}")
        if sp.score[variant] > threshold.alpha:
            flagged.append(sp)
    flagged_t = tuple(flagged)
    return DetectionReport(variant, threshold.alpha, flagged_t, predicted_edge_set(flagged_t))


def apply_fp_filter(report: DetectionReport, table: EdgeProbTable) -> DetectionReport:
    """Drop flagged paths whose only host-container edge was seen in training."""
    kept = []
    for sp in report.flagged_paths:
        hc = [e for e in sp.path.edges if e.category is EdgeCategory.HOST_CONTAINER]
        if len(hc) == 1 and edge_prob(table, hc[0].src, hc[0].dst) > 0:
            continue
        kept.append(sp)
    kept_t = tuple(kept)
    return replace(
        report, flagged_paths=kept_t, predicted_edges=predicted_edge_set(kept_t), filter_applied=True
    )


@dataclass(frozen=True)
class DetectorParams:
    tau: int = DEFAULT_TAU
    max_hops: int = DEFAULT_MAX_HOPS
    dedup_window: int = DEFAULT_DEDUP_WINDOW


@dataclass
class TrainedModel:
    """Everything learned from training data: probabilities and per-variant alphas."""

    topology: Topology
    table: EdgeProbTable
    thresholds: dict[DetectorVariant, Threshold]
    training_paths: list[ScoredPath] = field(repr=False)
    params: DetectorParams = DetectorParams()


def train(
    training: EventStream, topology: Topology, params: DetectorParams = DetectorParams()
) -> TrainedModel:
    table = learn_edge_probs(training, params.dedup_window)
    graph = build_graph(training, params.dedup_window)
    scored = score_paths(enumerate_paths(graph, params.tau, params.max_hops), table, topology)
    thresholds = {v: calibrate_threshold(scored, v) for v in DetectorVariant}
    return TrainedModel(topology, table, thresholds, scored, params)


@dataclass
class TestRun:
    graph: AccessGraph
    scored: list[ScoredPath]

    __test__ = False  # not a pytest class


def score_test(model: TrainedModel, test: EventStream) -> TestRun:
    p = model.params
    graph = build_graph(test, p.dedup_window)
    scored = score_paths(enumerate_paths(graph, p.tau, p.max_hops), model.table, model.topology)
    return TestRun(graph, scored)


def detect(
    model: TrainedModel, run: TestRun, variant: DetectorVariant, fp_filter: bool = False
) -> DetectionReport:
    report = detect_paths(run.scored, model.thresholds[variant])
    if fp_filter:
        report = apply_fp_filter(report, model.table)
    return report
