"""Historical edge probabilities and the four-factor path score.

Sub-scores, each >= 1 so the product is neutral when a factor carries no
evidence:

* ``s1`` -- reciprocal of the smallest non-zero historical probability among
  the path's host-to-host edges (1 when there is none),
* ``s2`` -- the same over host-container edges (logins excluded, escapes
  included),
* ``s3`` -- number of slices the path's containers belong to, plus one,
* ``s4`` -- hop count.

Edges never seen in training have probability 0 and therefore do not
contribute to ``s1``/``s2``.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path as FsPath
from typing import Iterable, Mapping

from .errors import TrainingError
from .graph import DEFAULT_DEDUP_WINDOW, EdgeCategory, build_graph
from .ingest import EventStream, utc_day
from .model import Topology
from .paths import Path


class DetectorVariant(str, Enum):
    FULL = "full"
    FIRST_THREE = "first3"
    FIRST_TWO = "first2"


@dataclass(frozen=True)
class EdgeProbTable:
    days: int
    seen: Mapping[tuple[str, str], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.days < 1:
            raise ValueError("an edge-probability table needs at least one training day")
        for key, n in self.seen.items():
            if not 0 <= n <= self.days:
                raise ValueError(f"seen-day count {n} for {key} outside [0, {self.days}]")

    def to_json(self) -> dict:
        return {
            "days": self.days,
            "edges": [
                {"src": s, "dst": d, "seen": n} for (s, d), n in sorted(self.seen.items())
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> EdgeProbTable:
        return cls(obj["days"], {(e["src"], e["dst"]): e["seen"] for e in obj["edges"]})

    def save(self, path: str | FsPath) -> None:
        FsPath(path).write_text(json.dumps(self.to_json(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | FsPath) -> EdgeProbTable:
        return cls.from_json(json.loads(FsPath(path).read_text(encoding="utf-8")))


def learn_edge_probs(
    training: EventStream, dedup_window: int = DEFAULT_DEDUP_WINDOW
) -> EdgeProbTable:
    """Count, per (src, dst), the UTC days carrying at least one successful access.

    The number of training days is the number of calendar days spanned by the
    stream, including days on which nothing happened.
    """
    if not training.events:
        raise TrainingError("training stream is empty")
    first = utc_day(training.events[0].ts)
    last = utc_day(training.events[-1].ts)
    days_by_edge: dict[tuple[str, str], set[int]] = defaultdict(set)
    for e in build_graph(training, dedup_window).edges:
        days_by_edge[(e.src, e.dst)].add(utc_day(e.ts))
    return EdgeProbTable(last - first + 1, {k: len(v) for k, v in days_by_edge.items()})


def edge_prob(table: EdgeProbTable, src: str, dst: str) -> float:
    return table.seen.get((src, dst), 0) / table.days


@dataclass(frozen=True)
class SubScores:
    s1: float
    s2: float
    s3: float
    s4: float


@dataclass(frozen=True)
class ScoredPath:
    path: Path
    subscores: SubScores
    slices: frozenset[int]
    score: Mapping[DetectorVariant, float]

    def to_json(self) -> dict:
        sub = self.subscores
        return {
            "nodes": list(self.path.nodes),
            "timestamps": [e.ts for e in self.path.edges],
            "user": self.path.user,
            "slices": sorted(self.slices),
            "subscores": {"s1": sub.s1, "s2": sub.s2, "s3": sub.s3, "s4": sub.s4},
            "score": {v.value: self.score[v] for v in DetectorVariant},
        }


def _rarity(probs: Iterable[float]) -> float:
    nonzero = [p for p in probs if p > 0]
    return 1.0 / min(nonzero) if nonzero else 1.0


def score_path(path: Path, table: EdgeProbTable, topology: Topology) -> ScoredPath:
    hh, hc = [], []
    for e in path.edges:
        p = edge_prob(table, e.src, e.dst)
        (hh if e.category is EdgeCategory.HOST_HOST else hc).append(p)
    slices = path.slices_touched(topology)
    sub = SubScores(_rarity(hh), _rarity(hc), float(len(slices) + 1), float(path.hop_count))
    first2 = sub.s1 * sub.s2
    first3 = first2 * sub.s3
    full = first3 * sub.s4
    score = {
        DetectorVariant.FIRST_TWO: first2,
        DetectorVariant.FIRST_THREE: first3,
        DetectorVariant.FULL: full,
    }
    return ScoredPath(path, sub, slices, score)


def score_paths(
    paths: Iterable[Path], table: EdgeProbTable, topology: Topology
) -> list[ScoredPath]:
    return [score_path(p, table, topology) for p in paths]
