"""Edge-level confusion counts and TPR/FPR tables."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import EvaluationInputError
from .graph import EdgeId


@dataclass(frozen=True)
class Metrics:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def tpr(self) -> float | None:
        pos = self.tp + self.fn
        return self.tp / pos if pos else None

    @property
    def fpr(self) -> float | None:
        neg = self.fp + self.tn
        return self.fp / neg if neg else None

    def to_json(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "tn": self.tn,
            "fn": self.fn,
            "tpr": _pct(self.tpr),
            "fpr": _pct(self.fpr),
        }


def _pct(rate: float | None) -> float | None:
    return None if rate is None else round(100.0 * rate, 2)


def format_pct(rate: float | None) -> str:
    return "" if rate is None else f"{100.0 * rate:.2f}"


def evaluate_edges(
    predicted: Iterable[EdgeId], truth: Iterable[EdgeId], universe: Iterable[EdgeId]
) -> Metrics:
    pred, pos, univ = set(predicted), set(truth), set(universe)
    if not pred <= univ:
        raise EvaluationInputError(f"{len(pred - univ)} predicted edge(s) outside the universe")
    if not pos <= univ:
        raise EvaluationInputError(f"{len(pos - univ)} truth edge(s) outside the universe")
    tp = len(pred & pos)
    fp = len(pred - pos)
    fn = len(pos - pred)
    tn = len(univ) - tp - fp - fn
    return Metrics(tp, fp, tn, fn)


def metrics_csv(rows: Sequence[tuple[str, Metrics]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["algorithm", "tp", "fp", "tpr", "fpr"])
    for name, m in rows:
        w.writerow([name, m.tp, m.fp, format_pct(m.tpr), format_pct(m.fpr)])
    return buf.getvalue()


def metrics_json(rows: Sequence[tuple[str, Metrics]]) -> str:
    payload = [{"algorithm": name, **m.to_json()} for name, m in rows]
    return json.dumps(payload, indent=2) + "\n"
