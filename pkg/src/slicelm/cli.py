"""Command-line entry point: ``slicelm simulate|detect|evaluate|run-experiment``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Sequence

from .detect import DetectionReport, DetectorParams, detect, score_test, train
from .errors import SliceLMError
from .evaluate import Metrics, evaluate_edges, metrics_csv, metrics_json
from .graph import DEFAULT_DEDUP_WINDOW, AccessEdge, build_graph
from .ingest import EventStream, read_event_files
from .model import Topology, default_topology, read_topology
from .paths import DEFAULT_MAX_HOPS, DEFAULT_TAU
from .scoring import DetectorVariant
from .sim import (
    DEFAULT_SCHEDULE,
    SimConfig,
    parse_schedule,
    read_truth,
    schedule_to_json,
    simulate,
    write_dataset,
)

VARIANT_ORDER = (DetectorVariant.FULL, DetectorVariant.FIRST_THREE, DetectorVariant.FIRST_TWO)


class StageError(Exception):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage


class _stage:
    """Re-raise anything failing inside the block as a StageError naming ``name``."""

    def __init__(self, name: str):
        self.name = name

    def __enter__(self) -> None:
        return None

    def __exit__(self, exc_type, exc, tb) -> bool:
        if exc is not None and isinstance(exc, (SliceLMError, OSError, ValueError, KeyError)):
            raise StageError(self.name, exc) from exc
        return False


@dataclass
class RunConfig:
    topology: str | None = None
    events: str | None = None  # existing dataset directory; simulated when absent
    out: str = "results"
    tau: int = DEFAULT_TAU
    max_hops: int = DEFAULT_MAX_HOPS
    dedup_window: int = DEFAULT_DEDUP_WINDOW
    variants: list[str] = field(default_factory=lambda: [v.value for v in VARIANT_ORDER])
    fp_filter: bool = False
    seed: int = 0
    jitter: int = 60
    schedule: list[dict[str, Any]] = field(default_factory=lambda: schedule_to_json(DEFAULT_SCHEDULE))

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> RunConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**obj)

    @property
    def params(self) -> DetectorParams:
        return DetectorParams(self.tau, self.max_hops, self.dedup_window)

    @property
    def variant_list(self) -> list[DetectorVariant]:
        return [DetectorVariant(v) for v in self.variants]


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _topology(path: str | None) -> Topology:
    return read_topology(path) if path else default_topology()


def _variants(names: Sequence[str] | None) -> list[DetectorVariant]:
    chosen = {DetectorVariant(n) for n in names} if names else set(VARIANT_ORDER)
    return [v for v in VARIANT_ORDER if v in chosen]


def run_detection(
    topology: Topology,
    training: EventStream,
    test: EventStream,
    variants: Sequence[DetectorVariant],
    params: DetectorParams,
    fp_filter: bool,
) -> tuple[dict[DetectorVariant, DetectionReport], frozenset]:
    with _stage("train"):
        model = train(training, topology, params)
    with _stage("detect"):
        run = score_test(model, test)
        reports = {v: detect(model, run, v, fp_filter) for v in variants}
    universe = frozenset(e.identity for e in run.graph.edges)
    return reports, universe


def evaluate_reports(
    reports: dict[DetectorVariant, DetectionReport], truth: frozenset, universe: frozenset
) -> list[tuple[str, Metrics]]:
    rows = []
    with _stage("evaluate"):
        for v in VARIANT_ORDER:
            if v in reports:
                predicted = {e.identity for e in reports[v].predicted_edges}
                rows.append((v.value, evaluate_edges(predicted, truth, universe)))
    return rows


def _write_reports(out: Path, reports: dict[DetectorVariant, DetectionReport]) -> None:
    for v, rep in reports.items():
        _write(out / f"report-{v.value}.json", rep.dumps())


def _write_metrics(out: Path, rows: list[tuple[str, Metrics]]) -> str:
    table = metrics_csv(rows)
    _write(out / "metrics.csv", table)
    _write(out / "metrics.json", metrics_json(rows))
    return table


def run_experiment(config: RunConfig) -> list[tuple[str, Metrics]]:
    """Simulate (or load) a dataset, train on normal days, detect on campaign
    days, evaluate every requested variant and write all reports."""
    out = Path(config.out)
    with _stage("config"):
        topology = _topology(config.topology)
        schedule = parse_schedule(config.schedule)
        variants = config.variant_list
        params = config.params
    train_days = [d for d, a in schedule if a.is_normal]
    test_days = [d for d, a in schedule if not a.is_normal]

    if config.events:
        data = Path(config.events)
        with _stage("load"):
            training = read_event_files([data / f"day-{d}.jsonl" for d in train_days], topology)
            test = read_event_files([data / f"day-{d}.jsonl" for d in test_days], topology)
            truth = read_truth(data / "truth.json")
    else:
        with _stage("simulate"):
            sim = simulate(SimConfig(topology, config.seed, schedule, config.jitter))
            write_dataset(sim, out / "dataset")
        training, test, truth = sim.days_stream(train_days), sim.days_stream(test_days), sim.truth

    reports, universe = run_detection(topology, training, test, variants, params, config.fp_filter)
    rows = evaluate_reports(reports, truth, universe)
    with _stage("write"):
        _write_reports(out, reports)
        _write_metrics(out, rows)
    return rows


# --- subcommands -------------------------------------------------------------------


def _cmd_simulate(args: argparse.Namespace) -> int:
    with _stage("config"):
        topology = _topology(args.topology)
        schedule = (
            parse_schedule(json.loads(Path(args.schedule).read_text(encoding="utf-8")))
            if args.schedule
            else DEFAULT_SCHEDULE
        )
    with _stage("simulate"):
        sim = simulate(SimConfig(topology, args.seed, schedule, args.jitter))
        written = write_dataset(sim, args.out)
    for p in written:
        print(p)
    return 0


def _cmd_detect(args: argparse.Namespace) -> int:
    with _stage("load"):
        topology = _topology(args.topology)
        training = read_event_files(args.train, topology)
        test = read_event_files(args.test, topology)
    params = DetectorParams(args.tau, args.max_hops, args.dedup_window)
    reports, _ = run_detection(
        topology, training, test, _variants(args.variant), params, args.fp_filter
    )
    with _stage("write"):
        _write_reports(Path(args.out), reports)
    for v, rep in reports.items():
        print(f"{v.value}: alpha={rep.alpha:g} flagged={len(rep.flagged_paths)} "
              f"edges={len(rep.predicted_edges)}")
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    with _stage("load"):
        topology = _topology(args.topology)
        test = read_event_files(args.test, topology)
        truth = read_truth(args.truth)
        reports = {}
        for path in args.reports:
            obj = json.loads(Path(path).read_text(encoding="utf-8"))
            v = DetectorVariant(obj["variant"])
            edges = frozenset(AccessEdge.from_json(e) for e in obj["predicted_edges"])
            reports[v] = DetectionReport(v, obj["alpha"], (), edges, obj["filter_applied"])
    universe = frozenset(e.identity for e in build_graph(test, args.dedup_window).edges)
    rows = evaluate_reports(reports, truth, universe)
    with _stage("write"):
        table = _write_metrics(Path(args.out), rows)
    print(table, end="")
    return 0


def _cmd_run_experiment(args: argparse.Namespace) -> int:
    with _stage("config"):
        obj = json.loads(Path(args.config).read_text(encoding="utf-8")) if args.config else {}
        config = RunConfig.from_json(obj)
        if args.seed is not None:
            config.seed = args.seed
        if args.out is not None:
            config.out = args.out
        if args.fp_filter:
            config.fp_filter = True
    rows = run_experiment(config)
    print(metrics_csv(rows), end="")
    return 0


def _add_detector_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tau", type=int, default=DEFAULT_TAU, help="max seconds between linked edges")
    p.add_argument("--max-hops", type=int, default=DEFAULT_MAX_HOPS)
    p.add_argument("--dedup-window", type=int, default=DEFAULT_DEDUP_WINDOW)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slicelm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a labeled dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--topology")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jitter", type=int, default=60)
    p.add_argument("--schedule", help="JSON schedule file; defaults to the six-day campaign plan")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("detect", help="train on --train logs and flag paths in --test logs")
    p.add_argument("--topology")
    p.add_argument("--train", nargs="+", required=True)
    p.add_argument("--test", nargs="+", required=True)
    p.add_argument("--variant", action="append", choices=[v.value for v in DetectorVariant])
    p.add_argument("--fp-filter", action="store_true")
    p.add_argument("--out", required=True)
    _add_detector_flags(p)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("evaluate", help="edge-level TP/FP/TPR/FPR for detection reports")
    p.add_argument("--topology")
    p.add_argument("--test", nargs="+", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--reports", nargs="+", required=True)
    p.add_argument("--dedup-window", type=int, default=DEFAULT_DEDUP_WINDOW)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("run-experiment", help="simulate, train, detect and evaluate in one go")
    p.add_argument("--config")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--fp-filter", action="store_true")
    p.set_defaults(func=_cmd_run_experiment)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StageError as exc:
        print(f"slicelm: error in stage {exc}", file=sys.stderr)
        return 2


__all__ = ["RunConfig", "build_parser", "main", "run_experiment"]
