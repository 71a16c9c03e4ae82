"""Deterministic generator of labeled normal-operation and attack-campaign logs.

Each scheduled day draws from its own RNG stream derived from
``(seed, day, stream)``, so a day's content does not depend on which other
days are scheduled. Attacker actions that do not move laterally (reverse
shells, scans, NRF queries, implants, traffic redirection) are emitted as
``Noise`` records; only logins, execs and escapes become graph edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import ConfigError
from .graph import EdgeId
from .ingest import BENIGN, AccessEvent, EventKind, EventStream, malicious
from .model import Container, NfType, Topology

BASE_EPOCH = 1_704_067_200  # 2024-01-01T00:00:00Z, start of day 1
DAY = 86_400
HOUR = 3_600

_STREAM_BACKGROUND = 0
_STREAM_CAMPAIGN = 1
_STREAM_CHAIN = 2

# Per-campaign entry points: (NF type, slice) of the container reached from the Internet.
_ENTRY = {1: (NfType.AMF, None), 2: (NfType.UPF, 5), 3: (NfType.UPF, 1)}


@dataclass(frozen=True)
class Activity:
    """A day's activity: ``campaign=None`` means normal operation only."""

    campaign: int | None = None
    sub: int | None = None

    @property
    def is_normal(self) -> bool:
        return self.campaign is None

    def validate(self) -> None:
        if self.campaign is None:
            if self.sub is not None:
                raise ConfigError("normal days take no sub-scenario")
        elif self.campaign == 2:
            if self.sub is not None:
                raise ConfigError("campaign 2 takes no sub-scenario")
        elif self.campaign in (1, 3):
            if self.sub not in (1, 2):
                raise ConfigError(f"campaign {self.campaign} needs sub-scenario 1 or 2")
        else:
            raise ConfigError(f"undefined campaign {self.campaign!r}")

    def to_json(self) -> dict[str, Any]:
        if self.is_normal:
            return {"activity": "normal"}
        return {"activity": "campaign", "campaign": self.campaign, "sub": self.sub}


NORMAL = Activity()

DEFAULT_SCHEDULE: tuple[tuple[int, Activity], ...] = (
    (1, NORMAL),
    (2, Activity(1, 1)),
    (3, Activity(1, 2)),
    (4, Activity(2)),
    (5, Activity(3, 1)),
    (6, Activity(3, 2)),
)


def parse_schedule(entries: Iterable[dict[str, Any]]) -> tuple[tuple[int, Activity], ...]:
    """Read ``[{"day": 1, "activity": "normal"}, {"day": 2, "activity": "campaign",
    "campaign": 1, "sub": 1}, ...]``."""
    out = []
    for entry in entries:
        try:
            day, kind = entry["day"], entry["activity"]
        except (TypeError, KeyError) as exc:
            raise ConfigError(f"malformed schedule entry {entry!r}") from exc
        if kind == "normal":
            act = NORMAL
        elif kind == "campaign":
            act = Activity(entry.get("campaign"), entry.get("sub"))
        else:
            raise ConfigError(f"unknown activity {kind!r}")
        act.validate()
        out.append((day, act))
    return tuple(out)


def schedule_to_json(schedule: Sequence[tuple[int, Activity]]) -> list[dict[str, Any]]:
    return [{"day": d, **a.to_json()} for d, a in schedule]


@dataclass(frozen=True)
class SimConfig:
    topology: Topology
    seed: int = 0
    schedule: tuple[tuple[int, Activity], ...] = DEFAULT_SCHEDULE
    jitter: int = 60
    operator: str = "mno-admin"
    attacker: str = "svc-deploy"

    def __post_init__(self) -> None:
        if self.seed < 0:
            raise ConfigError("seed must be non-negative")
        if self.jitter < 0:
            raise ConfigError("jitter must be non-negative")
        days = [d for d, _ in self.schedule]
        if any(d < 1 for d in days):
            raise ConfigError("day indices start at 1")
        if any(a >= b for a, b in zip(days, days[1:])):
            raise ConfigError("schedule day indices must be strictly increasing")
        for _, act in self.schedule:
            act.validate()
        if self.operator == self.attacker:
            raise ConfigError("operator and attacker must use different acting users")

    @property
    def training_days(self) -> tuple[int, ...]:
        return tuple(d for d, a in self.schedule if a.is_normal)

    @property
    def test_days(self) -> tuple[int, ...]:
        return tuple(d for d, a in self.schedule if not a.is_normal)


def day_rng(seed: int, day: int, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, day, stream]))


def day_start(day: int) -> int:
    return BASE_EPOCH + (day - 1) * DAY


def day_of(ts: int) -> int:
    return (ts - BASE_EPOCH) // DAY + 1


def _internet(topology: Topology) -> str:
    if not topology.externals:
        raise ConfigError("topology declares no external node")
    return topology.externals[0]


def _jit(rng: np.random.Generator, jitter: int) -> int:
    return int(rng.integers(0, jitter + 1)) if jitter else 0


# --- normal operation --------------------------------------------------------


def generate_normal_day(
    topology: Topology,
    day: int,
    rng: np.random.Generator,
    *,
    operator: str = "mno-admin",
    jitter: int = 60,
) -> list[AccessEvent]:
    """Maintenance profile: remote access to every slice's UPF, then local
    execs into every other container from its host."""
    start = day_start(day)
    spacing = max(300, 2 * jitter + 1)
    events = []

    upfs: list[str] = []
    for s in sorted(topology.slices, key=lambda s: s.id):
        for c in topology.containers:
            if c.nf is NfType.UPF and s.id in c.slices:
                if c.name not in upfs:
                    upfs.append(c.name)
                break
    internet = _internet(topology) if upfs else ""
    for i, name in enumerate(upfs):
        ts = start + 8 * HOUR + i * spacing + _jit(rng, jitter)
        events.append(
            AccessEvent(ts, EventKind.CONTAINER_ACCESS, internet, name, operator, operator, True, BENIGN)
        )

    k = 0
    for host in topology.hosts:
        for c in topology.containers_on(host):
            if c.nf is NfType.UPF:
                continue
            ts = start + 9 * HOUR + k * spacing + _jit(rng, jitter)
            events.append(
                AccessEvent(ts, EventKind.CONTAINER_ACCESS, host, c.name, operator, operator, True, BENIGN)
            )
            k += 1
    return events


def benign_chain(
    topology: Topology,
    day: int,
    rng: np.random.Generator,
    *,
    operator: str = "mno-admin",
    jitter: int = 60,
) -> list[AccessEvent]:
    """An operator logs into a host from outside (one failed attempt first)
    and execs into a container that routine maintenance also touches."""
    candidates = [c for c in topology.containers if c.nf is not NfType.UPF]
    if not candidates:
        return []
    target: Container = candidates[int(rng.integers(len(candidates)))]
    internet = _internet(topology)
    t = day_start(day) + 16 * HOUR + 30 * 60 + _jit(rng, jitter)
    return [
        AccessEvent(t, EventKind.HOST_LOGIN, internet, target.host, operator, operator, False, BENIGN),
        AccessEvent(t + 30, EventKind.HOST_LOGIN, internet, target.host, operator, operator, True, BENIGN),
        AccessEvent(
            t + 150 + _jit(rng, jitter),
            EventKind.CONTAINER_ACCESS,
            target.host,
            target.name,
            operator,
            operator,
            True,
            BENIGN,
        ),
    ]


# --- attack campaigns ----------------------------------------------------------


@dataclass
class _Script:
    """Emits campaign records on a monotone clock."""

    campaign: int
    user: str
    rng: np.random.Generator
    jitter: int
    clock: int
    events: list[AccessEvent] = field(default_factory=list)

    def _tick(self) -> int:
        self.clock += 90 + _jit(self.rng, self.jitter)
        return self.clock

    def edge(self, kind: EventKind, src: str, dst: str, step: str) -> None:
        self.events.append(
            AccessEvent(self._tick(), kind, src, dst, self.user, self.user, True, malicious(self.campaign, step))
        )

    def noise(self, tag: str, src: str, dst: str, step: str) -> None:
        self.events.append(
            AccessEvent(
                self._tick(),
                EventKind.NOISE,
                src,
                dst,
                self.user,
                self.user,
                True,
                malicious(self.campaign, step),
                tag,
            )
        )


def _first(topology: Topology, nf: NfType, slice_id: int | None) -> Container:
    for c in topology.containers:
        if c.nf is nf and (slice_id is None or slice_id in c.slices):
            return c
    where = f" in slice {slice_id}" if slice_id is not None else ""
    raise ConfigError(f"topology has no {nf.value} container{where}")


def _nrf_for(topology: Topology, host: str, slices: frozenset[int]) -> str | None:
    nrfs = [c for c in topology.containers if c.nf is NfType.NRF]
    for c in nrfs:
        if c.host == host:
            return c.name
    for c in nrfs:
        if c.slices & slices:
            return c.name
    return None


def _hosts_after(topology: Topology, host: str) -> list[str]:
    """Other hosts that run containers, in topology order starting after ``host``."""
    i = topology.hosts.index(host)
    order = topology.hosts[i + 1 :] + topology.hosts[:i]
    return [h for h in order if topology.containers_on(h)]


def _query_nrf(s: _Script, topology: Topology, src: str, host: str, step: str) -> None:
    nrf = _nrf_for(topology, host, topology.host_slices(host))
    if nrf is not None and nrf != src:
        s.noise("nrf-query", src, nrf, step)


def target_slice(campaign: int, sub: int | None) -> int:
    return 3 if sub == 1 else 6


def run_campaign(
    topology: Topology,
    campaign: int,
    sub: int | None,
    day: int,
    rng: np.random.Generator,
    *,
    attacker: str = "svc-deploy",
    jitter: int = 60,
) -> list[AccessEvent]:
    """Scripted intrusion: Internet entry into an exposed NF, container escape,
    then host pivots (or an in-host VLAN pivot for campaign 2) toward the
    target slice, ending with implant and traffic-redirect noise."""
    Activity(campaign, sub).validate()
    internet = _internet(topology)
    target = target_slice(campaign, sub)
    s = _Script(campaign, attacker, rng, jitter, day_start(day) + 13 * HOUR)

    nf, entry_slice = _ENTRY[campaign]
    entry = _first(topology, nf, entry_slice)
    s.edge(EventKind.CONTAINER_ACCESS, internet, entry.name, "1")
    s.noise("reverse-shell", entry.name, internet, "2")
    for c in topology.containers:
        if c.name != entry.name and c.slices & entry.slices:
            s.noise("scan", entry.name, c.name, "3")
    if campaign != 1:
        _query_nrf(s, topology, entry.name, entry.host, "3")
    s.edge(EventKind.CONTAINER_ESCAPE, entry.name, entry.host, "4")

    here = entry.host
    hit: list[Container] = []
    if campaign == 2:
        s.noise("scan", here, here, "5")
        for c in topology.containers_on(here):
            if target in c.slices:
                s.edge(EventKind.CONTAINER_ACCESS, here, c.name, "6")
                hit.append(c)
    else:
        # Sub-scenario 1 jumps straight to the slice-3 host; sub-scenario 2
        # walks hosts until the pivot slice (target 6 for campaign 1, the
        # slice-4 host for campaign 3).
        goal = 3 if sub == 1 else (6 if campaign == 1 else 4)
        candidates = _hosts_after(topology, here)
        if sub == 1:
            candidates = [h for h in candidates if goal in topology.host_slices(h)][:1]
        if not any(goal in topology.host_slices(h) for h in candidates):
            raise ConfigError(f"no other host runs slice {goal} containers")
        for n, host in enumerate(candidates, start=1):
            step = f"S{sub}.{n}"
            s.noise("scan", here, host, f"{step}.a")
            s.edge(EventKind.HOST_LOGIN, here, host, f"{step}.b")
            final = goal in topology.host_slices(host)
            for c in topology.containers_on(host):
                if final and goal == target and target not in c.slices:
                    continue
                s.edge(EventKind.CONTAINER_ACCESS, host, c.name, f"{step}.c")
                if target in c.slices:
                    hit.append(c)
            _query_nrf(s, topology, host, host, f"{step}.d")
            here = host
            if final:
                break
        if campaign == 3 and sub == 2:
            remote = [c for c in topology.containers if target in c.slices]
            nrf = _nrf_for(topology, here, frozenset({target}))
            if nrf is not None:
                s.noise("nrf-query", here, nrf, "5")
            for c in remote:
                s.edge(EventKind.CONTAINER_ACCESS, here, c.name, "6")
                hit.append(c)

    for c in hit:
        s.noise("c2-implant", c.name, internet, "7")
    for c in hit:
        if c.nf is NfType.UPF:
            s.noise("traffic-redirect", c.name, c.name, "8")
    return s.events


# --- whole datasets -------------------------------------------------------------


@dataclass(frozen=True)
class SimResult:
    config: SimConfig
    events: EventStream
    truth: frozenset[EdgeId]

    def day_stream(self, day: int) -> EventStream:
        return EventStream(tuple(e for e in self.events.events if day_of(e.ts) == day))

    def days_stream(self, days: Iterable[int]) -> EventStream:
        wanted = set(days)
        return EventStream(tuple(e for e in self.events.events if day_of(e.ts) in wanted))

    def truth_json(self) -> str:
        rows = [edge._asdict() for edge in sorted(self.truth)]
        return json.dumps(rows, indent=2) + "\n"


def simulate(config: SimConfig) -> SimResult:
    topo = config.topology
    events: list[AccessEvent] = []
    for day, act in config.schedule:
        act.validate()
        events += generate_normal_day(
            topo,
            day,
            day_rng(config.seed, day, _STREAM_BACKGROUND),
            operator=config.operator,
            jitter=config.jitter,
        )
        if act.is_normal:
            continue
        events += run_campaign(
            topo,
            act.campaign,
            act.sub,
            day,
            day_rng(config.seed, day, _STREAM_CAMPAIGN),
            attacker=config.attacker,
            jitter=config.jitter,
        )
        events += benign_chain(
            topo,
            day,
            day_rng(config.seed, day, _STREAM_CHAIN),
            operator=config.operator,
            jitter=config.jitter,
        )
    truth = frozenset(
        EdgeId(e.ts, e.src, e.dst, e.user)
        for e in events
        if e.forms_edge and e.label is not None and e.label.malicious
    )
    return SimResult(config, EventStream.from_events(events), truth)


def write_dataset(result: SimResult, out_dir: str | Path) -> list[Path]:
    """Write ``day-<n>.jsonl`` per scheduled day, ``truth.json`` and ``topology.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for day, _ in result.config.schedule:
        p = out / f"day-{day}.jsonl"
        p.write_text(result.day_stream(day).to_jsonl(), encoding="utf-8")
        written.append(p)
    for name, text in (("truth.json", result.truth_json()), ("topology.json", result.config.topology.dumps())):
        p = out / name
        p.write_text(text, encoding="utf-8")
        written.append(p)
    return written


def read_truth(path: str | Path) -> frozenset[EdgeId]:
    rows = json.loads(Path(path).read_text(encoding="utf-8"))
    return frozenset(EdgeId(r["ts"], r["src"], r["dst"], r["user"]) for r in rows)


__all__ = [
    "Activity",
    "NORMAL",
    "DEFAULT_SCHEDULE",
    "SimConfig",
    "SimResult",
    "benign_chain",
    "day_rng",
    "generate_normal_day",
    "parse_schedule",
    "read_truth",
    "run_campaign",
    "simulate",
    "write_dataset",
]
