"""Log ingestion: raw host-auth / container-event lines and canonical JSONL.

Two raw grammars are accepted::

    <ISO8601-UTC> host_login src=<node> dst=<node> user=<u> account=<a> result=success|fail
    <ISO8601-UTC> container_event id=<container> host=<node> action=<act> src=<node> user=<u>

where ``<act>`` is one of exec, escape, create, start, stop. Lifecycle actions
(create/start/stop) become :attr:`EventKind.NOISE` records. Every other record
type (scans, reverse shells, NRF queries, ...) only exists in canonical JSONL,
one object per line with keys ``ts, kind, src, dst, user, dst_account,
success, label, noise_tag``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Iterable, Sequence

from .errors import ParseError, ResolutionError
from .model import NodeKind, Topology


class EventKind(str, Enum):
    HOST_LOGIN = "HostLogin"
    CONTAINER_ACCESS = "ContainerAccess"
    CONTAINER_ESCAPE = "ContainerEscape"
    NOISE = "Noise"


_KIND_RANK = {k: i for i, k in enumerate(EventKind)}

NOISE_TAGS = frozenset(
    {"scan", "reverse-shell", "nrf-query", "container-lifecycle", "c2-implant", "traffic-redirect"}
)


@dataclass(frozen=True)
class Label:
    """Ground-truth label attached by the simulator.

    ``campaign`` and ``step`` are set only for malicious records.
    """

    malicious: bool
    campaign: int | None = None
    step: str | None = None

    def to_json(self) -> Any:
        if not self.malicious:
            return "benign"
        return {"campaign": self.campaign, "step": self.step}

    @classmethod
    def from_json(cls, value: Any) -> Label | None:
        if value is None:
            return None
        if value == "benign":
            return BENIGN
        if isinstance(value, dict) and set(value) == {"campaign", "step"}:
            return cls(True, value["campaign"], value["step"])
        raise ValueError(f"unrecognized label {value!r}")


BENIGN = Label(False)


def malicious(campaign: int, step: str) -> Label:
    return Label(True, campaign, step)


@dataclass(frozen=True)
class AccessEvent:
    ts: int
    kind: EventKind
    src: str
    dst: str
    user: str
    dst_account: str
    success: bool = True
    label: Label | None = None
    noise_tag: str | None = None

    @property
    def forms_edge(self) -> bool:
        return self.success and self.kind is not EventKind.NOISE

    def sort_key(self) -> tuple:
        # Total order: timestamp first, then (kind, src, dst, user), then the
        # remaining fields so that distinct events never compare equal.
        return (
            self.ts,
            _KIND_RANK[self.kind],
            self.src,
            self.dst,
            self.user,
            self.dst_account,
            self.success,
            self.noise_tag or "",
            _label_key(self.label),
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "ts": self.ts,
            "kind": self.kind.value,
            "src": self.src,
            "dst": self.dst,
            "user": self.user,
            "dst_account": self.dst_account,
            "success": self.success,
            "label": None if self.label is None else self.label.to_json(),
            "noise_tag": self.noise_tag,
        }


def _label_key(label: Label | None) -> tuple:
    if label is None:
        return (0,)
    return (1, label.malicious, label.campaign or 0, label.step or "")


@dataclass(frozen=True)
class EventStream:
    """Events in canonical order (see :meth:`AccessEvent.sort_key`)."""

    events: tuple[AccessEvent, ...]

    def __post_init__(self) -> None:
        keys = [e.sort_key() for e in self.events]
        if any(a > b for a, b in zip(keys, keys[1:])):
            raise ValueError("EventStream events must be in canonical order")
        if any(e.ts < 0 for e in self.events):
            raise ValueError("timestamps must be non-negative")

    @classmethod
    def from_events(cls, events: Iterable[AccessEvent]) -> EventStream:
        return cls(tuple(sorted(events, key=AccessEvent.sort_key)))

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    def merged(self, other: EventStream) -> EventStream:
        return EventStream.from_events((*self.events, *other.events))

    def to_jsonl(self) -> str:
        return "".join(serialize_event(e) + "\n" for e in self.events)


# --- time helpers -----------------------------------------------------------

_ISO_RE = re.compile(r"^(\d{4})-(\d{2})-(\d{2})T(\d{2}):(\d{2}):(\d{2})Z$")


def parse_utc(text: str) -> int:
    m = _ISO_RE.match(text)
    if not m:
        raise ValueError(f"not an ISO8601 UTC timestamp: {text!r}")
    dt = datetime(*map(int, m.groups()), tzinfo=timezone.utc)
    return int(dt.timestamp())


def format_utc(ts: int) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def utc_day(ts: int) -> int:
    """UTC calendar-day ordinal of a timestamp."""
    return ts // 86400


# --- raw grammars ------------------------------------------------------------

_HOST_LOGIN_KEYS = ("src", "dst", "user", "account", "result")
_CONTAINER_KEYS = ("id", "host", "action", "src", "user")
_LIFECYCLE = frozenset({"create", "start", "stop"})


def _fields(tokens: Sequence[str], expected: tuple[str, ...], lineno: int | None) -> dict[str, str]:
    out: dict[str, str] = {}
    for tok in tokens:
        key, sep, value = tok.partition("=")
        if not sep or not value:
            raise ParseError(f"malformed field {tok!r}", lineno)
        out[key] = value
    if tuple(out) != expected or len(tokens) != len(expected):
        raise ParseError(f"expected fields {' '.join(expected)}, got {' '.join(tokens)}", lineno)
    return out


def parse_raw_line(line: str, lineno: int | None = None) -> AccessEvent:
    """Parse one raw host-auth or container-event line."""
    parts = line.split()
    if len(parts) < 2:
        raise ParseError(f"unrecognized line {line!r}", lineno)
    try:
        ts = parse_utc(parts[0])
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from exc

    record = parts[1]
    if record == "host_login":
        f = _fields(parts[2:], _HOST_LOGIN_KEYS, lineno)
        if f["result"] not in ("success", "fail"):
            raise ParseError(f"unknown result {f['result']!r}", lineno)
        return AccessEvent(
            ts=ts,
            kind=EventKind.HOST_LOGIN,
            src=f["src"],
            dst=f["dst"],
            user=f["user"],
            dst_account=f["account"],
            success=f["result"] == "success",
        )
    if record == "container_event":
        f = _fields(parts[2:], _CONTAINER_KEYS, lineno)
        action = f["action"]
        if action == "exec":
            return AccessEvent(ts, EventKind.CONTAINER_ACCESS, f["src"], f["id"], f["user"], f["user"])
        if action == "escape":
            if f["src"] != f["id"]:
                raise ParseError("escape records must have src equal to the container id", lineno)
            return AccessEvent(ts, EventKind.CONTAINER_ESCAPE, f["id"], f["host"], f["user"], f["user"])
        if action in _LIFECYCLE:
            return AccessEvent(
                ts,
                EventKind.NOISE,
                f["src"],
                f["id"],
                f["user"],
                f["user"],
                noise_tag="container-lifecycle",
            )
        raise ParseError(f"unknown action {action!r}", lineno)
    raise ParseError(f"unknown record type {record!r}", lineno)


def format_raw_line(event: AccessEvent, host: str | None = None) -> str:
    """Render an event in its raw grammar.

    Container events need the container's host; pass ``host`` for execs and
    lifecycle records (escapes already name it as ``dst``).
    """
    when = format_utc(event.ts)
    if event.kind is EventKind.HOST_LOGIN:
        result = "success" if event.success else "fail"
        return (
            f"{when} host_login src={event.src} dst={event.dst} user={event.user} "
            f"account={event.dst_account} result={result}"
        )
    if event.kind is EventKind.CONTAINER_ESCAPE:
        return (
            f"{when} container_event id={event.src} host={event.dst} action=escape "
            f"src={event.src} user={event.user}"
        )
    if event.kind is EventKind.CONTAINER_ACCESS:
        action = "exec"
    elif event.noise_tag == "container-lifecycle":
        action = "start"
    else:
        raise ValueError(f"event has no raw-grammar form: {event}")
    if host is None:
        raise ValueError("container events need the container's host")
    return (
        f"{when} container_event id={event.dst} host={host} action={action} "
        f"src={event.src} user={event.user}"
    )


# --- canonical JSONL -----------------------------------------------------------

_JSON_KEYS = ("ts", "kind", "src", "dst", "user", "dst_account", "success", "label", "noise_tag")


def serialize_event(event: AccessEvent) -> str:
    return json.dumps(event.to_json(), separators=(",", ":"))


def parse_json_line(line: str, lineno: int | None = None) -> AccessEvent:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", lineno) from exc
    if not isinstance(obj, dict) or set(obj) != set(_JSON_KEYS):
        raise ParseError(f"event object must have exactly the keys {', '.join(_JSON_KEYS)}", lineno)
    try:
        kind = EventKind(obj["kind"])
        label = Label.from_json(obj["label"])
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from exc
    ts = obj["ts"]
    if not isinstance(ts, int) or isinstance(ts, bool):
        raise ParseError("ts must be an integer", lineno)
    for key in ("src", "dst", "user", "dst_account"):
        if not isinstance(obj[key], str):
            raise ParseError(f"{key} must be a string", lineno)
    if not isinstance(obj["success"], bool):
        raise ParseError("success must be a boolean", lineno)
    tag = obj["noise_tag"]
    if tag is not None and not isinstance(tag, str):
        raise ParseError("noise_tag must be a string or null", lineno)
    return AccessEvent(
        ts=ts,
        kind=kind,
        src=obj["src"],
        dst=obj["dst"],
        user=obj["user"],
        dst_account=obj["dst_account"],
        success=obj["success"],
        label=label,
        noise_tag=tag,
    )


def parse_line(line: str, lineno: int | None = None) -> AccessEvent:
    """Dispatch on format: JSON objects are canonical records, anything else raw."""
    if line.lstrip().startswith("{"):
        return parse_json_line(line, lineno)
    return parse_raw_line(line, lineno)


# --- stream assembly -----------------------------------------------------------


def check_event(event: AccessEvent, topology: Topology, lineno: int | None = None) -> None:
    """Resolve node names and enforce the per-kind endpoint rules."""
    for name in (event.src, event.dst):
        if not topology.has_node(name):
            raise ResolutionError(f"unknown node {name!r}", lineno)
    src_kind, dst_kind = topology.kind(event.src), topology.kind(event.dst)
    origin = (NodeKind.HOST, NodeKind.EXTERNAL)
    if event.kind is EventKind.HOST_LOGIN:
        ok = src_kind in origin and dst_kind is NodeKind.HOST
    elif event.kind is EventKind.CONTAINER_ACCESS:
        ok = src_kind in origin and dst_kind is NodeKind.CONTAINER
    elif event.kind is EventKind.CONTAINER_ESCAPE:
        ok = (
            src_kind is NodeKind.CONTAINER
            and dst_kind is NodeKind.HOST
            and topology.container_map[event.src].host == event.dst
        )
    else:
        ok = True
    if not ok:
        raise ResolutionError(
            f"{event.kind.value} {event.src}->{event.dst} violates endpoint rules", lineno
        )


def read_event_stream(lines: Iterable[str], topology: Topology) -> EventStream:
    """Parse, resolve and canonically order a sequence of log lines.

    Blank lines are skipped; input order does not matter.
    """
    events = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        event = parse_line(line, lineno)
        check_event(event, topology, lineno)
        events.append(event)
    return EventStream.from_events(events)


def read_event_files(paths: Iterable, topology: Topology) -> EventStream:
    events: list[AccessEvent] = []
    for path in paths:
        with open(path, encoding="utf-8") as fh:
            try:
                events.extend(read_event_stream(fh, topology).events)
            except (ParseError, ResolutionError) as exc:
                raise type(exc)(f"{path}: {exc}") from exc
    return EventStream.from_events(events)
