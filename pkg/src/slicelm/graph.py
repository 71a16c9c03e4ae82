"""Directed, time-stamped host-container access multigraph."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple

from .ingest import EventKind, EventStream


class EdgeCategory(str, Enum):
    HOST_HOST = "HostHost"
    HOST_CONTAINER = "HostContainer"


class EdgeId(NamedTuple):
    """Identity used to join detector output with ground truth."""

    ts: int
    src: str
    dst: str
    user: str


@dataclass(frozen=True)
class AccessEdge:
    src: str
    dst: str
    user: str
    dst_account: str
    ts: int
    category: EdgeCategory

    @property
    def identity(self) -> EdgeId:
        return EdgeId(self.ts, self.src, self.dst, self.user)

    def sort_key(self) -> tuple:
        return (self.ts, self.src, self.dst, self.user, self.dst_account, self.category.value)

    def to_json(self) -> dict:
        return {
            "ts": self.ts,
            "src": self.src,
            "dst": self.dst,
            "user": self.user,
            "dst_account": self.dst_account,
            "category": self.category.value,
        }

    @classmethod
    def from_json(cls, obj: dict) -> AccessEdge:
        return cls(
            src=obj["src"],
            dst=obj["dst"],
            user=obj["user"],
            dst_account=obj["dst_account"],
            ts=obj["ts"],
            category=EdgeCategory(obj["category"]),
        )


@dataclass(frozen=True)
class AccessGraph:
    nodes: frozenset[str]
    edges: tuple[AccessEdge, ...]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.to_json(), separators=(",", ":")) + "\n" for e in self.edges)


_CATEGORY = {
    EventKind.HOST_LOGIN: EdgeCategory.HOST_HOST,
    EventKind.CONTAINER_ACCESS: EdgeCategory.HOST_CONTAINER,
    EventKind.CONTAINER_ESCAPE: EdgeCategory.HOST_CONTAINER,
}

DEFAULT_DEDUP_WINDOW = 300


def build_graph(stream: EventStream, dedup_window: int = DEFAULT_DEDUP_WINDOW) -> AccessGraph:
    """One edge per successful, non-noise event.

    Repeats of the same (kind, src, dst, user, dst_account) within
    ``dedup_window`` seconds of the last *retained* occurrence collapse into
    that occurrence. A window of 0 disables collapsing entirely.
    """
    if dedup_window < 0:
        raise ValueError("dedup_window must be >= 0")
    retained: dict[tuple, int] = {}
    edges: list[AccessEdge] = []
    for ev in stream.events:
        if not ev.forms_edge:
            continue
        key = (ev.kind, ev.src, ev.dst, ev.user, ev.dst_account)
        last = retained.get(key)
        if dedup_window > 0 and last is not None and ev.ts - last <= dedup_window:
            continue
        retained[key] = ev.ts
        edges.append(AccessEdge(ev.src, ev.dst, ev.user, ev.dst_account, ev.ts, _CATEGORY[ev.kind]))
    edges.sort(key=AccessEdge.sort_key)
    nodes = frozenset(n for e in edges for n in (e.src, e.dst))
    return AccessGraph(nodes, tuple(edges))
