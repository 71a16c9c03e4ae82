"""Static world model: hosts, NF containers, slices, external origins and users.

A :class:`Topology` is immutable once built and validates its own invariants,
so every other module can rely on container hosts and slice references being
resolvable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping

from .errors import TopologyError


class NodeKind(str, Enum):
    HOST = "host"
    CONTAINER = "container"
    EXTERNAL = "external"


class NfType(str, Enum):
    AMF = "AMF"
    SMF = "SMF"
    UPF = "UPF"
    NRF = "NRF"
    AUSF = "AUSF"
    NSSF = "NSSF"
    UDM = "UDM"
    OTHER = "OTHER"


@dataclass(frozen=True)
class Slice:
    id: int
    descriptor: str


@dataclass(frozen=True)
class Container:
    name: str
    nf: NfType
    host: str
    slices: frozenset[int]


@dataclass(frozen=True)
class Topology:
    """Validated static world.

    Node names are unique across hosts, externals and containers. Slice
    membership is carried by containers only; a host's slice exposure is the
    union over the containers it runs (see :meth:`host_slices`).
    """

    hosts: tuple[str, ...]
    externals: tuple[str, ...]
    slices: tuple[Slice, ...]
    containers: tuple[Container, ...]
    users: tuple[str, ...] = ()
    target_slice: int | None = None

    def __post_init__(self) -> None:
        _validate(self)

    @cached_property
    def node_kinds(self) -> dict[str, NodeKind]:
        kinds = {h: NodeKind.HOST for h in self.hosts}
        kinds.update({e: NodeKind.EXTERNAL for e in self.externals})
        kinds.update({c.name: NodeKind.CONTAINER for c in self.containers})
        return kinds

    @cached_property
    def container_map(self) -> dict[str, Container]:
        return {c.name: c for c in self.containers}

    @property
    def nodes(self) -> frozenset[tuple[str, NodeKind]]:
        return frozenset(self.node_kinds.items())

    @property
    def slice_ids(self) -> frozenset[int]:
        return frozenset(s.id for s in self.slices)

    def kind(self, name: str) -> NodeKind:
        try:
            return self.node_kinds[name]
        except KeyError:
            raise KeyError(f"unknown node {name!r}") from None

    def has_node(self, name: str) -> bool:
        return name in self.node_kinds

    def node_slices(self, name: str) -> frozenset[int]:
        """Slices of a container node; empty for hosts and externals."""
        c = self.container_map.get(name)
        return c.slices if c is not None else frozenset()

    def containers_on(self, host: str) -> tuple[Container, ...]:
        return tuple(c for c in self.containers if c.host == host)

    def host_slices(self, host: str) -> frozenset[int]:
        out: set[int] = set()
        for c in self.containers_on(host):
            out |= c.slices
        return frozenset(out)

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {
            "hosts": list(self.hosts),
            "externals": list(self.externals),
            "slices": [{"id": s.id, "descriptor": s.descriptor} for s in self.slices],
            "containers": [
                {"name": c.name, "nf": c.nf.value, "host": c.host, "slices": sorted(c.slices)}
                for c in self.containers
            ],
            "users": list(self.users),
        }
        if self.target_slice is not None:
            doc["target_slice"] = self.target_slice
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _validate(t: Topology) -> None:
    seen: set[str] = set()
    for name in (*t.hosts, *t.externals, *(c.name for c in t.containers)):
        if not isinstance(name, str) or not name:
            raise TopologyError(f"node names must be non-empty strings, got {name!r}")
        if name in seen:
            raise TopologyError(f"duplicate node name {name!r}")
        seen.add(name)

    slice_ids: set[int] = set()
    for s in t.slices:
        if s.id in slice_ids:
            raise TopologyError(f"duplicate slice id {s.id}")
        slice_ids.add(s.id)

    hosts = set(t.hosts)
    for c in t.containers:
        if c.host not in hosts:
            raise TopologyError(f"container {c.name!r} references unknown host {c.host!r}")
        if not c.slices:
            raise TopologyError(f"container {c.name!r} belongs to no slice")
        missing = c.slices - slice_ids
        if missing:
            raise TopologyError(
                f"container {c.name!r} references unknown slice(s) {sorted(missing)}"
            )
    if t.target_slice is not None and t.target_slice not in slice_ids:
        raise TopologyError(f"target_slice {t.target_slice} is not a declared slice")


def _str_list(doc: Mapping[str, Any], key: str, required: bool = True) -> tuple[str, ...]:
    if key not in doc:
        if required:
            raise TopologyError(f"missing key {key!r}")
        return ()
    value = doc[key]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise TopologyError(f"{key!r} must be a list of strings")
    return tuple(value)


def topology_from_dict(doc: Mapping[str, Any]) -> Topology:
    if not isinstance(doc, Mapping):
        raise TopologyError("topology document must be a JSON object")
    hosts = _str_list(doc, "hosts")
    externals = _str_list(doc, "externals", required=False)
    users = _str_list(doc, "users", required=False)

    slices = []
    for entry in doc.get("slices", []):
        try:
            sid, desc = entry["id"], entry["descriptor"]
        except (TypeError, KeyError) as exc:
            raise TopologyError(f"malformed slice entry {entry!r}") from exc
        if not isinstance(sid, int) or isinstance(sid, bool) or not isinstance(desc, str):
            raise TopologyError(f"malformed slice entry {entry!r}")
        slices.append(Slice(sid, desc))

    containers = []
    for entry in doc.get("containers", []):
        try:
            name, nf, host, member = entry["name"], entry["nf"], entry["host"], entry["slices"]
        except (TypeError, KeyError) as exc:
            raise TopologyError(f"malformed container entry {entry!r}") from exc
        try:
            nf_type = NfType(nf)
        except ValueError as exc:
            raise TopologyError(f"container {name!r}: unknown NF type {nf!r}") from exc
        if not isinstance(member, list) or not all(
            isinstance(s, int) and not isinstance(s, bool) for s in member
        ):
            raise TopologyError(f"container {name!r}: slices must be a list of integers")
        if not isinstance(host, str):
            raise TopologyError(f"container {name!r}: host must be a string")
        containers.append(Container(name, nf_type, host, frozenset(member)))

    target = doc.get("target_slice")
    if target is not None and (not isinstance(target, int) or isinstance(target, bool)):
        raise TopologyError("target_slice must be an integer")

    return Topology(
        hosts=hosts,
        externals=externals,
        slices=tuple(slices),
        containers=tuple(containers),
        users=users,
        target_slice=target,
    )


def load_topology(document: str | bytes) -> Topology:
    """Parse and validate a JSON topology document."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise TopologyError(f"malformed topology document: {exc}") from exc
    return topology_from_dict(doc)


def read_topology(path: str | Path) -> Topology:
    return load_topology(Path(path).read_text(encoding="utf-8"))


def default_topology() -> Topology:
    """The shipped reconstruction of the sliced lab deployment.

    INTERNET is the only external origin. H-56 carries both slice 5 and
    slice 6 containers (the dual-VLAN host); NRF-12 and the control-plane
    NFs on H-CP serve slices 1 and 2.
    """
    text = resources.files("slicelm").joinpath("data/default_topology.json").read_text("utf-8")
    return load_topology(text)


def iter_nodes(topology: Topology, kind: NodeKind) -> Iterable[str]:
    return (n for n, k in topology.node_kinds.items() if k is kind)


__all__ = [
    "Container",
    "NfType",
    "NodeKind",
    "Slice",
    "Topology",
    "default_topology",
    "iter_nodes",
    "load_topology",
    "read_topology",
    "topology_from_dict",
]
