"""Causal path enumeration over an access graph.

A causal path is a chain of distinct edges e1..ek such that every edge has the
same acting user, dst(e_i) == src(e_i+1), and the next edge starts no earlier
than the previous one and at most ``tau`` seconds after it. Every such chain is
returned, not only maximal ones.
"""

from __future__ import annotations

import bisect
from collections import defaultdict
from dataclasses import dataclass

from .errors import ConfigError
from .graph import AccessEdge, AccessGraph
from .model import Topology

DEFAULT_TAU = 28_800
DEFAULT_MAX_HOPS = 16


@dataclass(frozen=True)
class Path:
    edges: tuple[AccessEdge, ...]

    def __post_init__(self) -> None:
        if not self.edges:
            raise ValueError("a path needs at least one edge")

    @property
    def user(self) -> str:
        return self.edges[0].user

    @property
    def hop_count(self) -> int:
        return len(self.edges)

    @property
    def start_ts(self) -> int:
        return self.edges[0].ts

    @property
    def end_ts(self) -> int:
        return self.edges[-1].ts

    @property
    def nodes(self) -> tuple[str, ...]:
        return (self.edges[0].src, *(e.dst for e in self.edges))

    def slices_touched(self, topology: Topology) -> frozenset[int]:
        """Union of slice memberships of every container endpoint."""
        out: set[int] = set()
        for node in self.nodes:
            out |= topology.node_slices(node)
        return frozenset(out)

    def sort_key(self) -> tuple:
        return (
            self.start_ts,
            self.nodes,
            tuple(e.ts for e in self.edges),
            self.user,
            tuple(e.dst_account for e in self.edges),
            tuple(e.category.value for e in self.edges),
        )


def is_causal(edges: tuple[AccessEdge, ...] | list[AccessEdge], tau: int) -> bool:
    """True when ``edges`` form a valid causal chain under gap bound ``tau``."""
    if not edges:
        return False
    user = edges[0].user
    for a, b in zip(edges, edges[1:]):
        if b.user != user or a.dst != b.src:
            return False
        if b.ts < a.ts or b.ts - a.ts > tau:
            return False
    return True


def enumerate_paths(
    graph: AccessGraph, tau: int = DEFAULT_TAU, max_hops: int = DEFAULT_MAX_HOPS
) -> list[Path]:
    """All causal chains of 1..max_hops distinct edges, in canonical order."""
    if tau <= 0:
        raise ConfigError(f"tau must be positive, got {tau}")
    if max_hops < 1:
        raise ConfigError(f"max_hops must be >= 1, got {max_hops}")

    edges = graph.edges
    # (src, user) -> edge indices ordered by timestamp, for successor lookup.
    out: dict[tuple[str, str], list[int]] = defaultdict(list)
    for i, e in enumerate(edges):
        out[(e.src, e.user)].append(i)
    for idx in out.values():
        idx.sort(key=lambda i: edges[i].ts)
    out_ts = {k: [edges[i].ts for i in idx] for k, idx in out.items()}

    found: list[Path] = []

    def extend(chain: list[int]) -> None:
        found.append(Path(tuple(edges[i] for i in chain)))
        if len(chain) == max_hops:
            return
        last = edges[chain[-1]]
        key = (last.dst, last.user)
        succ = out.get(key)
        if not succ:
            return
        times = out_ts[key]
        lo = bisect.bisect_left(times, last.ts)
        hi = bisect.bisect_right(times, last.ts + tau)
        for j in succ[lo:hi]:
            if j not in chain:
                chain.append(j)
                extend(chain)
                chain.pop()

    for i in range(len(edges)):
        extend([i])

    found.sort(key=Path.sort_key)
    return found
