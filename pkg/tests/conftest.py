from __future__ import annotations

import numpy as np
import pytest

from slicelm.detect import TrainedModel, score_test, train
from slicelm.graph import AccessEdge, EdgeCategory
from slicelm.model import default_topology
from slicelm.sim import SimConfig, simulate


def make_edge(src, dst, ts, user="u", category=EdgeCategory.HOST_HOST, account=None):
    return AccessEdge(src, dst, user, account or user, ts, category)


def random_edges(rng: np.random.Generator, max_nodes=8, max_edges=15, users=("u", "v"), horizon=60):
    n_nodes = int(rng.integers(2, max_nodes + 1))
    n_edges = int(rng.integers(1, max_edges + 1))
    nodes = [f"n{i}" for i in range(n_nodes)]
    edges = set()
    while len(edges) < n_edges:
        s, d = rng.choice(n_nodes, size=2, replace=True)
        edges.add(
            AccessEdge(
                nodes[s],
                nodes[d],
                str(rng.choice(users)),
                "acct",
                int(rng.integers(0, horizon)),
                EdgeCategory.HOST_HOST if rng.random() < 0.5 else EdgeCategory.HOST_CONTAINER,
            )
        )
    return sorted(edges, key=AccessEdge.sort_key)


@pytest.fixture(scope="session")
def topo():
    return default_topology()


@pytest.fixture(scope="session")
def default_sim(topo):
    return simulate(SimConfig(topo, seed=0))


@pytest.fixture(scope="session")
def default_model(default_sim, topo) -> TrainedModel:
    return train(default_sim.days_stream(default_sim.config.training_days), topo)


@pytest.fixture(scope="session")
def default_run(default_sim, default_model):
    return score_test(default_model, default_sim.days_stream(default_sim.config.test_days))


def _next_edge(rng, topo, at, ts, user):
    """A random edge leaving node ``at`` that respects node-kind rules."""
    kind = topo.kind(at).value
    if kind == "container":
        return AccessEdge(at, topo.container_map[at].host, user, user, ts, EdgeCategory.HOST_CONTAINER)
    if rng.random() < 0.5:
        dst = str(rng.choice([h for h in topo.hosts if h != at]))
        return AccessEdge(at, dst, user, user, ts, EdgeCategory.HOST_HOST)
    dst = str(rng.choice([c.name for c in topo.containers]))
    return AccessEdge(at, dst, user, user, ts, EdgeCategory.HOST_CONTAINER)


def random_walk(rng, topo, hops, user="u", start_ts=0, max_gap=600):
    """A valid causal path of ``hops`` edges over ``topo`` nodes."""
    at = str(rng.choice(list(topo.node_kinds)))
    ts = start_ts
    edges = []
    for _ in range(hops):
        e = _next_edge(rng, topo, at, ts, user)
        edges.append(e)
        at = e.dst
        ts += int(rng.integers(0, max_gap + 1))
    return edges


def random_table(rng, topo):
    from slicelm.scoring import EdgeProbTable

    days = int(rng.integers(1, 8))
    names = list(topo.node_kinds)
    seen = {}
    for _ in range(int(rng.integers(0, 120))):
        s, d = rng.choice(names, size=2)
        seen[(str(s), str(d))] = int(rng.integers(0, days + 1))
    # also cover real escape edges so their probability is sometimes non-zero
    for c in topo.containers:
        if rng.random() < 0.3:
            seen[(c.name, c.host)] = int(rng.integers(0, days + 1))
    return EdgeProbTable(days, seen)


ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE_RESULTS[name]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
