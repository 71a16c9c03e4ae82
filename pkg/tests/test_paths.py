from collections import Counter

import numpy as np
import pytest

from slicelm.errors import ConfigError
from slicelm.graph import AccessGraph
from slicelm.paths import enumerate_paths, is_causal

from .conftest import make_edge, random_edges
from .oracles import brute_force_paths


def graph(*edges):
    edges = tuple(sorted(edges, key=lambda e: e.sort_key()))
    return AccessGraph(frozenset(n for e in edges for n in (e.src, e.dst)), edges)


def node_seqs(paths):
    return [p.nodes for p in paths]


def test_two_hop_chain():
    g = graph(make_edge("A", "B", 0), make_edge("B", "C", 100))
    paths = enumerate_paths(g, tau=3600, max_hops=16)
    assert node_seqs(paths) == [("A", "B"), ("A", "B", "C"), ("B", "C")]


def test_chain_matches_oracle():
    edges = [make_edge("A", "B", 0), make_edge("B", "C", 100)]
    expected = Counter(tuple(edges[i] for i in idx) for idx in brute_force_paths(edges, 3600, 16))
    got = Counter(p.edges for p in enumerate_paths(graph(*edges), 3600, 16))
    assert got == expected and sum(got.values()) == 3


def test_user_change_breaks_chain():
    g = graph(make_edge("A", "B", 0, user="u"), make_edge("B", "C", 100, user="v"))
    assert len(enumerate_paths(g, 3600, 16)) == 2


def test_gap_beyond_tau_breaks_chain():
    g = graph(make_edge("A", "B", 0), make_edge("B", "C", 4000))
    assert len(enumerate_paths(g, 3600, 16)) == 2


def test_equal_timestamps_link():
    g = graph(make_edge("A", "B", 50), make_edge("B", "C", 50))
    assert ("A", "B", "C") in node_seqs(enumerate_paths(g, 10, 4))


def test_earlier_successor_does_not_link():
    g = graph(make_edge("A", "B", 50), make_edge("B", "C", 49))
    assert len(enumerate_paths(g, 10, 4)) == 2


def test_max_hops_caps_length():
    g = graph(*(make_edge(f"n{i}", f"n{i+1}", i) for i in range(5)))
    assert max(p.hop_count for p in enumerate_paths(g, 100, 3)) == 3


@pytest.mark.parametrize("tau, hops", [(0, 4), (-5, 4), (10, 0)])
def test_config_errors(tau, hops):
    with pytest.raises(ConfigError):
        enumerate_paths(graph(make_edge("A", "B", 0)), tau, hops)


def test_canonical_order():
    g = graph(make_edge("B", "C", 5), make_edge("A", "B", 5), make_edge("X", "Y", 1))
    paths = enumerate_paths(g, 10, 4)
    assert node_seqs(paths) == [("X", "Y"), ("A", "B"), ("A", "B", "C"), ("B", "C")]


@pytest.mark.parametrize("seed", range(60))
def test_matches_brute_force(seed):
    rng = np.random.default_rng(1000 + seed)
    edges = random_edges(rng)
    tau = int(rng.choice([1, 5, 15, 60]))
    hops = int(rng.integers(1, 5))
    expected = Counter(tuple(edges[i] for i in idx) for idx in brute_force_paths(edges, tau, hops))
    got = enumerate_paths(graph(*edges), tau, hops)
    assert Counter(p.edges for p in got) == expected
    for p in got:
        assert is_causal(p.edges, tau) and 1 <= p.hop_count <= hops


@pytest.mark.parametrize("seed", range(30))
def test_monotone_in_tau(seed):
    rng = np.random.default_rng(seed)
    g = graph(*random_edges(rng))
    t1 = int(rng.integers(1, 30))
    t2 = t1 + int(rng.integers(0, 30))
    small = {p.edges for p in enumerate_paths(g, t1, 4)}
    large = {p.edges for p in enumerate_paths(g, t2, 4)}
    assert small <= large


def test_enumeration_is_deterministic(default_run, default_model):
    again = enumerate_paths(default_run.graph, default_model.params.tau, default_model.params.max_hops)
    assert [p for p in again] == [sp.path for sp in default_run.scored]
