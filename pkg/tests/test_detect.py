import pytest

from slicelm.detect import (
    DetectionReport,
    Threshold,
    apply_fp_filter,
    calibrate_threshold,
    detect,
    detect_paths,
    predicted_edge_set,
)
from slicelm.errors import ConfigError
from slicelm.graph import EdgeCategory
from slicelm.paths import Path
from slicelm.scoring import DetectorVariant as V, EdgeProbTable, ScoredPath, SubScores, score_path

from .conftest import make_edge

HC = EdgeCategory.HOST_CONTAINER


def fake(score, edges=None, variant=V.FULL):
    edges = edges or (make_edge("A", "B", int(score * 10)),)
    return ScoredPath(Path(tuple(edges)), SubScores(1, 1, 1, 1), frozenset(), {variant: score})


def test_calibrate_max():
    assert calibrate_threshold([fake(2), fake(2), fake(2)], V.FULL).alpha == 2
    assert calibrate_threshold([fake(1), fake(3), fake(2)], V.FULL).alpha == 3


def test_calibrate_empty():
    assert calibrate_threshold([], V.FIRST_TWO) == Threshold(V.FIRST_TWO, 0.0)


def test_default_training_alpha(default_model):
    # every normal path is one hop; the widest container (NRF-12, AMF, ...) spans 2 slices
    assert default_model.thresholds[V.FULL].alpha == 3
    assert default_model.thresholds[V.FIRST_THREE].alpha == 3
    assert default_model.thresholds[V.FIRST_TWO].alpha == 1
    assert all(sp.path.hop_count == 1 for sp in default_model.training_paths)


@pytest.mark.parametrize("score, alpha, flagged", [(9, 2, True), (2, 2, False), (2, 1.9, True)])
def test_strict_threshold(score, alpha, flagged):
    rep = detect_paths([fake(score)], Threshold(V.FULL, alpha))
    assert bool(rep.flagged_paths) is flagged
    assert rep.predicted_edges == predicted_edge_set(rep)


def test_variant_mismatch():
    with pytest.raises(ConfigError):
        detect_paths([fake(3, variant=V.FULL)], Threshold(V.FIRST_TWO, 1))


def _flag(topo, table, *edges):
    sp = score_path(Path(tuple(edges)), table, topo)
    return DetectionReport(V.FULL, 0.0, (sp,), predicted_edge_set([sp]))


def test_filter_drops_single_seen_container_edge(topo):
    table = EdgeProbTable(1, {("H-3", "SMF-3"): 1})
    rep = _flag(topo, table, make_edge("INTERNET", "H-3", 0), make_edge("H-3", "SMF-3", 60, category=HC))
    out = apply_fp_filter(rep, table)
    assert out.flagged_paths == () and out.predicted_edges == frozenset()
    assert out.filter_applied


def test_filter_keeps_two_container_edges(topo):
    table = EdgeProbTable(1, {("H-3", "SMF-3"): 1})
    rep = _flag(
        topo,
        table,
        make_edge("INTERNET", "UPF-3", 0, category=HC),
        make_edge("UPF-3", "H-3", 10, category=HC),
        make_edge("H-3", "SMF-3", 20, category=HC),
    )
    assert apply_fp_filter(rep, table).flagged_paths == rep.flagged_paths


def test_filter_keeps_unseen_container_edge(topo):
    table = EdgeProbTable(1, {})
    rep = _flag(topo, table, make_edge("INTERNET", "H-3", 0), make_edge("H-3", "SMF-3", 60, category=HC))
    assert len(apply_fp_filter(rep, table).flagged_paths) == 1


def test_predicted_edges_union_counts_shared_edge_once():
    shared = make_edge("A", "B", 0)
    a = fake(5, (shared,))
    b = fake(6, (shared, make_edge("B", "C", 3)))
    assert len(predicted_edge_set([a, b])) == 2
    assert predicted_edge_set([]) == frozenset()


def test_training_paths_never_flagged(default_model):
    for v in V:
        assert detect_paths(default_model.training_paths, default_model.thresholds[v]).flagged_paths == ()


def test_campaign_two_fully_predicted(default_sim, default_model, default_run):
    rep = detect(default_model, default_run, V.FULL)
    c2 = {
        (e.ts, e.src, e.dst, e.user)
        for e in default_sim.events
        if e.forms_edge and e.label and e.label.malicious and e.label.campaign == 2
    }
    assert len(c2) == 5
    assert c2 <= {tuple(e.identity) for e in rep.predicted_edges}


def test_filter_is_subtractive(default_model, default_run):
    for v in V:
        raw = detect(default_model, default_run, v)
        filtered = detect(default_model, default_run, v, fp_filter=True)
        assert all(sp in raw.flagged_paths for sp in filtered.flagged_paths)
        assert filtered.predicted_edges <= raw.predicted_edges


def test_report_json(default_model, default_run):
    rep = detect(default_model, default_run, V.FULL)
    obj = rep.to_json()
    assert set(obj) == {"variant", "alpha", "filter_applied", "flagged", "predicted_edges"}
    assert obj["variant"] == "full" and obj["alpha"] == 3
    first = obj["flagged"][0]
    assert set(first) >= {"nodes", "timestamps", "user", "subscores", "score"}
    assert rep.dumps() == detect(default_model, default_run, V.FULL).dumps()
