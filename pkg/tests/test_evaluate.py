import pytest
from hypothesis import given
from hypothesis import strategies as st

from slicelm.errors import EvaluationInputError
from slicelm.evaluate import Metrics, evaluate_edges, format_pct, metrics_csv, metrics_json
from slicelm.graph import EdgeId


def ids(n, start=0):
    return [EdgeId(i, "A", "B", "u") for i in range(start, start + n)]


def test_published_rates():
    assert format_pct(Metrics(19, 1, 11, 0).tpr) == "100.00"
    assert format_pct(Metrics(16, 1, 11, 3).tpr) == "84.21"
    assert format_pct(Metrics(19, 1, 11, 0).fpr) == "8.33"


def test_counts():
    universe = ids(31)
    truth = universe[:19]
    predicted = universe[:16] + universe[19:20]
    m = evaluate_edges(predicted, truth, universe)
    assert (m.tp, m.fp, m.tn, m.fn) == (16, 1, 11, 3)


def test_undefined_rates():
    m = evaluate_edges([], [], ids(3))
    assert m.tpr is None and m.to_json()["tpr"] is None
    assert metrics_csv([("full", m)]).splitlines()[1] == "full,0,0,,0.00"


def test_outside_universe():
    with pytest.raises(EvaluationInputError):
        evaluate_edges(ids(1, 10), [], ids(3))
    with pytest.raises(EvaluationInputError):
        evaluate_edges([], ids(1, 10), ids(3))


def test_table_layout():
    rows = [("full", Metrics(19, 1, 11, 0)), ("first2", Metrics(0, 1, 11, 19))]
    assert metrics_csv(rows) == "algorithm,tp,fp,tpr,fpr\nfull,19,1,100.00,8.33\nfirst2,0,1,0.00,8.33\n"
    assert '"tpr": 100.0' in metrics_json(rows)


@given(st.sets(st.integers(0, 40)), st.sets(st.integers(0, 40)), st.randoms())
def test_partition_and_order_independence(pred, truth, rnd):
    universe = [EdgeId(i, "A", "B", "u") for i in range(41)]
    p = [universe[i] for i in pred]
    t = [universe[i] for i in truth]
    m = evaluate_edges(p, t, universe)
    assert m.tp + m.fp + m.tn + m.fn == len(universe)
    assert m.tp + m.fn == len(truth)
    rnd.shuffle(p)
    rnd.shuffle(universe)
    assert evaluate_edges(p, t, universe) == m
