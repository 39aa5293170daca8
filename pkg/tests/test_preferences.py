import math
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from smpclone.matching import validate_instance
from smpclone.metrics import MetricVector
from smpclone.oracle import enumerate_stable_sm
from smpclone.preferences import (
    EmptyCorpus,
    WeightVector,
    build_preferences,
    metric_distance,
    normalize,
    parse_weights,
    squared_distance_keys,
)

# method metrics of two source files: (loc, nbp, nbv, mca, mce, cc, nbd)
FILE_A_METRICS = {
    "A": MetricVector(6, 1, 1, 0, 0, 2, 1),
    "B": MetricVector(4, 2, 1, 0, 0, 1, 1),
    "C": MetricVector(6, 1, 1, 0, 0, 2, 2),
}
FILE_B_METRICS = {
    "1": MetricVector(1, 2, 0, 0, 0, 1, 1),
    "2": MetricVector(1, 2, 1, 0, 0, 1, 1),
    "3": MetricVector(10, 1, 0, 0, 0, 2, 2),
}
UNIT = WeightVector()


def test_normalize_identical_vectors_are_zero():
    v = MetricVector(3, 1, 1, 0, 0, 2, 1)
    na, nb, _ = normalize([v, v], [v])
    assert na == [(0.0,) * 7] * 2 and nb == [(0.0,) * 7]


def test_normalize_endpoints():
    na, nb, stats = normalize([MetricVector(0, 0, 0, 0, 0, 1, 1)], [MetricVector(10, 0, 0, 0, 0, 1, 1)])
    assert na[0][0] == 0.0 and nb[0][0] == 1.0
    assert stats.mins[0] == 0 and stats.maxs[0] == 10


def test_normalize_reference_tables_loc():
    na, _, stats = normalize(list(FILE_A_METRICS.values()), list(FILE_B_METRICS.values()))
    assert (stats.mins[0], stats.maxs[0]) == (1, 10)
    assert na[0][0] == pytest.approx(5 / 9)
    assert round(na[0][0], 4) == 0.5556


def test_normalize_empty():
    with pytest.raises(EmptyCorpus):
        normalize([], [MetricVector(1, 0, 0, 0, 0, 1, 1)])


def test_distance_identity():
    u = (0.2, 0.4, 0.0, 1.0, 0.5, 0.3, 0.9)
    assert metric_distance(u, u, UNIT) == 0.0


def test_distance_raw_b_vs_2():
    assert metric_distance(FILE_A_METRICS["B"], FILE_B_METRICS["2"], UNIT) == 3.0


def test_distance_symmetric_random():
    rng = random.Random(11)
    for _ in range(100):
        u = [rng.random() for _ in range(7)]
        v = [rng.random() for _ in range(7)]
        w = [rng.random() for _ in range(7)]
        assert metric_distance(u, v, w) == metric_distance(v, u, w)


unit_vec = st.lists(st.floats(0, 1), min_size=7, max_size=7)
weights = st.lists(st.floats(0.01, 10), min_size=7, max_size=7)


@settings(max_examples=200, deadline=None)
@given(unit_vec, unit_vec, unit_vec, weights)
def test_metric_axioms(u, v, x, w):
    d = lambda p, q: metric_distance(p, q, w)  # noqa: E731
    assert d(u, v) >= 0
    assert d(u, v) == d(v, u)
    assert d(u, x) <= d(u, v) + d(v, x) + 1e-12
    if u != v:
        assert d(u, v) > 0 or max(abs(a - b) for a, b in zip(u, v)) < 1e-150


def test_reference_tables_preferences():
    corpus_a = list(FILE_A_METRICS.items())
    corpus_b = list(FILE_B_METRICS.items())
    table = build_preferences(corpus_a, corpus_b, UNIT, normalized=False)
    b_list = [table.labels_b[j] for j in table.prefs_a[1]]
    assert b_list == ["2", "1", "3"]
    dists = [metric_distance(FILE_A_METRICS["B"], FILE_B_METRICS[k], UNIT) for k in b_list]
    assert dists[0] == pytest.approx(3.0, abs=1e-9)
    assert dists[1] == pytest.approx(math.sqrt(10))
    assert dists[2] == pytest.approx(math.sqrt(40))
    assert table.labels_a[table.prefs_b[1][0]] == "B"


def test_singletons():
    table = build_preferences([("a", FILE_A_METRICS["A"])], [("b", FILE_B_METRICS["1"])], UNIT)
    assert table.prefs_a == ((0,),) and table.prefs_b == ((0,),)


def test_identical_vectors_ranked_by_id():
    v = MetricVector(5, 1, 1, 0, 0, 1, 1)
    table = build_preferences(
        [("x", MetricVector(1, 0, 0, 0, 0, 1, 1))],
        [("q", v), ("p", v), ("r", MetricVector(9, 3, 0, 0, 0, 1, 1))],
        UNIT,
    )
    assert [table.labels_b[j] for j in table.prefs_a[0]][:2] == ["p", "q"]


def test_identity_pairs_are_excluded():
    corpus = list(FILE_A_METRICS.items())
    table = build_preferences(corpus, corpus, UNIT)
    for i, lst in enumerate(table.prefs_a):
        assert i not in lst and len(lst) == 2


def test_parse_weights():
    assert parse_weights("loc=2,cc=3") == WeightVector(loc=2.0, cc=3.0)
    assert parse_weights("") == WeightVector()
    with pytest.raises(ValueError):
        parse_weights("lines=2")
    with pytest.raises(ValueError):
        parse_weights("loc=0,nbp=0,nbv=0,mca=0,mce=0,cc=0,nbd=0")


def test_exact_keys_agree_with_float_distance():
    rng = random.Random(5)
    a = [MetricVector(*[rng.randint(0, 9) for _ in range(7)]) for _ in range(8)]
    b = [MetricVector(*[rng.randint(0, 9) for _ in range(7)]) for _ in range(8)]
    w = WeightVector(0.3, 1, 2.5, 1, 1, 0.1, 7)
    keys, denom = squared_distance_keys(a, b, w)
    na, nb, _ = normalize(a, b)
    for i in range(8):
        for j in range(8):
            assert math.sqrt(keys[i][j] / denom) == pytest.approx(metric_distance(na[i], nb[j], w))


metric_vec = st.builds(MetricVector, *[st.integers(0, 6)] * 7)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(metric_vec, min_size=1, max_size=6),
    st.lists(metric_vec, min_size=1, max_size=6),
    st.lists(st.integers(1, 20), min_size=7, max_size=7),
    st.sampled_from([0.5, 3.0, 10.0, 0.1]),
)
def test_rank_invariance_under_weight_scaling(va, vb, w, c):
    corpus_a = [(f"a{i}", v) for i, v in enumerate(va)]
    corpus_b = [(f"b{i}", v) for i, v in enumerate(vb)]
    base = build_preferences(corpus_a, corpus_b, WeightVector(*w))
    scaled = build_preferences(corpus_a, corpus_b, WeightVector(*[x * c for x in w]))
    assert base == scaled
    validate_instance(base, complete=True)


@settings(max_examples=60, deadline=None)
@given(st.lists(metric_vec, min_size=1, max_size=5), st.lists(metric_vec, min_size=1, max_size=5))
def test_mutual_nearest_in_every_stable_matching(va, vb):
    assume(len(va) == len(vb))
    corpus_a = [(f"a{i}", v) for i, v in enumerate(va)]
    corpus_b = [(f"b{i}", v) for i, v in enumerate(vb)]
    table = build_preferences(corpus_a, corpus_b, UNIT)
    stable = enumerate_stable_sm(table)
    for a, lst in enumerate(table.prefs_a):
        b = lst[0]
        if table.prefs_b[b][0] == a:
            assert all((a, b) in m for m in stable)
