import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import window_syndetic, window_thick
from nonautodyn.hitting import (
    HittingSet,
    classify,
    histogram,
    intersection,
    max_thick_run,
    min_syndetic_bound,
    union,
)


def _set(members, N, start=0):
    return HittingSet(N, np.asarray(members, np.int64), start=start)


def test_multiples_of_three():
    S = _set(range(0, 1001, 3), 1000)
    c = classify(S, "syndetic", 3)
    assert c.verdict == "holds" and c.bound == 2
    t = classify(S, "thick", 2)
    assert t.verdict == "fails" and t.certificate == {"longest_run": 1}


def test_dyadic_blocks():
    N = 2**15
    members = sorted({n for j in range(16) for n in range(2**j, 2**j + j + 1) if n <= N})
    S = _set(members, N)
    th = classify(S, "thick", 10)
    assert th.verdict == "holds"
    assert th.certificate["run"] == [1024, 1034]
    sy = classify(S, "syndetic", 100)
    assert sy.verdict == "fails"
    a, b = sy.certificate["window"]
    assert b - a == 100 and not any(a <= n <= b for n in members)
    # largest gap sits between the last two blocks
    assert min_syndetic_bound(S) == 2**14 - 14 - 1


def test_inconclusive_on_short_horizon():
    S = _set(range(0, 50, 3), 49)
    assert classify(S, "syndetic", 10).verdict == "inconclusive"
    assert classify(S, "thick", 5).verdict == "inconclusive"


def test_bound_search():
    S = _set([n for n in range(2000) if n % 7 in (0, 1, 2)], 1999)
    free = classify(S, "syndetic")
    assert free.bound == 4 and free.verdict == "holds"
    assert classify(S, "thick").bound == 2
    assert max_thick_run(_set([], 10)) == -1
    assert classify(_set([], 100), "syndetic").verdict == "fails"


def test_bad_arguments():
    S = _set([1], 10)
    with pytest.raises(ValueError):
        classify(S, "dense", 1)
    with pytest.raises(ValueError):
        classify(S, "thick", 0)
    with pytest.raises(ValueError):
        _set([11], 10)


def test_witness_lookup_and_csv():
    pts = ["p", "q", "r"]
    S = HittingSet(10, np.array([2, 5]), points=pts, wit_x=np.array([0, 1]), wit_y=np.array([2, 2]), wit_value=np.array([0.5, 1.0]))
    w = S.witness(5)
    assert (w.n, w.x, w.y, w.value) == (5, "q", "r", 1.0)
    with pytest.raises(KeyError):
        S.witness(3)
    assert S.to_csv() == "member\n2\n5\n"
    assert 2 in S and 3 not in S


def test_set_algebra_and_histograms():
    a, b = _set([1, 2, 3], 10), _set([3, 4], 10)
    assert union([a, b]).members.tolist() == [1, 2, 3, 4]
    assert intersection([a, b]).members.tolist() == [3]
    assert histogram(a.runs()) == [(3, 1)]
    assert histogram(a.gaps()) == [(1, 1), (7, 1)]


masks = st.lists(st.booleans(), min_size=1, max_size=400).map(lambda v: np.array(v, bool))


@settings(max_examples=200, deadline=None)
@given(masks, st.integers(1, 40))
def test_classifier_matches_window_scan(mask, b):
    S = HittingSet.from_mask(mask)
    assert classify(S, "syndetic", b).verdict == window_syndetic(mask, b, S.horizon)
    assert classify(S, "thick", b).verdict == window_thick(mask, b, S.horizon)


@settings(max_examples=200, deadline=None)
@given(masks, st.integers(1, 40))
def test_duality_with_complement(mask, k):
    S = HittingSet.from_mask(mask)
    thick = classify(S, "thick", k).verdict
    synd = classify(S.complement(), "syndetic", k).verdict
    if "inconclusive" not in (thick, synd):
        # no run of k+1 members iff every window of k+1 meets the complement
        assert (thick == "fails") == (synd == "holds")


@settings(max_examples=200, deadline=None)
@given(masks, st.integers(1, 30), st.integers(0, 500))
def test_translation_stability(mask, M, t):
    S = HittingSet.from_mask(mask, start=0)
    a, b = classify(S, "syndetic", M), classify(S.translate(t), "syndetic", M)
    if a.verdict != "inconclusive" and b.verdict != "inconclusive":
        assert a.verdict == b.verdict
    assert a.bound == b.bound
