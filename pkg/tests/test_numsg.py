from hypothesis import given, strategies as st

import pytest

from remono.core import annihilator
from remono.graphs import GraphInstance, complete_graph, cycle_graph
from remono.numsg import analyze_annihilator, denormalize, gaps, membership, normalize


def brute_members(gens, limit):
    s = {0}
    for n in range(1, limit + 1):
        if any(n - g in s for g in gens if g <= n):
            s.add(n)
    return s


def test_normalize_examples():
    s = normalize([9, 15])
    assert s.d == 3 and s.normalized == (3, 5)
    assert normalize([1]).normalized == (1,)
    assert normalize([4, 6]).normalized == (2, 3) and normalize([4, 6]).d == 2
    with pytest.raises(ValueError):
        normalize([])


def test_gap_examples():
    assert gaps(normalize([9, 15])) == (frozenset({1, 2, 4, 7}), 7)
    assert gaps(normalize([1])) == (frozenset(), -1)
    assert gaps(normalize([2, 3])) == (frozenset({1}), 1)
    with pytest.raises(ValueError):
        gaps([4, 6])


def test_membership_examples():
    s = normalize([9, 15])
    assert membership(s, 24) and not membership(s, 21) and membership(s, 0)


def test_annihilator_examples():
    rep = analyze_annihilator({0, 9, 15, 18, 24, 27, 30}, 30)
    assert rep.closed and rep.generators == (9, 15) and rep.d == 3
    assert analyze_annihilator({0}).trivial
    rep = analyze_annihilator(set(range(0, 21, 2)), 20)
    assert rep.d == 2 and rep.normalized == (1,)


def test_annihilator_window_from_core():
    win = annihilator(GraphInstance(), cycle_graph(5), complete_graph(2), 4)
    assert analyze_annihilator(win.points, 4).closed


gens = st.lists(st.integers(1, 30), min_size=1, max_size=4)


@given(gens)
def test_gaps_against_brute_force(g):
    s = normalize(g)
    gap_set, frob = gaps(s)
    members = brute_members(s.normalized, frob + 60)
    assert gap_set == frozenset(set(range(frob + 60)) - members)
    assert frob == (max(gap_set) if gap_set else -1)


@given(st.integers(2, 25), st.integers(2, 25))
def test_two_generator_frobenius(a, b):
    import math
    if math.gcd(a, b) != 1:
        return
    assert gaps(normalize([a, b]))[1] == a * b - a - b


@given(gens, st.integers(0, 200))
def test_scaling_identifies_submonoids(g, n):
    s = normalize(g)
    assert membership(s, s.d * n) == membership(s.normalized, n)
    assert normalize(denormalize(s)).normalized == s.normalized
