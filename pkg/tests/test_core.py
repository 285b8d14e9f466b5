import math
import os
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from remono.core import (Budget, GuardExceeded, RateInterval, TriState, annihilator,
                         catalytic_leq, check_guard, generating_pair_check, manycopy_leq, nfold,
                         rate_bounds, regularized_leq_witness, slice_points)
from remono.cone import ConeInstance, RationalCone
from remono.graphs import (GraphInstance, complete_graph, cycle_graph, hom_search, isomorphic,
                           join, log2_theta, power, random_graph)
from remono.major import Distribution, MajorInstance, generating_pair, renyi_functional, renyi_grid
from remono.rxn import Multiset, ReactionInstance, parse_reactions

G = GraphInstance()
M = MajorInstance()
C5, K1, K2, K3, K4, K11 = (cycle_graph(5), complete_graph(1), complete_graph(2), complete_graph(3),
                           complete_graph(4), complete_graph(11))
P45 = Distribution([F(4, 5), F(1, 5)])
U2 = Distribution.uniform(2)


def test_tristate_has_no_truth_value():
    with pytest.raises(TypeError):
        bool(TriState.yes())
    assert TriState.no("x").certificate == "x"
    assert TriState.yes(3).witness == 3


def test_budget_accounting():
    b = Budget(nodes=2)
    assert b.charge() and b.charge() and not b.charge()
    assert b.exhausted and not b.fresh().exhausted


def test_rate_interval_rejects_inverted_bounds():
    with pytest.raises(ValueError):
        RateInterval(F(2), F(1))


def test_guard_and_override(monkeypatch):
    with pytest.raises(GuardExceeded):
        check_guard(31, 30, "thing")
    monkeypatch.setenv("REMONO_GUARD_OVERRIDE", "1")
    check_guard(31, 30, "thing")


def test_nfold_examples():
    assert isomorphic(nfold(G, K2, 3), complete_graph(8))
    assert nfold(G, C5, 0).n == 1
    rx = ReactionInstance(parse_reactions("H2O -> H2O"))
    assert nfold(rx, Multiset({"H2O": 1}), 4) == Multiset({"H2O": 4})
    assert nfold(M, P45, 0) == Distribution.point_mass()


def test_annihilator_graph_examples():
    assert annihilator(G, C5, K3, 3).points == {0}
    assert annihilator(G, C5, K4, 3).points == {0}
    assert annihilator(G, C5, C5, 3).points == {0, 1, 2, 3}


def test_slice_pentagon_to_edge():
    s = slice_points(G, C5, K2, 3, 4)
    assert not s.unknown
    for p in [(0, 0), (1, 1), (2, 2), (3, 3)]:
        assert p in s
    # 2^m <= omega(C5^n) = 2, 5, 10
    assert {(n, m) for n, m in s.points if n > 0} == {(n, m) for n in (1, 2, 3) for m in range(4)
                                                       if 2 ** m <= (2, 5, 10)[n - 1]}


def test_slice_zero_is_full_box():
    s = slice_points(M, M.zero, M.zero, 2, 2)
    assert len(s.points) == 9


def test_slice_major_top_element():
    # in the conversion order the uniform bit is above the point mass
    s = slice_points(M, U2, Distribution.point_mass(), 2, 2, jobs=2)
    assert len(s.points) == 9


def test_slice_parallel_matches_sequential():
    a = slice_points(M, P45, U2, 4, 3)
    b = slice_points(M, P45, U2, 4, 3, jobs=3)
    assert a.points == b.points and a.refuted == b.refuted


def test_rate_bounds_pentagon():
    r = rate_bounds(G, C5, K2, 3, [log2_theta])
    assert r.lower == 1
    assert abs(r.upper - math.log2(math.sqrt(5))) < 1e-6


def test_rate_bounds_majorization():
    fs = [renyi_functional(t) for t in renyi_grid()]
    r = rate_bounds(M, P45, U2, 10, fs)
    assert abs(r.upper - math.log2(5 / 4)) < 1e-9
    assert r.lower <= r.upper


def test_rate_bounds_reflexive_contains_one():
    r = rate_bounds(M, P45, P45, 3, [renyi_functional(1)])
    assert r.lower <= 1 <= r.upper + 1e-12


def test_catalytic_examples():
    x = power(C5, 3)
    r = catalytic_leq(G, x, K11, [join(x, K11)])
    assert r.is_yes and r.witness[1].verify()
    assert catalytic_leq(G, K2, K2, []).witness[0].n == 1
    r = catalytic_leq(G, C5, K3, [K2])
    assert r.is_no and "candidate" in r.note


def test_manycopy_examples():
    r = manycopy_leq(G, power(C5, 3), K11, 2)
    assert r.is_yes and r.witness[0] == 2
    assert manycopy_leq(G, K3, K2, 3).witness[0] == 1
    assert manycopy_leq(G, C5, K3, 2).is_no


def test_regularized_examples():
    r = regularized_leq_witness(G, power(C5, 3), K11, K2, K1, F(1, 2), 2)
    assert r.is_yes and r.witness[0] == (2, 0)
    assert regularized_leq_witness(G, C5, C5, K2, K1, F(1, 2), 2).witness[0] == (1, 0)
    gp, gm = generating_pair()
    four = nfold(M, P45, 4)
    r = regularized_leq_witness(M, four, U2, gp, gm, F(1, 2), 3)
    assert r.is_yes
    with pytest.raises(ValueError):
        regularized_leq_witness(G, C5, C5, K1, K2, F(1, 2), 2)


def test_generating_pair_graphs():
    assert generating_pair_check(G, K2, K1, [C5, K4], 4) == [2, 2]
    assert generating_pair_check(G, K2, K1, [K1], 2) == [0]


def test_generating_pair_majorization():
    gp, gm = generating_pair()
    samples = [P45, Distribution.uniform(3), Distribution([F(1, 2), F(1, 3), F(1, 6)])]
    assert all(n is not None for n in generating_pair_check(M, gp, gm, samples, 5))


def test_slice_witnesses_compose():
    s = slice_points(G, C5, K2, 2, 2)
    pts = [p for p in s.points if p[0] > 0 and p[1] > 0]
    for a in pts:
        for b in pts:
            w = G.combine_witness(nfold(G, C5, a[0]), nfold(G, K2, a[1]), s.points[a],
                                  nfold(G, C5, b[0]), nfold(G, K2, b[1]), s.points[b])
            assert w.verify()


# ---- order axioms on random elements

graphs = st.builds(lambda n, seed: random_graph(n, 0.5, np.random.default_rng(seed)),
                   st.integers(1, 5), st.integers(0, 10**6))
dists = st.lists(st.integers(0, 5), min_size=1, max_size=4).filter(any).map(
    lambda w: Distribution([F(x, sum(w)) for x in w]))


@given(graphs, graphs, graphs)
def test_graph_order_axioms(x, y, z):
    assert G.geq(x, x).is_yes
    a, b = G.geq(x, y), G.geq(y, z)
    if a.is_yes and b.is_yes:
        assert G.geq(x, z).is_yes
    if a.is_yes:
        assert G.geq(G.combine(x, z), G.combine(y, z)).is_yes


@given(dists, dists, dists)
def test_major_order_axioms(x, y, z):
    assert M.geq(x, x).is_yes
    if M.geq(x, y).is_yes and M.geq(y, z).is_yes:
        assert M.geq(x, z).is_yes
    if M.geq(x, y).is_yes:
        assert M.geq(M.combine(x, z), M.combine(y, z)).is_yes


@given(graphs, graphs)
def test_tristate_finality(x, y):
    small = hom_search(y, x, Budget(nodes=3))
    big = hom_search(y, x, Budget(nodes=10**6))
    if not small.is_unknown:
        assert small.kind == big.kind


vec2 = st.tuples(st.integers(0, 6), st.integers(0, 6)).filter(lambda v: v[1] > 0)


@given(vec2, vec2)
def test_functional_bound_dominates_slopes(x, y):
    cone = ConeInstance(RationalCone.orthant(2))
    fs = [lambda v: F(v[0]), lambda v: F(v[1])]
    s = slice_points(cone, x, y, 3, 6)
    up = rate_bounds(cone, x, y, 3, fs).upper
    for (n, m) in s.points:
        if n:
            assert F(m, n) <= up


@given(vec2, vec2, st.integers(1, 3))
def test_slice_lower_bound_scaling(x, y, k):
    cone = ConeInstance(RationalCone.orthant(2))
    base = rate_bounds(cone, x, y, 6, m_cap=40).lower
    scaled_x = rate_bounds(cone, nfold(cone, x, k), y, 6 // k, m_cap=40).lower
    scaled_y = rate_bounds(cone, x, nfold(cone, y, k), 6, m_cap=40).lower
    # every slice point of k*x -> y is a slice point of x -> y with k times the copies
    assert scaled_x <= k * base
    assert k * scaled_y <= base
