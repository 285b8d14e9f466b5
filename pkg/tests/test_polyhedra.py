from fractions import Fraction as F
from itertools import combinations

from hypothesis import assume, given, strategies as st

from remono.exact import dot, normalize_sign, nullspace, primitive, rank
from remono.polyhedra import PolyCone, double_description

rows3 = st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=6)


def brute_force_rays(ineqs, d):
    """Extreme rays of a pointed cone: 1-dim solutions of d-1 tight rows."""
    out = set()
    for sub in combinations(ineqs, d - 1):
        if rank(sub, d) != d - 1:
            continue
        (v,) = nullspace(sub, d)
        for s in (1, -1):
            w = tuple(s * x for x in v)
            if all(dot(a, w) >= 0 for a in ineqs):
                out.add(primitive(w))
    return out


@given(rows3)
def test_dd_matches_brute_force(ineqs):
    ineqs = [tuple(F(x) for x in r) for r in ineqs if any(r)]
    assume(ineqs)
    rays, lin = double_description(ineqs, [], 3)
    for r in rays:
        assert all(dot(a, r) >= 0 for a in ineqs)
    for l in lin:
        assert all(dot(a, l) == 0 for a in ineqs)
    if not lin:
        assert set(rays) == brute_force_rays(ineqs, 3)


@given(rows3)
def test_generators_round_trip(gens):
    gens = [tuple(F(x) for x in g) for g in gens if any(g)]
    assume(gens)
    p = PolyCone.from_generators(3, gens)
    for g in gens:
        assert p.contains(g)
    q = PolyCone.from_inequalities(3, p.inequalities, p.equalities)
    m = p.minimal_generators()
    assert sorted(q.rays) == sorted(m.rays)
    assert len(q.lineality) == len(m.lineality)


def test_orthant_dual_is_orthant():
    p = PolyCone.from_inequalities(2, [(1, 0), (0, 1)])
    assert sorted(p.rays) == [(0, 1), (1, 0)]
    assert p.dual_rays() == [(0, 1), (1, 0)]
    assert p.is_pointed() and p.is_full()


def test_halfplane_lineality():
    p = PolyCone.from_inequalities(2, [(1, 0)])
    assert p.rays == [(1, 0)]
    assert [normalize_sign(l) for l in p.lineality] == [(0, 1)]
    assert not p.is_pointed()


def test_whole_space_and_origin():
    full = PolyCone.from_inequalities(3, [])
    assert full.dimension() == 3 and len(full.lineality) == 3
    origin = PolyCone.from_generators(2, [])
    assert origin.contains((0, 0)) and not origin.contains((1, 0))
