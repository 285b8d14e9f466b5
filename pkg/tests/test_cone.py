import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from remono.core import INF
from remono.cone import (Cell, ConeInstance, RationalCone, archimedeanize, closure,
                         decompose_functional, domination_certificate, dual_rays,
                         hahn_banach_extend, interior_point_check, irrational_slope_demo,
                         is_numerical, order_unit_check, pointed_quotient, rate_region_cone,
                         reciprocal_rate_check, rmax, separate)
from remono.exact import dot, in_span
from remono.polyhedra import PolyCone

NONARCH = RationalCone(2, [Cell(gt=((1, 0),)), Cell(ge=((1, 0), (-1, 0), (0, 1), (0, -1)))])
LEX = RationalCone(2, [Cell(gt=((1, 0),)), Cell(ge=((1, 0), (-1, 0), (0, 1)))])
ORTHANT = RationalCone.orthant(2)
WEDGE = RationalCone.from_generators(2, [(1, 0), (1, 1)])
HALF = RationalCone(2, [Cell(ge=((1, 0),))])


def test_contains_examples():
    assert NONARCH.contains((1, -5))
    assert NONARCH.contains((0, 0))
    assert not NONARCH.contains((0, 1))


def test_invalid_cone_rejected():
    with pytest.raises(ValueError):
        RationalCone(2, [Cell(gt=((1, 0),)), Cell(gt=((0, 1),)), Cell(ge=((1, 0), (-1, 0), (0, 1), (0, -1)))])
    with pytest.raises(ValueError):
        RationalCone(1, [Cell(gt=((1,),))])  # origin missing


def test_archimedeanize_examples():
    a = closure(NONARCH)
    assert a.inequalities == [(1, 0)] and not a.equalities
    assert closure(LEX).inequalities == [(1, 0)]
    again = closure(archimedeanize(NONARCH))
    assert sorted(again.rays) == sorted(a.rays)
    for v in [(1, -5), (0, 0), (3, 2)]:
        assert a.contains(v)


def test_pointed_quotient_examples():
    q = pointed_quotient(NONARCH)
    assert q.dim == 1 and q.cone.rays == [(1,)]
    assert pointed_quotient(ORTHANT).dim == 2
    assert pointed_quotient(RationalCone(2, [Cell()])).dim == 0


def test_dual_ray_examples():
    assert dual_rays(ORTHANT) == [(0, 1), (1, 0)]
    assert dual_rays(NONARCH) == [(1, 0)]
    assert sorted(dual_rays(WEDGE)) == [(0, 1), (1, -1)]


def test_separate_examples():
    assert separate(ORTHANT, (-1, 1)) == (1, 0)
    assert separate(NONARCH, (0, 1)) is None
    assert separate(WEDGE, (0, -1)) == (0, 1)


def test_rate_examples():
    assert rmax(ORTHANT, (2, 1), (1, 1)) == 1
    assert rmax(ORTHANT, (1, 0), (0, 1)) == 0
    assert rmax(WEDGE, (2, 1), (2, 1)) == 1
    assert rmax(HALF, (1, 0), (0, 1)) == INF
    with pytest.raises(ValueError):
        rate_region_cone(ORTHANT, (-1, 0), (1, 1))


def test_numerical_examples():
    rep = is_numerical(HALF)
    assert rep.numerical and rep.embedding == (1, 0)
    for e, val, inf in rep.evidence:
        assert val == inf
    assert not is_numerical(ORTHANT).numerical
    assert is_numerical(RationalCone.orthant(1)).numerical


def test_reciprocal_examples():
    rows = reciprocal_rate_check(HALF, [(1, 3), (2, -1), (5, 0)])
    assert rows and all(r["product"] == 1 for r in rows)
    rows = reciprocal_rate_check(ORTHANT, [(2, 1), (1, 1)])
    prods = {(r["x"], r["y"]): r["product"] for r in rows}
    assert prods[((2, 1), (1, 1))] == F(1, 2)
    assert prods[((2, 1), (2, 1))] == 1 and all(r["ok"] for r in rows)


def test_extend_examples():
    forms = [(1, 0), (0, 1)]
    f = hahn_banach_extend(forms, [(1, 1)], [1])
    assert f[0] + f[1] == 1 and f[0] <= 1 and f[1] <= 1
    assert domination_certificate(forms, f) is not None
    assert hahn_banach_extend(forms, [(1, 0), (0, 1)], [F(1, 3), F(2, 3)]) == (F(1, 3), F(2, 3))
    with pytest.raises(ValueError):
        hahn_banach_extend(forms, [(1, 1)], [3])


def test_decompose_examples():
    parts = dict((ray, c) for c, ray in decompose_functional(ORTHANT, (3, 2)))
    assert parts == {(1, 0): 3, (0, 1): 2}
    parts = dict((ray, c) for c, ray in decompose_functional(WEDGE, (1, 0)))
    assert parts == {(1, -1): 1, (0, 1): 1}
    assert decompose_functional(WEDGE, (0, 1)) == [(1, (0, 1))]
    with pytest.raises(ValueError):
        decompose_functional(ORTHANT, (-1, 0))


def test_irrational_demo_degrades():
    rows = irrational_slope_demo(8)
    heights = [r["height"] for r in rows]
    assert heights == sorted(heights) and heights[-1] > 100
    limit = 1 / (2 + math.sqrt(2))
    errs = [abs(float(r["rmax"]) - limit) for r in rows]
    assert errs[-1] < errs[0] and errs[-1] < 1e-4
    assert all(r["rmax"] != limit for r in rows)


# ---- properties on random pointed cones

def _cone(seed, d):
    rng = random.Random(seed)
    gens = []
    for _ in range(rng.randint(d, d + 3)):
        gens.append(tuple(F(rng.randint(0, 4)) for _ in range(d)))
    gens = [g for g in gens if any(g)] or [tuple(F(1) for _ in range(d))]
    return PolyCone.from_generators(d, gens), gens, rng


def _point(gens, rng):
    v = [F(0)] * len(gens[0])
    for g in gens:
        c = F(rng.randint(0, 3), rng.randint(1, 3))
        v = [a + c * b for a, b in zip(v, g)]
    return tuple(v)


cones = st.tuples(st.integers(0, 10**6), st.integers(1, 4))


@given(cones)
def test_farkas_soundness(args):
    p, gens, rng = _cone(*args)
    x = tuple(F(rng.randint(-3, 3)) for _ in range(p.d))
    f = separate(p, x)
    if f is None:
        assert p.contains(x)
    else:
        assert dot(f, x) < 0 and all(dot(f, g) >= 0 for g in gens)


@given(cones)
def test_carnot_and_dichotomy(args):
    p, gens, rng = _cone(*args)
    x, y, z = (_point(gens, rng) for _ in range(3))
    a, b, c = rmax(p, x, y), rmax(p, y, z), rmax(p, x, z)
    if not (a == 0 and b == INF or a == INF and b == 0):
        assert c >= a * b
    assert rmax(p, x, x) in (1, INF)


@given(cones, st.integers(1, 4))
def test_scaling_laws(args, k):
    p, gens, rng = _cone(*args)
    x, y = _point(gens, rng), _point(gens, rng)
    r = rmax(p, x, y)
    kx, ky = tuple(k * v for v in x), tuple(k * v for v in y)
    assert rmax(p, kx, y) == k * r
    assert rmax(p, x, ky) == r / k if r != INF else rmax(p, x, ky) == INF


@given(cones)
def test_archimedeanize_idempotent_and_contains_input(args):
    p, gens, rng = _cone(*args)
    c = RationalCone.from_poly(p)
    a = closure(archimedeanize(c))
    assert sorted(a.minimal_generators().rays) == sorted(p.minimal_generators().rays)
    for g in gens:
        assert a.contains(g)


@given(st.integers(0, 10**6), st.integers(2, 4))
def test_order_unit_equivalence(seed, d):
    p, gens, rng = _cone(seed, d)
    if not p.is_full() or not p.is_pointed():
        return
    g = _point(gens, rng)
    vs = [tuple(F(rng.randint(-5, 5)) for _ in range(d)) for _ in range(6)]
    basis = [tuple(F(s * int(i == j)) for j in range(d)) for i in range(d) for s in (1, -1)]
    assert interior_point_check(p, g) == order_unit_check(p, g, vs + basis)


@given(st.integers(0, 10**6), st.integers(2, 4))
def test_hahn_banach_property(seed, d):
    rng = random.Random(seed)
    forms = [tuple(F(rng.randint(-3, 3)) for _ in range(d)) for _ in range(rng.randint(1, 4))]
    k = rng.randint(0, d - 1)
    basis = [tuple(F(rng.randint(-2, 2)) for _ in range(d)) for _ in range(k)]
    from remono.exact import rank
    if basis and rank(basis, d) < len(basis):
        return
    # seed: a convex combination of the forms restricted to the subspace is p-dominated
    w = [F(rng.randint(0, 3)) for _ in forms]
    if not any(w):
        w[0] = F(1)
    s = sum(w)
    g = tuple(sum(wi * a[i] for wi, a in zip(w, forms)) / s for i in range(d))
    values = [dot(g, b) for b in basis]
    f = hahn_banach_extend(forms, basis, values)
    assert all(dot(f, b) == v for b, v in zip(basis, values))
    assert domination_certificate(forms, f) is not None


def test_cone_instance():
    inst = ConeInstance(NONARCH)
    assert inst.geq((3, 1), (1, 9)).is_yes
    assert inst.geq((0, 1), (0, 0)).is_no
