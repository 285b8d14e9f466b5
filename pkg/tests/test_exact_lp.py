from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from remono.exact import fmt, frac, nullspace, primitive, rank, rref, solve_unique
from remono.lp import linprog

small = st.integers(-4, 4)


def test_frac_parsing():
    assert frac("3/4") == F(3, 4)
    assert frac("0.25") == F(1, 4)
    assert frac(2) == F(2)
    with pytest.raises(TypeError):
        frac(0.5)


def test_fmt_always_has_denominator():
    assert fmt(F(3)) == "3/1"
    assert fmt(F(-2, 6)) == "-1/3"


def test_primitive():
    assert primitive((F(2), F(-4), F(6))) == (1, -2, 3)
    assert primitive((F(1, 2), F(1, 3))) == (3, 2)


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=4))
def test_nullspace_rank_nullity(rows):
    basis = nullspace(rows, 4)
    assert rank(rows, 4) + len(basis) == 4
    for v in basis:
        assert all(sum(F(a) * b for a, b in zip(r, v)) == 0 for r in rows)


def test_rref_pivots():
    m, piv = rref([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert piv == [0, 1]


def test_solve_unique():
    assert solve_unique([[1, 1], [1, -1]], [3, 1]) == (2, 1)


def test_lp_textbook():
    # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18
    r = linprog([3, 5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18], maximize=True)
    assert r.status == "optimal"
    assert r.value == 36 and r.x == (2, 6)


def test_lp_infeasible_and_unbounded():
    assert linprog([1], [[1]], [-1]).status == "infeasible"
    assert linprog([-1], [[-1]], [0]).status == "unbounded"
    assert linprog([1], (), (), free="all").status == "unbounded"


def test_lp_free_variables():
    r = linprog([1, 1], (), (), [[1, -1]], [-3], free=[0])
    assert r.status == "optimal" and r.value == -3


@given(st.lists(st.lists(st.integers(0, 5), min_size=3, max_size=3), min_size=1, max_size=4),
       st.lists(st.integers(1, 6), min_size=3, max_size=3))
def test_strong_duality(a, c):
    # max c.x, A x <= b, x >= 0 with b > 0; dual: min b.y, A^T y >= c, y >= 0
    b = [F(i + 2) for i in range(len(a))]
    a = [row[:] for row in a]
    a.append([1, 1, 1])  # keeps the primal bounded
    b.append(F(10))
    p = linprog(c, a, b, maximize=True)
    at = [[-a[i][j] for i in range(len(a))] for j in range(3)]
    d = linprog(b, at, [-x for x in c])
    assert p.status == d.status == "optimal"
    assert p.value == d.value
