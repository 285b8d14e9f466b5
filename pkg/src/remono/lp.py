"""Exact two-phase simplex over the rationals.

Bland's rule is used for both entering and leaving variables, so the method
terminates on degenerate problems and is fully deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import frac

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def _pivot(t: list[list[Fraction]], r: int, j: int) -> None:
    row = t[r]
    p = row[j]
    if p != 1:
        row = [x / p for x in row]
        t[r] = row
    nz = [k for k, x in enumerate(row) if x != 0]
    for i, other in enumerate(t):
        if i == r:
            continue
        f = other[j]
        if f == 0:
            continue
        for k in nz:
            other[k] -= f * row[k]


def _optimize(t, basis, allowed: int) -> bool:
    """Run simplex on tableau t whose last row is the reduced cost row.

    Columns >= allowed may not enter. Returns False when unbounded.
    """
    m = len(basis)
    obj = t[m]
    while True:
        enter = -1
        for j in range(allowed):
            if obj[j] < 0:
                enter = j
                break
        if enter < 0:
            return True
        best = None
        leave = -1
        for i in range(m):
            a = t[i][enter]
            if a > 0:
                ratio = t[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return False
        _pivot(t, leave, enter)
        basis[leave] = enter
        obj = t[m]


def simplex_standard(c: Sequence[Fraction], a: Sequence[Sequence[Fraction]],
                     b: Sequence[Fraction]) -> LPResult:
    """Minimize c.x subject to a x = b, x >= 0."""
    n = len(c)
    m = len(a)
    rows = []
    rhs = []
    for i in range(m):
        r = list(a[i])
        bi = b[i]
        if bi < 0:
            r = [-x for x in r]
            bi = -bi
        rows.append(r)
        rhs.append(bi)
    t = []
    for i in range(m):
        art = [ZERO] * m
        art[i] = ONE
        t.append(rows[i] + art + [rhs[i]])
    basis = [n + i for i in range(m)]
    # phase one: minimize the sum of artificials
    obj = [ZERO] * (n + m + 1)
    for i in range(m):
        for k in range(n):
            obj[k] -= t[i][k]
        obj[-1] -= t[i][-1]
    t.append(obj)
    _optimize(t, basis, n)
    if t[m][-1] != 0:
        return LPResult("infeasible")
    # drive artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(basis):
        if basis[i] >= n:
            col = next((j for j in range(n) if t[i][j] != 0), -1)
            if col < 0:
                del t[i]
                del basis[i]
                continue
            _pivot(t, i, col)
            basis[i] = col
        i += 1
    m = len(basis)
    t = [row[:n] + [row[-1]] for row in t[:m]]
    obj = [frac(x) for x in c] + [ZERO]
    for i in range(m):
        cb = obj[basis[i]]
        if cb != 0:
            obj = [x - cb * y for x, y in zip(obj, t[i])]
    t.append(obj)
    if not _optimize(t, basis, n):
        return LPResult("unbounded")
    x = [ZERO] * n
    for i in range(m):
        x[basis[i]] = t[i][-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), ZERO)
    return LPResult("optimal", tuple(x), value)


def linprog(c: Sequence, a_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
            a_eq: Sequence[Sequence] = (), b_eq: Sequence = (), *,
            free: Iterable[int] | str = (), maximize: bool = False) -> LPResult:
    """Optimize c.x subject to a_ub x <= b_ub, a_eq x = b_eq.

    Variables are nonnegative unless listed in ``free`` (or free="all").
    The returned value is in the caller's sense (maximum when maximize=True).
    """
    n = len(c)
    free_set = set(range(n)) if free == "all" else set(free)
    cols = []  # (original index, sign)
    for j in range(n):
        cols.append((j, 1))
        if j in free_set:
            cols.append((j, -1))
    n_ub = len(a_ub)
    sign = -1 if maximize else 1
    cost = [sign * frac(c[j]) * s for j, s in cols] + [ZERO] * n_ub
    rows = []
    rhs = []
    for i, r in enumerate(a_ub):
        fr = [frac(x) for x in r]
        row = [fr[j] * s for j, s in cols] + [ZERO] * n_ub
        row[len(cols) + i] = ONE
        rows.append(row)
        rhs.append(frac(b_ub[i]))
    for r, bi in zip(a_eq, b_eq):
        fr = [frac(x) for x in r]
        rows.append([fr[j] * s for j, s in cols] + [ZERO] * n_ub)
        rhs.append(frac(bi))
    res = simplex_standard(cost, rows, rhs)
    if res.status != "optimal":
        return res
    x = [ZERO] * n
    for k, (j, s) in enumerate(cols):
        x[j] += s * res.x[k]
    value = sum((frac(ci) * xi for ci, xi in zip(c, x)), ZERO)
    return LPResult("optimal", tuple(x), value)


def feasible_point(a_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
                   a_eq: Sequence[Sequence] = (), b_eq: Sequence = (), *,
                   nvars: int, free: Iterable[int] | str = ()) -> tuple[Fraction, ...] | None:
    res = linprog([0] * nvars, a_ub, b_ub, a_eq, b_eq, free=free)
    return res.x if res.status == "optimal" else None
