"""Exact rational linear algebra helpers shared by the LP and cone code."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = tuple[Fraction, ...]


def frac(value) -> Fraction:
    """Parse an int, Fraction or "p/q" string into a Fraction.

    Floats are rejected on purpose: every value that reaches the exact code
    must already be rational.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational")
        if any(c in text for c in "eE.") and "/" not in text:
            # allow exact decimals such as "0.25"
            return Fraction(text)
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def vec(values: Iterable) -> Vector:
    return tuple(frac(v) for v in values)


def fmt(q: Fraction) -> str:
    """Serialize a rational as a "p/q" string (q = 1 included)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def add(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: Sequence) -> Vector:
    return tuple(c * x for x in a)


def is_zero(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def primitive(a: Sequence) -> Vector:
    """Scale to coprime integers, keeping the direction (positive multiple)."""
    a = vec(a)
    if is_zero(a):
        return a
    den = 1
    for x in a:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in a]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(Fraction(x // g) for x in ints)


def normalize_sign(a: Sequence) -> Vector:
    """Primitive integer vector whose first nonzero entry is positive."""
    p = primitive(a)
    for x in p:
        if x != 0:
            return p if x > 0 else tuple(-y for y in p)
    return p


def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form. Returns (nonzero rows, pivot columns)."""
    m = [list(vec(r)) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        if p != 1:
            m[r] = [x / p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Basis of {v : row . v = 0 for every row}."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(tuple(v))
    return basis


def row_space_basis(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    if not rows:
        return []
    return [tuple(r) for r in rref(rows, ncols)[0]]


def in_span(v: Sequence, basis: Sequence[Sequence]) -> bool:
    if is_zero(v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [v], len(v)) == rank(basis, len(v))


def solve_unique(a_rows: Sequence[Sequence], b: Sequence) -> Vector:
    """Solve a square nonsingular system exactly."""
    n = len(a_rows)
    aug = [list(vec(r)) + [frac(bi)] for r, bi in zip(a_rows, b)]
    red, pivots = rref(aug, n + 1)
    if pivots != list(range(n)):
        raise ValueError("system is singular")
    return tuple(row[n] for row in red)
