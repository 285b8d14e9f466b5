"""Turning an n-copy homomorphism into a catalytic one.

Given a homomorphism n*y -> n*x (n-fold disjunctive powers), the catalyst

    z = join over k = 1..n of ((k-1)*x + (n-k)*y)

satisfies y + z -> x + z. The map below makes this explicit. A vertex of
y + z is (v, k, c) with v in y and c = (x_1..x_{k-1}, y_1..y_{n-k}) in the
k-th part of z.

* k = 1: apply the power map to (v, y_1, ..., y_{n-1}) to get (a_1..a_n) and
  send the vertex to (a_1, part n, (a_2..a_n)).
* k >= 2: send it to (x_1, part k-1, (x_2..x_{k-1}, v, y_1..y_{n-k})).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph, complete_graph, disjunctive_product, join, power, verify_hom


def catalyst_part(x: Graph, y: Graph, n: int, k: int) -> Graph:
    return disjunctive_product(power(x, k - 1), power(y, n - k))


def catalyst(x: Graph, y: Graph, n: int) -> Graph:
    if n < 1:
        raise ValueError("n must be at least 1")
    if n == 1:
        return complete_graph(1)
    return join(*[catalyst_part(x, y, n, k) for k in range(1, n + 1)])


def _digits(idx: np.ndarray, base: int, count: int) -> list[np.ndarray]:
    out = []
    for _ in range(count):
        out.append(idx % base)
        idx = idx // base
    return out[::-1]


def _number(digits: list[np.ndarray], base: int, length: int) -> np.ndarray:
    out = np.zeros(length, dtype=np.int64)
    for d in digits:
        out = out * base + d
    return out


@dataclass
class CatalystResult:
    catalyst: Graph
    source: Graph  # y + z
    target: Graph  # x + z
    mapping: np.ndarray
    verified: bool


def distribute_catalyst(x: Graph, y: Graph, n: int, power_map) -> CatalystResult:
    """Build the catalyst z and a homomorphism y + z -> x + z.

    ``power_map`` is a homomorphism from the n-fold power of y to the n-fold
    power of x, as an index array (vertex numbering of ``power``).
    """
    f = np.asarray(power_map, dtype=np.int64)
    nx, ny = x.n, y.n
    if f.shape != (ny ** n,):
        raise ValueError("power map has the wrong length")
    z = catalyst(x, y, n)
    src = disjunctive_product(y, z)
    tgt = disjunctive_product(x, z)
    if n == 1:
        mapping = f.copy()
    else:
        sizes = [nx ** (k - 1) * ny ** (n - k) for k in range(1, n + 1)]
        offsets = np.concatenate([[0], np.cumsum(sizes)])
        mapping = np.full(src.n, -1, dtype=np.int64)
        for k in range(1, n + 1):
            size = sizes[k - 1]
            v = np.repeat(np.arange(ny, dtype=np.int64), size)
            c = np.tile(np.arange(size, dtype=np.int64), ny)
            m = len(v)
            ys = _digits(c, ny, n - k)
            xs = _digits(c // ny ** (n - k), nx, k - 1)
            if k == 1:
                a = _digits(f[_number([v] + ys, ny, m)], nx, n)
                head = a[0]
                part_index = n
                rest = _number(a[1:], nx, m)
            else:
                head = xs[0]
                part_index = k - 1
                rest = _number(xs[1:], nx, m) * ny ** (n - k + 1) + _number([v] + ys, ny, m)
            zt = offsets[part_index - 1] + rest
            mapping[v * z.n + offsets[k - 1] + c] = head * z.n + zt
    ok = verify_hom(src, tgt, mapping)
    return CatalystResult(z, src, tgt, mapping, ok)
