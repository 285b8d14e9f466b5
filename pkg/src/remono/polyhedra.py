"""Exact double description for polyhedral cones.

A cone is described either by inequalities {v : a.v >= 0, e.v = 0} or by
generators cone(rays) + span(lineality). Conversions in both directions go
through the same incremental algorithm; the generator-to-inequality direction
works on the dual cone.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exact import Vector, dot, nullspace, normalize_sign, primitive, rank, vec


def _unit(i: int, d: int) -> Vector:
    return tuple(Fraction(int(i == j)) for j in range(d))


def double_description(ineqs: Sequence[Sequence], eqs: Sequence[Sequence], d: int
                       ) -> tuple[list[Vector], list[Vector]]:
    """Minimal generators of {v : a.v >= 0 for a in ineqs, e.v = 0 for e in eqs}.

    Returns (extreme rays, lineality basis). Rays are primitive integer
    vectors; they are extreme modulo the lineality space.
    """
    eqs = [vec(e) for e in eqs]
    lin = nullspace(eqs, d) if eqs else [_unit(i, d) for i in range(d)]
    lin = [primitive(v) for v in lin]
    rays: list[Vector] = []
    done: list[Vector] = list(eqs)  # rows processed so far
    for a in (vec(r) for r in ineqs):
        vals = [dot(a, l) for l in lin]
        k = next((i for i, x in enumerate(vals) if x != 0), -1)
        if k >= 0:
            l0 = lin[k]
            a0 = vals[k]
            if a0 < 0:
                l0 = tuple(-x for x in l0)
                a0 = -a0
            new_lin = []
            for i, l in enumerate(lin):
                if i == k:
                    continue
                c = vals[i] / a0
                new_lin.append(primitive(tuple(x - c * y for x, y in zip(l, l0))))
            rays = [primitive(tuple(x - (dot(a, r) / a0) * y for x, y in zip(r, l0))) for r in rays]
            rays.append(primitive(l0))
            lin = new_lin
            done.append(a)
            continue
        pos, zero, neg = [], [], []
        for r in rays:
            s = dot(a, r)
            if s > 0:
                pos.append((r, s))
            elif s == 0:
                zero.append(r)
            else:
                neg.append((r, s))
        new_rays = [r for r, _ in pos] + zero
        if neg and pos:
            target = d - len(lin) - 2
            # tight sets relative to the rows processed so far
            tsets = {}
            for r, _ in pos + neg:
                tsets[r] = frozenset(i for i, row in enumerate(done) if dot(row, r) == 0)
            for p, sp in pos:
                for q, sq in neg:
                    common = tsets[p] & tsets[q]
                    if len(common) < target:
                        continue
                    if rank([done[i] for i in common], d) != target:
                        continue
                    new_rays.append(primitive(tuple(sp * y - sq * x for x, y in zip(p, q))))
        rays = new_rays
        done.append(a)
    return _dedupe(rays), [normalize_sign(l) for l in lin]


def _dedupe(rays: list[Vector]) -> list[Vector]:
    seen = set()
    out = []
    for r in rays:
        if r not in seen and any(x != 0 for x in r):
            seen.add(r)
            out.append(r)
    return out


def facets_of(rays: Sequence[Sequence], lineality: Sequence[Sequence], d: int
              ) -> tuple[list[Vector], list[Vector]]:
    """Inequality description of cone(rays) + span(lineality).

    Returns (inequalities a with a.v >= 0, equalities e with e.v = 0).
    """
    ineqs = [vec(r) for r in rays]
    eqs = [vec(l) for l in lineality]
    dual_rays, dual_lin = double_description(ineqs, eqs, d)
    return dual_rays, dual_lin


class PolyCone:
    """Closed polyhedral cone in Q^d with both descriptions available lazily."""

    def __init__(self, d: int, ineqs=(), eqs=(), *, rays=None, lineality=None):
        self.d = d
        self._ineqs = [vec(a) for a in ineqs] if ineqs is not None else None
        self._eqs = [vec(e) for e in eqs] if eqs is not None else None
        self._rays = [vec(r) for r in rays] if rays is not None else None
        self._lin = [vec(l) for l in lineality] if lineality is not None else None
        if self._rays is not None and self._lin is None:
            self._lin = []

    @classmethod
    def from_inequalities(cls, d: int, ineqs=(), eqs=()) -> "PolyCone":
        return cls(d, ineqs, eqs)

    @classmethod
    def from_generators(cls, d: int, rays=(), lineality=()) -> "PolyCone":
        c = cls(d, None, None, rays=[r for r in rays if any(x != 0 for x in vec(r))],
                lineality=list(lineality))
        return c

    def _ensure_generators(self):
        if self._rays is None:
            self._rays, self._lin = double_description(self._ineqs, self._eqs, self.d)

    def _ensure_inequalities(self):
        if self._ineqs is None:
            self._ensure_generators()
            # minimal H-description via the dual cone's generators
            self._ineqs, self._eqs = facets_of(self._rays, self._lin, self.d)

    @property
    def rays(self) -> list[Vector]:
        self._ensure_generators()
        return list(self._rays)

    @property
    def lineality(self) -> list[Vector]:
        self._ensure_generators()
        return list(self._lin)

    @property
    def inequalities(self) -> list[Vector]:
        self._ensure_inequalities()
        return list(self._ineqs)

    @property
    def equalities(self) -> list[Vector]:
        self._ensure_inequalities()
        return list(self._eqs)

    def minimal_generators(self) -> "PolyCone":
        """Generators with redundant rays removed (via a round trip)."""
        self._ensure_inequalities()
        rays, lin = double_description(self._ineqs, self._eqs, self.d)
        return PolyCone.from_generators(self.d, rays, lin)

    def contains(self, v: Sequence) -> bool:
        v = vec(v)
        if self._ineqs is not None:
            return all(dot(a, v) >= 0 for a in self._ineqs) and all(dot(e, v) == 0 for e in self._eqs)
        self._ensure_inequalities()
        return self.contains(v)

    def dual(self) -> "PolyCone":
        """{f : f.v >= 0 for all v in the cone}."""
        self._ensure_generators()
        return PolyCone(self.d, self._rays, self._lin)

    def dimension(self) -> int:
        self._ensure_generators()
        gens = self._rays + self._lin
        return rank(gens, self.d) if gens else 0

    def is_pointed(self) -> bool:
        return not self.lineality

    def is_full(self) -> bool:
        return self.dimension() == self.d

    def dual_rays(self) -> list[Vector]:
        """Extreme rays of the dual, normalized as primitive vectors."""
        return sorted(self.dual().rays)

    def __repr__(self) -> str:
        self._ensure_generators()
        return f"PolyCone(d={self.d}, rays={len(self._rays)}, lineality={len(self._lin)})"
