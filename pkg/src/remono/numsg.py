"""Submonoids of the natural numbers and numerical semigroups."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable


def _gcd_all(values: Iterable[int]) -> int:
    g = 0
    for v in values:
        g = gcd(g, v)
    return g


def _minimal_generators(gens: Iterable[int]) -> tuple[int, ...]:
    """Drop generators that are sums of smaller ones."""
    gens = sorted(set(gens))
    if not gens:
        return ()
    top = gens[-1]
    member = [False] * (top + 1)
    member[0] = True
    kept: list[int] = []
    for g in gens:
        if member[g]:
            continue
        kept.append(g)
        for n in range(g, top + 1):
            if member[n - g]:
                member[n] = True
    return tuple(kept)


@dataclass(frozen=True)
class NumSubmonoid:
    generators: tuple[int, ...]
    d: int
    normalized: tuple[int, ...]  # minimal generators of S/d

    def contains(self, n: int) -> bool:
        return membership(self, n)


def normalize(generators: Iterable[int]) -> NumSubmonoid:
    gens = tuple(sorted(set(int(g) for g in generators)))
    if not gens:
        raise ValueError("empty generator set")
    if any(g <= 0 for g in gens):
        raise ValueError("generators must be positive")
    d = _gcd_all(gens)
    return NumSubmonoid(_minimal_generators(gens), d, _minimal_generators(g // d for g in gens))


def denormalize(s: NumSubmonoid) -> tuple[int, ...]:
    return tuple(s.d * g for g in s.normalized)


def _member_table(gens: tuple[int, ...], limit: int) -> list[bool]:
    member = [False] * (limit + 1)
    member[0] = True
    for n in range(1, limit + 1):
        member[n] = any(g <= n and member[n - g] for g in gens)
    return member


def gaps(s) -> tuple[frozenset, int]:
    """(N minus S', Frobenius number) for a gcd-1 generator set.

    The table is grown until min(S') consecutive members appear; past that
    point every integer is a member. A cap of 10 times the product of the two
    smallest generators bounds the work.
    """
    gens = s.normalized if isinstance(s, NumSubmonoid) else _minimal_generators(s)
    if _gcd_all(gens) != 1:
        raise ValueError("generators must have gcd 1")
    a = gens[0]
    if a == 1:
        return frozenset(), -1
    cap = 10 * a * (gens[1] if len(gens) > 1 else a)
    member = _member_table(gens, cap)
    run = 0
    for n in range(cap + 1):
        run = run + 1 if member[n] else 0
        if run == a:
            gap_set = frozenset(k for k in range(n + 1) if not member[k])
            return gap_set, max(gap_set) if gap_set else -1
    raise RuntimeError("gap computation exceeded its cap")


def membership(s, n: int) -> bool:
    """Exact decision whether n lies in the submonoid (NumSubmonoid or generators)."""
    if n < 0:
        return False
    if n == 0:
        return True
    if not isinstance(s, NumSubmonoid):
        s = normalize(s)
    if n % s.d:
        return False
    m = n // s.d
    return _member_table(s.normalized, m)[m]


@dataclass
class AnnihilatorReport:
    window: int
    closed: bool
    violations: list = field(default_factory=list)
    generators: tuple[int, ...] = ()
    d: int = 0
    normalized: tuple[int, ...] = ()
    gaps: frozenset | None = None
    frobenius: int | None = None

    @property
    def trivial(self) -> bool:
        return not self.generators


def analyze_annihilator(points: Iterable[int], window: int | None = None) -> AnnihilatorReport:
    """Structure of a truncated submonoid {n <= window : ...} of N.

    Checks closure under addition inside the window and infers the minimal
    generators visible in it.
    """
    pts = sorted(set(int(p) for p in points))
    if window is None:
        window = pts[-1] if pts else 0
    pset = set(pts)
    violations = []
    if 0 not in pset:
        violations.append((0, 0))
    for i, a in enumerate(pts):
        for b in pts[i:]:
            if a + b <= window and a + b not in pset:
                violations.append((a, b))
    gens = _minimal_generators(p for p in pts if p > 0)
    rep = AnnihilatorReport(window, not violations, violations, gens)
    if gens:
        s = normalize(gens)
        rep.d, rep.normalized = s.d, s.normalized
        rep.gaps, rep.frobenius = gaps(s)
    return rep
