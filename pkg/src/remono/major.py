"""Finite probability distributions under majorization.

``major_leq(P, Q)`` is the plain majorization test: every prefix sum of the
nonincreasingly sorted P dominates the corresponding prefix sum of Q.

The monoid instance orders distributions by convertibility: x >= y when y
majorizes x (a flatter distribution can be turned into a more peaked one).
In that direction the Renyi entropies are monotone and additive under the
product, which is what the rate bounds below rely on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Budget, MonoidInstance, TriState
from .exact import frac

GRID_POINTS = 64
T_MIN_EXP, T_MAX_EXP = -10, 10


class Distribution:
    """Probability vector with exact rational entries, kept sorted nonincreasing."""

    __slots__ = ("probs",)

    def __init__(self, probs: Sequence):
        p = [frac(x) for x in probs]
        if not p:
            raise ValueError("empty distribution")
        if any(x < 0 for x in p):
            raise ValueError("negative probability")
        if sum(p) != 1:
            raise ValueError(f"probabilities sum to {sum(p)}, not 1")
        self.probs = tuple(sorted(p, reverse=True))

    @classmethod
    def uniform(cls, k: int) -> "Distribution":
        return cls([Fraction(1, k)] * k)

    @classmethod
    def point_mass(cls) -> "Distribution":
        return cls([1])

    @property
    def support(self) -> tuple[Fraction, ...]:
        return tuple(x for x in self.probs if x > 0)

    def __len__(self) -> int:
        return len(self.probs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Distribution) and self.support == other.support

    def __hash__(self):
        return hash(self.support)

    def __repr__(self) -> str:
        return "Distribution(" + ", ".join(str(x) for x in self.probs) + ")"


def _dist(p) -> Distribution:
    return p if isinstance(p, Distribution) else Distribution(p)


def major_leq(p, q) -> bool:
    """True iff every prefix sum of p dominates that of q (zero padded)."""
    p, q = _dist(p).probs, _dist(q).probs
    n = max(len(p), len(q))
    sp = sq = Fraction(0)
    for i in range(n):
        sp += p[i] if i < len(p) else 0
        sq += q[i] if i < len(q) else 0
        if sp < sq:
            return False
    return True


def product(p, q) -> Distribution:
    p, q = _dist(p), _dist(q)
    return Distribution([a * b for a in p.probs for b in q.probs])


def renyi(p, t) -> float:
    """Renyi entropy H_t in bits; t >= 0 rational, or math.inf."""
    probs = [x for x in _dist(p).probs if x > 0]
    if t == math.inf or t == "inf":
        return -math.log2(float(probs[0]))
    t = Fraction(t) if not isinstance(t, float) else t
    if t < 0:
        raise ValueError("Renyi order must be nonnegative")
    if t == 0:
        return math.log2(len(probs))
    if t == 1:
        return -sum(float(x) * math.log2(float(x)) for x in probs)
    tf = float(t)
    logs = [math.log2(float(x)) for x in probs]
    top = logs[0]
    s = sum(2.0 ** (tf * (lx - top)) for lx in logs)
    return (tf * top + math.log2(s)) / (1 - tf)


def renyi_grid(points: int = GRID_POINTS) -> list:
    """Log-spaced orders in [2^-10, 2^10] plus 0, 1 and infinity."""
    step = (T_MAX_EXP - T_MIN_EXP) / (points - 1)
    ts = [2.0 ** (T_MIN_EXP + i * step) for i in range(points)]
    return sorted(set(ts) | {0.0, 1.0}) + [math.inf]


@dataclass(frozen=True)
class RenyiBound:
    value: float
    t: float
    grid_points: int
    refined: bool

    def __float__(self) -> float:
        return self.value


def _ratio(p, q, t) -> float:
    hq = renyi(q, t)
    if hq <= 0:
        return math.inf
    return renyi(p, t) / hq


def rate_upper_renyi(p, q, grid: int = GRID_POINTS) -> RenyiBound:
    """min over t of H_t(p)/H_t(q): an upper bound on the rate from p to q.

    Evaluated on the order grid, then refined by golden-section search in
    log t around the best interior grid point. Every evaluated ratio is a
    valid bound, so the refinement can only tighten it.
    """
    p, q = _dist(p), _dist(q)
    ts = renyi_grid(grid)
    vals = [_ratio(p, q, t) for t in ts]
    k = min(range(len(ts)), key=lambda i: (vals[i], i))
    best, best_t = vals[k], ts[k]
    refined = False
    if 0 < k < len(ts) - 1 and ts[k - 1] > 0 and ts[k + 1] != math.inf:
        lo, hi = math.log2(ts[k - 1]), math.log2(ts[k + 1])
        g = (math.sqrt(5) - 1) / 2
        a, b = hi - g * (hi - lo), lo + g * (hi - lo)
        fa, fb = _ratio(p, q, 2.0 ** a), _ratio(p, q, 2.0 ** b)
        for _ in range(60):
            if fa < fb:
                hi, b, fb = b, a, fa
                a = hi - g * (hi - lo)
                fa = _ratio(p, q, 2.0 ** a)
            else:
                lo, a, fa = a, b, fb
                b = lo + g * (hi - lo)
                fb = _ratio(p, q, 2.0 ** b)
        for val, tt in ((fa, 2.0 ** a), (fb, 2.0 ** b)):
            if val < best:
                best, best_t, refined = val, tt, True
    return RenyiBound(best, best_t, len(ts), refined)


def renyi_functional(t):
    def f(p) -> float:
        return renyi(p, t)
    f.__name__ = f"H_{t}"
    return f


class MajorInstance(MonoidInstance):
    """Distributions with the product; x >= y iff y majorizes x."""

    name = "major"
    complete = True

    @property
    def zero(self) -> Distribution:
        return Distribution.point_mass()

    def combine(self, x, y) -> Distribution:
        return product(x, y)

    def geq(self, x, y, budget: Budget | None = None) -> TriState:
        if major_leq(y, x):
            return TriState.yes("prefix sums dominate")
        return TriState.no("a prefix sum fails")

    def canonical(self, x):
        return _dist(x).support

    def verify(self, x, y, witness) -> bool:
        return major_leq(y, x)


def generating_pair() -> tuple[Distribution, Distribution]:
    """(g+, g-) for the conversion order: a uniform bit and the point mass."""
    return Distribution.uniform(2), Distribution.point_mass()
