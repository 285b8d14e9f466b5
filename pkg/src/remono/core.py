"""Generic machinery for ordered commutative monoids.

An instance supplies a neutral element, a combination operation and a
convertibility test ``geq(x, y, budget)`` meaning "x can be converted into y".
Everything in this module only talks to instances through that contract.
"""
from __future__ import annotations

import math
import os
import time
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, NamedTuple, Sequence

INF = math.inf


class GuardExceeded(ValueError):
    """An exact routine was asked to work on an input above its size guard."""


def guard_override() -> bool:
    return os.environ.get("REMONO_GUARD_OVERRIDE", "").strip() not in ("", "0", "false", "no")


def check_guard(size: int, limit: int, what: str) -> None:
    if size > limit and not guard_override():
        raise GuardExceeded(
            f"{what}: size {size} exceeds guard {limit} (set REMONO_GUARD_OVERRIDE=1 to lift)")


@dataclass(frozen=True)
class TriState:
    """Outcome of a bounded search: "yes", "no" or "unknown".

    Yes carries a witness, No a certificate, Unknown optional partial
    information (for example the best bound reached before the budget ran out).
    """
    kind: str
    payload: Any = None
    note: str = ""

    def __post_init__(self):
        if self.kind not in ("yes", "no", "unknown"):
            raise ValueError(f"bad TriState kind {self.kind!r}")

    @classmethod
    def yes(cls, witness=None, note: str = "") -> "TriState":
        return cls("yes", witness, note)

    @classmethod
    def no(cls, certificate=None, note: str = "") -> "TriState":
        return cls("no", certificate, note)

    @classmethod
    def unknown(cls, info=None, note: str = "") -> "TriState":
        return cls("unknown", info, note)

    @property
    def is_yes(self) -> bool:
        return self.kind == "yes"

    @property
    def is_no(self) -> bool:
        return self.kind == "no"

    @property
    def is_unknown(self) -> bool:
        return self.kind == "unknown"

    @property
    def witness(self):
        return self.payload if self.kind == "yes" else None

    @property
    def certificate(self):
        return self.payload if self.kind == "no" else None

    def __bool__(self):
        raise TypeError("TriState has no truth value; test .is_yes / .is_no explicitly")

    def __repr__(self) -> str:
        extra = f", note={self.note!r}" if self.note else ""
        return f"TriState.{self.kind}({self.payload!r}{extra})"


class Budget:
    """Search limits. ``nodes`` counts search nodes, ``depth`` bounds recursion.

    A budget is a mutable counter shared by everything that charges it.
    ``time_hint`` is advisory: searches stop early once it has elapsed, which
    can only turn an answer into Unknown, never change a Yes/No.
    """

    def __init__(self, nodes: int | None = 10**6, depth: int | None = None,
                 time_hint: float | None = None):
        self.nodes = nodes
        self.depth = depth
        self.time_hint = time_hint
        self.used = 0
        self._start = time.monotonic()

    @classmethod
    def unlimited(cls) -> "Budget":
        return cls(None, None, None)

    def fresh(self) -> "Budget":
        return Budget(self.nodes, self.depth, self.time_hint)

    def charge(self, k: int = 1) -> bool:
        """Spend k nodes; returns False when the budget is exhausted."""
        self.used += k
        if self.nodes is not None and self.used > self.nodes:
            return False
        if self.time_hint is not None and (self.used & 1023) == 0:
            if time.monotonic() - self._start > self.time_hint:
                return False
        return True

    @property
    def exhausted(self) -> bool:
        if self.nodes is not None and self.used > self.nodes:
            return True
        return self.time_hint is not None and time.monotonic() - self._start > self.time_hint

    def depth_ok(self, d: int) -> bool:
        return self.depth is None or d <= self.depth

    def __repr__(self) -> str:
        return f"Budget(nodes={self.nodes}, depth={self.depth}, used={self.used})"


def as_budget(budget: "Budget | None") -> Budget:
    return Budget() if budget is None else budget


class BudgetExhausted(RuntimeError):
    """Raised by value-returning invariants when a supplied budget runs out."""


@dataclass
class RateInterval:
    """Bounds on a conversion rate; values are Fractions, floats or +inf."""
    lower: Any
    upper: Any
    lower_source: str = ""
    upper_source: str = ""
    tol: float | None = None

    def __post_init__(self):
        slack = self.tol or 0
        if self.lower > self.upper + slack:
            raise ValueError(f"inconsistent rate interval [{self.lower}, {self.upper}]")

    @property
    def width(self):
        return self.upper - self.lower


@dataclass
class Slice:
    """The set of (n, m) with n*x >= m*y inside a box, with witnesses."""
    n_max: int
    m_max: int
    points: dict = field(default_factory=dict)  # (n, m) -> witness
    refuted: set = field(default_factory=set)
    unknown: set = field(default_factory=set)

    def __contains__(self, nm) -> bool:
        return tuple(nm) in self.points

    def slopes(self) -> list[Fraction]:
        return sorted({Fraction(m, n) for n, m in self.points if n > 0})


class Window(NamedTuple):
    points: frozenset
    unknown: frozenset
    n_max: int


class MonoidInstance(ABC):
    """Contract every ordered commutative monoid instance implements.

    ``geq(x, y)`` answers whether x can be converted into y. ``complete`` says
    whether a No from ``geq`` is decisive for the order itself (as opposed to
    "no witness of the kind searched for").
    """

    name: str = "instance"
    complete: bool = True

    @property
    @abstractmethod
    def zero(self): ...

    @abstractmethod
    def combine(self, x, y): ...

    @abstractmethod
    def geq(self, x, y, budget: Budget | None = None) -> TriState: ...

    def canonical(self, x):
        """Hashable normal form used for equality."""
        return x

    def equal(self, x, y) -> bool:
        return self.canonical(x) == self.canonical(y)

    def verify(self, x, y, witness) -> bool:
        """Independently check a witness produced by geq(x, y)."""
        return self.geq(x, y, Budget()).is_yes

    def combine_witness(self, x1, y1, w1, x2, y2, w2):
        """Witness for x1+x2 >= y1+y2 from witnesses of the two parts."""
        return (w1, w2)


def nfold(inst: MonoidInstance, x, n: int):
    """x combined with itself n times (the neutral element for n = 0)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return inst.zero
    acc = x
    for _ in range(n - 1):
        acc = inst.combine(acc, x)
    return acc


def annihilator(inst: MonoidInstance, x, y, n_max: int, budget: Budget | None = None) -> Window:
    """Finite window {n <= n_max : n*x >= n*y} of the annihilator semigroup."""
    budget = as_budget(budget)
    pts, unk = set(), set()
    for n in range(n_max + 1):
        r = inst.geq(nfold(inst, x, n), nfold(inst, y, n), budget.fresh())
        if r.is_yes:
            pts.add(n)
        elif r.is_unknown:
            unk.add(n)
    return Window(frozenset(pts), frozenset(unk), n_max)


def slice_points(inst: MonoidInstance, x, y, n_max: int, m_max: int,
                 budget: Budget | None = None, jobs: int = 1) -> Slice:
    """Evaluate n*x >= m*y on the box [0, n_max] x [0, m_max]."""
    budget = as_budget(budget)
    xs = [nfold(inst, x, n) for n in range(n_max + 1)]
    ys = [nfold(inst, y, m) for m in range(m_max + 1)]
    cells = [(n, m) for n in range(n_max + 1) for m in range(m_max + 1)]

    def run(cell):
        n, m = cell
        return cell, inst.geq(xs[n], ys[m], budget.fresh())

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, cells))
    else:
        results = [run(c) for c in cells]
    out = Slice(n_max, m_max)
    for cell, r in results:  # cell order, so the result is deterministic
        if r.is_yes:
            out.points[cell] = r.witness
        elif r.is_no:
            out.refuted.add(cell)
        else:
            out.unknown.add(cell)
    return out


def _best_m(inst, xn, y, m_cap: int, budget: Budget) -> tuple[int, bool]:
    """Largest m <= m_cap reached by scanning m = 1, 2, ... while n*x >= m*y."""
    best = 0
    ym = inst.zero
    for m in range(1, m_cap + 1):
        ym = inst.combine(ym, y) if m > 1 else y
        r = inst.geq(xn, ym, budget.fresh())
        if not r.is_yes:
            return best, False
        best = m
    return best, True


def rate_bounds(inst: MonoidInstance, x, y, n_max: int,
                functionals: Sequence[Callable] = (), budget: Budget | None = None,
                m_cap: int | None = None) -> RateInterval:
    """Lower bound from witnessed slice points, upper bound from functionals.

    The lower bound is the best slope m/n found by scanning m upwards for each
    n <= n_max (stopping at the first m that is not witnessed). The upper bound
    is the smallest f(x)/f(y) over the supplied additive monotone functionals
    with f(y) > 0, or +inf when none applies.
    """
    budget = as_budget(budget)
    if m_cap is None:
        m_cap = 8 * max(n_max, 1)
    lower: Any = Fraction(0)
    lower_src = "trivial (m = 0)"
    xn = inst.zero
    for n in range(1, n_max + 1):
        xn = inst.combine(xn, x) if n > 1 else x
        m, capped = _best_m(inst, xn, y, m_cap, budget)
        if Fraction(m, n) > lower:
            lower = Fraction(m, n)
            lower_src = f"slice point ({n}, {m})" + (" at search cap" if capped else "")
    upper: Any = INF
    upper_src = "none"
    for f in functionals:
        fy = f(y)
        if fy > 0:
            q = f(x) / fy
            if q < upper:
                upper = q
                upper_src = getattr(f, "__name__", repr(f))
    tol = 1e-9 if isinstance(upper, float) and upper != INF else None
    return RateInterval(lower, upper, lower_src, upper_src, tol)


def catalytic_leq(inst: MonoidInstance, x, y, candidates: Iterable, budget: Budget | None = None
                  ) -> TriState:
    """Search for a catalyst z among candidates with x + z >= y + z.

    A No is only relative to the candidate set (plus the direct test).
    """
    budget = as_budget(budget)
    direct = inst.geq(x, y, budget.fresh())
    if direct.is_yes:
        return TriState.yes((inst.zero, direct.witness), "no catalyst needed")
    all_no = direct.is_no
    for z in candidates:
        r = inst.geq(inst.combine(x, z), inst.combine(y, z), budget.fresh())
        if r.is_yes:
            return TriState.yes((z, r.witness))
        all_no = all_no and r.is_no
    if all_no:
        return TriState.no(None, "relative to the candidate set")
    return TriState.unknown()


def manycopy_leq(inst: MonoidInstance, x, y, n_max: int, budget: Budget | None = None) -> TriState:
    """Least n <= n_max with n*x >= n*y."""
    budget = as_budget(budget)
    all_no = True
    for n in range(1, n_max + 1):
        r = inst.geq(nfold(inst, x, n), nfold(inst, y, n), budget.fresh())
        if r.is_yes:
            return TriState.yes((n, r.witness))
        all_no = all_no and r.is_no
    if all_no and inst.complete:
        return TriState.no(None, f"refuted for every n <= {n_max}")
    return TriState.unknown(None, f"no witness for n <= {n_max}")


def regularized_leq_witness(inst: MonoidInstance, x, y, gplus, gminus, eps: Fraction,
                            n_max: int, budget: Budget | None = None) -> TriState:
    """Search n <= n_max, k <= eps*n with n*x + k*g+ >= n*y + k*g-.

    Pairs are tried with n ascending, then k ascending.
    """
    budget = as_budget(budget)
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not inst.geq(gplus, gminus, budget.fresh()).is_yes:
        raise ValueError("g+ >= g- could not be confirmed")
    all_no = True
    for n in range(1, n_max + 1):
        xn, yn = nfold(inst, x, n), nfold(inst, y, n)
        for k in range(0, math.floor(eps * n) + 1):
            lhs = inst.combine(xn, nfold(inst, gplus, k))
            rhs = inst.combine(yn, nfold(inst, gminus, k))
            r = inst.geq(lhs, rhs, budget.fresh())
            if r.is_yes:
                return TriState.yes(((n, k), r.witness))
            all_no = all_no and r.is_no
    if all_no and inst.complete:
        return TriState.no(None, "no witness within the search bounds")
    return TriState.unknown()


def generating_pair_check(inst: MonoidInstance, gplus, gminus, samples: Sequence, n_max: int,
                          budget: Budget | None = None) -> list:
    """For each sample x, the least n <= n_max with
    n*g+ >= x + n*g- and n*g+ + x >= n*g-, or None if not found."""
    budget = as_budget(budget)
    out = []
    for x in samples:
        found = None
        for n in range(n_max + 1):
            gp, gm = nfold(inst, gplus, n), nfold(inst, gminus, n)
            a = inst.geq(gp, inst.combine(x, gm), budget.fresh())
            if not a.is_yes:
                continue
            b = inst.geq(inst.combine(gp, x), gm, budget.fresh())
            if b.is_yes:
                found = n
                break
        out.append(found)
    return out


class MalformedInput(ValueError):
    """Input document could not be parsed; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)
