"""Reaction networks: multisets of species rewritten by reactions.

x >= y means some sequence of reactions turns the collection x into exactly
the collection y.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .core import Budget, MalformedInput, MonoidInstance, TriState, as_budget, check_guard
from .exact import Vector, dot, in_span, nullspace, primitive
from .lp import linprog
from .polyhedra import double_description

SPECIES_GUARD = 12
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TERM = re.compile(r"\s*(\d*)\s*([A-Za-z_][A-Za-z0-9_]*)\s*\Z")


class Multiset(Mapping):
    """Immutable species -> positive count map."""

    __slots__ = ("_items", "_hash")

    def __init__(self, counts: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = dict(counts.items() if isinstance(counts, Mapping) else counts)
        for k, v in items.items():
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"bad count {v!r} for {k}")
        self._items = tuple(sorted((k, v) for k, v in items.items() if v > 0))
        self._hash = hash(self._items)

    def __getitem__(self, key: str) -> int:
        for k, v in self._items:
            if k == key:
                return v
        raise KeyError(key)

    def get(self, key, default=0):
        try:
            return self[key]
        except KeyError:
            return default

    def __iter__(self):
        return (k for k, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if isinstance(other, Multiset):
            return self._items == other._items
        return NotImplemented

    def __add__(self, other: "Multiset") -> "Multiset":
        c = dict(self._items)
        for k, v in other.items():
            c[k] = c.get(k, 0) + v
        return Multiset(c)

    def __sub__(self, other: "Multiset") -> "Multiset":
        c = dict(self._items)
        for k, v in other.items():
            left = c.get(k, 0) - v
            if left < 0:
                raise ValueError("multiset difference would be negative")
            c[k] = left
        return Multiset(c)

    def __le__(self, other: "Multiset") -> bool:
        return all(other.get(k, 0) >= v for k, v in self._items)

    def __mul__(self, n: int) -> "Multiset":
        return Multiset({k: v * n for k, v in self._items})

    def total(self) -> int:
        return sum(v for _, v in self._items)

    def __repr__(self) -> str:
        return format_multiset(self)


def format_multiset(m: Multiset) -> str:
    if not len(m):
        return "0"
    return " + ".join(f"{v} {k}" if v != 1 else k for k, v in m.items())


def parse_multiset(text: str, lineno: int | None = None) -> Multiset:
    text = text.strip()
    if text in ("", "0"):
        return Multiset()
    counts: dict[str, int] = {}
    for part in text.split("+"):
        m = _TERM.match(part)
        if not m:
            raise MalformedInput(f"cannot parse term {part.strip()!r}", lineno)
        coef = int(m.group(1)) if m.group(1) else 1
        if coef <= 0:
            raise MalformedInput("coefficients must be positive", lineno)
        counts[m.group(2)] = counts.get(m.group(2), 0) + coef
    return Multiset(counts)


@dataclass(frozen=True)
class Reaction:
    lhs: Multiset
    rhs: Multiset

    def __repr__(self) -> str:
        return f"{format_multiset(self.lhs)} -> {format_multiset(self.rhs)}"


class ReactionSystem:
    def __init__(self, reactions: Sequence[Reaction], species: Sequence[str] | None = None):
        self.reactions = tuple(reactions)
        seen: list[str] = list(species) if species is not None else []
        for r in self.reactions:
            for k in list(r.lhs) + list(r.rhs):
                if k not in seen:
                    if species is not None:
                        raise ValueError(f"undeclared species {k}")
                    seen.append(k)
        self.species = tuple(seen)

    def with_species(self, extra: Iterable[str]) -> "ReactionSystem":
        sp = list(self.species) + [s for s in extra if s not in self.species]
        return ReactionSystem(self.reactions, sp)

    def vector(self, m: Multiset) -> Vector:
        return tuple(Fraction(m.get(s, 0)) for s in self.species)

    def differences(self) -> list[Vector]:
        """lhs - rhs for every reaction: monotones are nonnegative on these."""
        return [tuple(Fraction(r.lhs.get(s, 0) - r.rhs.get(s, 0)) for s in self.species)
                for r in self.reactions]

    def __repr__(self) -> str:
        return "\n".join(map(repr, self.reactions))


def parse_reactions(text: str) -> ReactionSystem:
    """One reaction per line ("2 H2 + O2 -> 2 H2O"); '#' starts a comment.

    An optional line "species: A, B, C" fixes the species order.
    """
    reactions = []
    species = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("species:"):
            names = [s.strip() for s in line.split(":", 1)[1].split(",") if s.strip()]
            for s in names:
                if not _NAME.match(s):
                    raise MalformedInput(f"bad species name {s!r}", lineno)
            species = names
            continue
        if line.count("->") != 1:
            raise MalformedInput("expected exactly one '->'", lineno)
        lhs, rhs = line.split("->")
        reactions.append(Reaction(parse_multiset(lhs, lineno), parse_multiset(rhs, lineno)))
    try:
        return ReactionSystem(reactions, species)
    except ValueError as e:
        raise MalformedInput(str(e)) from None


def apply_sequence(sys: ReactionSystem, x: Multiset, seq: Sequence[int]) -> Multiset | None:
    state = x
    for i in seq:
        r = sys.reactions[i]
        if not r.lhs <= state:
            return None
        state = state - r.lhs + r.rhs
    return state


def reachable_leq(sys: ReactionSystem, x: Multiset, y: Multiset, budget: Budget | None = None,
                  max_molecules: int | None = None) -> TriState:
    """Breadth-first search from x for exactly y.

    Yes carries the reaction index sequence. No means the reachable set was
    exhausted without hitting the depth or molecule-count bounds.
    """
    budget = as_budget(budget)
    if max_molecules is None:
        biggest = max([r.lhs.total() + r.rhs.total() for r in sys.reactions] + [0])
        max_molecules = 4 * max(x.total(), y.total()) + biggest
    if x == y:
        return TriState.yes([])
    parent: dict[Multiset, tuple[Multiset, int] | None] = {x: None}
    frontier = deque([(x, 0)])
    pruned = False
    while frontier:
        state, depth = frontier.popleft()
        if not budget.depth_ok(depth + 1):
            pruned = True
            continue
        for i, r in enumerate(sys.reactions):
            if not r.lhs <= state:
                continue
            nxt = state - r.lhs + r.rhs
            if nxt in parent:
                continue
            if nxt.total() > max_molecules:
                pruned = True
                continue
            if not budget.charge():
                return TriState.unknown(None, "budget exhausted")
            parent[nxt] = (state, i)
            if nxt == y:
                seq = []
                cur = nxt
                while parent[cur] is not None:
                    prev, j = parent[cur]
                    seq.append(j)
                    cur = prev
                return TriState.yes(seq[::-1])
            frontier.append((nxt, depth + 1))
    if pruned:
        return TriState.unknown(None, "search bounds reached")
    return TriState.no(f"reachable set exhausted ({len(parent)} states)")


def conservation_laws(sys: ReactionSystem) -> list[Vector]:
    """Basis of {f : f.lhs = f.rhs for every reaction}."""
    return [primitive(v) for v in nullspace(sys.differences(), len(sys.species))]


def is_conserved(sys: ReactionSystem, f: Sequence) -> bool:
    return in_span(tuple(Fraction(v) for v in f), conservation_laws(sys))


@dataclass
class MonotoneCone:
    rays: list[Vector]
    lineality: list[Vector]  # conservation laws: both f and -f are monotone

    def generators(self) -> list[Vector]:
        return self.rays + self.lineality + [tuple(-x for x in l) for l in self.lineality]


def monotone_rays(sys: ReactionSystem, guard: int = SPECIES_GUARD) -> MonotoneCone:
    """Generators of the cone of additive monotones {f : f.(lhs - rhs) >= 0}."""
    d = len(sys.species)
    check_guard(d, guard, "monotone rays")
    rays, lin = double_description(sys.differences(), [], d)
    return MonotoneCone(sorted(rays), lin)


@dataclass
class FunctionalOrderResult:
    holds: bool
    combination: tuple[Fraction, ...] | None = None  # reaction multiplicities
    separator: Vector | None = None

    def __bool__(self) -> bool:
        return self.holds


def functional_order_leq(sys: ReactionSystem, x: Multiset, y: Multiset) -> FunctionalOrderResult:
    """Whether f(x) >= f(y) for every additive monotone f.

    Decided exactly: x - y must be a nonnegative rational combination of the
    reaction differences. Otherwise a separating monotone is returned.

    This is the order defined by all monotones. It agrees with the order
    obtained by allowing a sublinear number of seed copies only when the
    system has a generating pair; without one it may be strictly coarser
    than what conversions with seeds achieve.
    """
    sys = sys.with_species(list(x) + list(y))
    diffs = sys.differences()
    target = tuple(a - b for a, b in zip(sys.vector(x), sys.vector(y)))
    d = len(sys.species)
    a_eq = [[r[i] for r in diffs] for i in range(d)]
    res = linprog([0] * len(diffs), (), (), a_eq, list(target))
    if res.status == "optimal":
        return FunctionalOrderResult(True, res.x)
    # f.(diff) >= 0, f.target <= -1, minimize |f|_1
    c = [0] * d + [1] * d
    a_ub, b_ub = [], []
    for r in diffs:
        a_ub.append([-v for v in r] + [0] * d)
        b_ub.append(0)
    a_ub.append(list(target) + [0] * d)
    b_ub.append(-1)
    for i in range(d):
        for s in (1, -1):
            row = [0] * (2 * d)
            row[i], row[d + i] = s, -1
            a_ub.append(row)
            b_ub.append(0)
    sep = linprog(c, a_ub, b_ub, free=range(d))
    f = primitive(sep.x[:d])
    assert dot(f, target) < 0 and all(dot(f, r) >= 0 for r in diffs)
    return FunctionalOrderResult(False, None, f)


_ELEMENT = re.compile(r"([A-Z][a-z]?)(\d*)")


def parse_formula(formula: str) -> dict[str, int]:
    """Element counts of a plain molecular formula such as "ZnCl2"."""
    out: dict[str, int] = {}
    pos = 0
    for m in _ELEMENT.finditer(formula):
        if m.start() != pos:
            raise ValueError(f"cannot parse formula {formula!r}")
        out[m.group(1)] = out.get(m.group(1), 0) + (int(m.group(2)) if m.group(2) else 1)
        pos = m.end()
    if pos != len(formula) or not out:
        raise ValueError(f"cannot parse formula {formula!r}")
    return out


def atom_vectors(sys: ReactionSystem, table: Mapping[str, Mapping[str, int]] | None = None
                 ) -> dict[str, Vector]:
    """For each element, the vector of its atom counts over the species.

    ``table`` maps species to element counts; by default species names are
    read as molecular formulas.
    """
    if table is None:
        table = {s: parse_formula(s) for s in sys.species}
    elements = sorted({e for s in sys.species for e in table[s]})
    return {e: tuple(Fraction(table[s].get(e, 0)) for s in sys.species) for e in elements}


class ReactionInstance(MonoidInstance):
    name = "rxn"
    complete = True  # No only after exhausting the reachable set

    def __init__(self, sys: ReactionSystem, max_molecules: int | None = None):
        self.sys = sys
        self.max_molecules = max_molecules

    @property
    def zero(self) -> Multiset:
        return Multiset()

    def combine(self, x: Multiset, y: Multiset) -> Multiset:
        return x + y

    def geq(self, x, y, budget: Budget | None = None) -> TriState:
        return reachable_leq(self.sys, x, y, budget, self.max_molecules)

    def verify(self, x, y, witness) -> bool:
        return apply_sequence(self.sys, x, witness) == y

    def combine_witness(self, x1, y1, w1, x2, y2, w2):
        return list(w1) + list(w2)
