"""Finite simple graphs with the disjunctive (co-normal) product and join.

A graph remembers how it was built. Products and joins keep their parts, so
adjacency between two vertices of a large product can be decided from the
factors without materializing the full matrix. Vertex numbering:

* product G*H: vertex (g, h) has index g*|H| + h (mixed radix, associative);
* join G v H: the vertices of G come first, then those of H shifted by |G|.
"""
from __future__ import annotations

from itertools import product as cartesian
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from ..core import GuardExceeded, MalformedInput, check_guard

MATERIALIZE_LIMIT = 6000
MAX_TERMS = 64


class Graph:
    __slots__ = ("n", "kind", "parts", "_adj", "_key", "name", "_bits", "_edges")

    def __init__(self, adjacency=None, *, kind: str = "atom", parts: Sequence["Graph"] = (),
                 name: str | None = None):
        self.kind = kind
        self.parts = tuple(parts)
        self.name = name
        self._key = None
        self._bits = None
        self._edges = None
        if kind == "atom":
            a = np.array(adjacency, dtype=bool)
            if a.ndim != 2 or a.shape[0] != a.shape[1]:
                raise ValueError("adjacency must be a square matrix")
            if (a != a.T).any():
                raise ValueError("adjacency must be symmetric")
            if a.diagonal().any():
                raise ValueError("loops are not allowed")
            a.setflags(write=False)
            self._adj = a
            self.n = a.shape[0]
        elif kind == "product":
            self._adj = None
            n = 1
            for p in self.parts:
                n *= p.n
            self.n = n
        elif kind == "join":
            self._adj = None
            self.n = sum(p.n for p in self.parts)
        else:
            raise ValueError(f"unknown graph kind {kind!r}")

    # construction helpers -------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], name: str | None = None) -> "Graph":
        a = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            a[u, v] = a[v, u] = True
        return cls(a, name=name)

    # structure ------------------------------------------------------------

    @property
    def adjacency(self) -> np.ndarray:
        if self._adj is None:
            check_guard(self.n, MATERIALIZE_LIMIT, "materializing adjacency")
            self._adj = self._build_adjacency()
            self._adj.setflags(write=False)
        return self._adj

    def _build_adjacency(self) -> np.ndarray:
        if self.kind == "product":
            a = np.zeros((1, 1), dtype=bool)
            for p in self.parts:
                b = p.adjacency
                m = b.shape[0]
                a = np.kron(a, np.ones((m, m), dtype=bool)) | np.kron(np.ones(a.shape, dtype=bool), b)
            return a
        a = np.ones((self.n, self.n), dtype=bool)
        off = 0
        for p in self.parts:
            a[off:off + p.n, off:off + p.n] = p.adjacency
            off += p.n
        return a

    @property
    def materialized(self) -> bool:
        return self._adj is not None

    def adjacent(self, u, v) -> np.ndarray:
        """Vectorized adjacency test on index arrays, computed from the structure."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if self._adj is not None:
            return self._adj[u, v]
        if self.kind == "product":
            out = np.zeros(np.broadcast(u, v).shape, dtype=bool)
            for p in reversed(self.parts):
                out |= p.adjacent(u % p.n, v % p.n)
                u = u // p.n
                v = v // p.n
            return out
        offsets = np.cumsum([0] + [p.n for p in self.parts])
        pu = np.searchsorted(offsets, u, side="right") - 1
        pv = np.searchsorted(offsets, v, side="right") - 1
        u, v = np.broadcast_arrays(u, v)
        pu, pv = np.broadcast_arrays(pu, pv)
        out = pu != pv
        for i, p in enumerate(self.parts):
            sel = (pu == i) & (pv == i)
            if sel.any():
                out[sel] = p.adjacent(u[sel] - offsets[i], v[sel] - offsets[i])
        return out

    def factors(self) -> tuple["Graph", ...]:
        return self.parts if self.kind == "product" else (self,)

    def join_parts(self) -> tuple["Graph", ...]:
        return self.parts if self.kind == "join" else (self,)

    @property
    def key(self):
        """Structural key: equal keys mean identical labelled graphs."""
        if self._key is None:
            if self.kind == "atom":
                self._key = ("atom", self.n, np.packbits(self._adj).tobytes())
            else:
                self._key = (self.kind, tuple(p.key for p in self.parts))
        return self._key

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        if self.n != other.n:
            return False
        if self.key == other.key:
            return True
        return bool(np.array_equal(self.adjacency, other.adjacency))

    def __repr__(self) -> str:
        if self.name:
            return self.name
        if self.kind == "product":
            return "(" + " * ".join(map(repr, self.parts)) + ")"
        if self.kind == "join":
            return "(" + " v ".join(map(repr, self.parts)) + ")"
        return f"Graph(n={self.n}, m={self.num_edges()})"

    # basic queries --------------------------------------------------------

    def num_edges(self) -> int:
        return int(self.adjacency.sum()) // 2

    def edges(self) -> np.ndarray:
        """Array of shape (m, 2) with u < v."""
        if self._edges is None:
            iu, ju = np.nonzero(np.triu(self.adjacency, 1))
            self._edges = np.stack([iu, ju], axis=1)
        return self._edges

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def neighbor_bits(self) -> list[int]:
        """Neighbourhoods as Python int bitsets (bit j set iff j is a neighbour)."""
        if self._bits is None:
            packed = np.packbits(self.adjacency, axis=1, bitorder="little")
            self._bits = [int.from_bytes(row.tobytes(), "little") for row in packed]
        return self._bits

    def neighbor_lists(self) -> list[list[int]]:
        a = self.adjacency
        return [list(map(int, np.flatnonzero(a[i]))) for i in range(self.n)]

    def has_edges(self) -> bool:
        if self.kind == "atom":
            return bool(self._adj.any())
        if self.kind == "product":
            return any(p.has_edges() for p in self.parts)
        nonempty = [p for p in self.parts if p.n > 0]
        return len(nonempty) > 1 or any(p.has_edges() for p in nonempty)

    def is_complete(self) -> bool:
        if self.kind == "atom":
            return self.num_edges() == self.n * (self.n - 1) // 2
        return all(p.is_complete() for p in self.parts)

    def induced(self, vertices: Sequence[int]) -> "Graph":
        idx = np.asarray(vertices, dtype=np.int64)
        return Graph(self.adjacent(idx[:, None], idx[None, :]) & ~np.eye(len(idx), dtype=bool))

    def atomized(self) -> "Graph":
        """Same labelled graph with the construction history dropped."""
        return Graph(self.adjacency, name=self.name)

    # distributive normal form ----------------------------------------------

    def terms(self) -> list["Term"] | None:
        """The graph as a join of products of atoms, or None if too many terms.

        Two vertices in different terms are always adjacent, because they sit
        in different parts of some join reached through products and joins.
        """
        return _terms(self)


class Term(NamedTuple):
    atoms: tuple[Graph, ...]
    index: object  # callable: list of coordinate arrays -> vertex indices

    @property
    def size(self) -> int:
        s = 1
        for a in self.atoms:
            s *= a.n
        return s

    def vertices(self) -> tuple[np.ndarray, list[np.ndarray]]:
        """All vertices of the term: (global indices, per-atom coordinates)."""
        sizes = [a.n for a in self.atoms]
        if not sizes:
            coords: list[np.ndarray] = []
            return np.asarray(self.index(coords)).reshape(1), coords
        grids = np.indices(sizes).reshape(len(sizes), -1)
        coords = [g.astype(np.int64) for g in grids]
        return np.asarray(self.index(coords), dtype=np.int64), coords


def _terms(g: Graph) -> list[Term] | None:
    if g.kind == "atom":
        if g.n == 1:
            return [Term((), lambda cs: np.zeros(1, dtype=np.int64) if not cs else cs[0] * 0)]
        return [Term((g,), lambda cs: cs[0])]
    if g.kind == "join":
        out = []
        off = 0
        for p in g.parts:
            sub = _terms(p)
            if sub is None:
                return None
            for t in sub:
                out.append(Term(t.atoms, (lambda cs, f=t.index, o=off: f(cs) + o)))
            off += p.n
        return out if len(out) <= MAX_TERMS else None
    subs = []
    for p in g.parts:
        sub = _terms(p)
        if sub is None:
            return None
        subs.append(sub)
    count = 1
    for s in subs:
        count *= len(s)
    if count > MAX_TERMS:
        return None
    out = []
    sizes = [p.n for p in g.parts]
    for combo in cartesian(*subs):
        atoms = tuple(a for t in combo for a in t.atoms)
        lens = [len(t.atoms) for t in combo]

        def index(cs, combo=combo, lens=lens):
            idx = None
            pos = 0
            for t, k, size in zip(combo, lens, sizes):
                part = np.asarray(t.index(cs[pos:pos + k]), dtype=np.int64)
                pos += k
                idx = part if idx is None else idx * size + part
            return idx
        out.append(Term(atoms, index))
    return out


# constructors ---------------------------------------------------------------

def complete_graph(n: int) -> Graph:
    return Graph(~np.eye(n, dtype=bool), name=f"K{n}")


def empty_graph(n: int) -> Graph:
    return Graph(np.zeros((n, n), dtype=bool), name=f"E{n}")


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], name=f"C{n}")


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], name=f"P{n}")


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    u = np.triu(rng.random((n, n)) < p, 1)
    return Graph(u | u.T)


def complement(g: Graph) -> Graph:
    return Graph(~g.adjacency & ~np.eye(g.n, dtype=bool))


def disjunctive_product(g: Graph, h: Graph) -> Graph:
    """Co-normal product: (g,h) ~ (g',h') iff g ~ g' or h ~ h'."""
    parts = [p for p in g.factors() + h.factors() if p.n != 1]
    if not parts:
        return complete_graph(1)
    if len(parts) == 1:
        return parts[0]
    return Graph(kind="product", parts=parts)


def power(g: Graph, n: int) -> Graph:
    acc = complete_graph(1)
    for _ in range(n):
        acc = disjunctive_product(acc, g)
    return acc


def join(*graphs: Graph) -> Graph:
    """Disjoint union with every cross pair joined by an edge."""
    parts = [p for g in graphs for p in g.join_parts() if p.n > 0]
    if not parts:
        return empty_graph(0)
    if len(parts) == 1:
        return parts[0]
    return Graph(kind="join", parts=parts)


# homomorphisms ----------------------------------------------------------------

class GraphHom(NamedTuple):
    source: Graph
    target: Graph
    mapping: np.ndarray

    def verify(self) -> bool:
        return verify_hom(self.source, self.target, self.mapping)


def source_edges(g: Graph) -> np.ndarray:
    if g.n <= MATERIALIZE_LIMIT or g.materialized:
        return g.edges()
    raise GuardExceeded(f"source graph with {g.n} vertices is too large to enumerate edges")


def verify_hom(g: Graph, h: Graph, mapping) -> bool:
    """Every edge of g is sent to an edge of h."""
    f = np.asarray(mapping, dtype=np.int64)
    if f.shape != (g.n,):
        return False
    if g.n and (f.min() < 0 or f.max() >= h.n):
        return False
    e = source_edges(g)
    if len(e) == 0:
        return True
    ok = True
    chunk = 1 << 20
    for s in range(0, len(e), chunk):
        part = e[s:s + chunk]
        ok = ok and bool(h.adjacent(f[part[:, 0]], f[part[:, 1]]).all())
    return ok


# canonical labelling ----------------------------------------------------------

class CanonicalForm(NamedTuple):
    order: tuple[int, ...]  # order[i] = original vertex placed at position i
    certificate: bytes


def _refine(adj_sets, cells):
    cells = [list(c) for c in cells]
    while True:
        where = {}
        for i, c in enumerate(cells):
            for v in c:
                where[v] = i
        new = []
        changed = False
        for c in cells:
            if len(c) == 1:
                new.append(c)
                continue
            sig = {}
            for v in c:
                counts = [0] * len(cells)
                for w in adj_sets[v]:
                    counts[where[w]] += 1
                sig.setdefault(tuple(counts), []).append(v)
            if len(sig) > 1:
                changed = True
            for s in sorted(sig):
                new.append(sig[s])
        cells = new
        if not changed:
            return cells


def canonical_label(g: Graph, max_leaves: int = 200000) -> CanonicalForm:
    """Canonical vertex order by individualization and refinement.

    Twins and automorphisms found along the way are used to prune; the
    search gives up (GuardExceeded) after max_leaves leaves.
    """
    n = g.n
    a = g.adjacency
    adj_sets = [set(map(int, np.flatnonzero(a[i]))) for i in range(n)]
    best: list = [None, None]
    autos: list[tuple[int, ...]] = []
    first_leaf: dict[bytes, tuple[int, ...]] = {}
    leaves = [0]

    def cert(order):
        idx = np.asarray(order, dtype=np.int64)
        return np.packbits(a[np.ix_(idx, idx)]).tobytes()

    def orbits_fixing(prefix):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for p in autos:
            if all(p[v] == v for v in prefix):
                for v in range(n):
                    ra, rb = find(v), find(p[v])
                    if ra != rb:
                        parent[ra] = rb
        return find

    def search(cells, prefix):
        cells = _refine(adj_sets, cells)
        if all(len(c) == 1 for c in cells):
            leaves[0] += 1
            if leaves[0] > max_leaves:
                raise GuardExceeded("canonical labelling search too large")
            order = tuple(c[0] for c in cells)
            c = cert(order)
            if c in first_leaf:
                other = first_leaf[c]
                perm = [0] * n
                for x, y in zip(other, order):
                    perm[x] = y
                autos.append(tuple(perm))
            else:
                first_leaf[c] = order
            if best[0] is None or c < best[0]:
                best[0], best[1] = c, order
            return
        k = min(range(len(cells)), key=lambda i: (len(cells[i]) if len(cells[i]) > 1 else n + 1, i))
        target = cells[k]
        tried: list[int] = []
        for v in sorted(target):
            if any(adj_sets[v] - {u} == adj_sets[u] - {v} for u in tried):
                continue
            find = orbits_fixing(prefix)
            if any(find(u) == find(v) for u in tried):
                continue
            tried.append(v)
            rest = [u for u in target if u != v]
            search(cells[:k] + [[v], rest] + cells[k + 1:], prefix + [v])

    if n == 0:
        return CanonicalForm((), b"")
    search([list(range(n))], [])
    return CanonicalForm(best[1], best[0])


def isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.num_edges() != h.num_edges():
        return False
    return canonical_label(g).certificate == canonical_label(h).certificate


def relabel(g: Graph, order: Sequence[int]) -> Graph:
    idx = np.asarray(order, dtype=np.int64)
    return Graph(g.adjacency[np.ix_(idx, idx)])


# text format ------------------------------------------------------------------

def parse_dimacs(text: str) -> Graph:
    """Parse "p <n> <m>" / "e <u> <v>" (1-based) with "c" comment lines."""
    n = None
    declared = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] == "p":
            if n is not None:
                raise MalformedInput("duplicate problem line", lineno)
            nums = [t for t in tok[1:] if t.lstrip("-").isdigit()]
            if len(nums) != 2:
                raise MalformedInput("expected 'p <n> <m>'", lineno)
            n, declared = int(nums[0]), int(nums[1])
            if n < 0 or declared < 0:
                raise MalformedInput("negative size", lineno)
        elif tok[0] == "e":
            if n is None:
                raise MalformedInput("edge before problem line", lineno)
            if len(tok) != 3 or not all(t.isdigit() for t in tok[1:]):
                raise MalformedInput("expected 'e <u> <v>'", lineno)
            u, v = int(tok[1]), int(tok[2])
            if not (1 <= u <= n and 1 <= v <= n):
                raise MalformedInput(f"vertex out of range 1..{n}", lineno)
            if u == v:
                raise MalformedInput("loops are not allowed", lineno)
            edges.append((u - 1, v - 1))
        else:
            raise MalformedInput(f"unrecognized line {tok[0]!r}", lineno)
    if n is None:
        raise MalformedInput("missing problem line")
    g = Graph.from_edges(n, edges)
    if g.num_edges() != declared:
        raise MalformedInput(f"problem line declares {declared} edges, found {g.num_edges()}")
    return g


def format_dimacs(g: Graph) -> str:
    e = g.edges()
    lines = [f"p edge {g.n} {len(e)}"]
    lines += [f"e {u + 1} {v + 1}" for u, v in e]
    return "\n".join(lines) + "\n"
