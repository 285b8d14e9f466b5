"""Combinatorial searches on graphs: cliques, colourings and homomorphisms."""
from __future__ import annotations

import numpy as np

from ..core import Budget, BudgetExhausted, TriState, as_budget
from .graph import (MATERIALIZE_LIMIT, Graph, GraphHom, Term, complete_graph,
                    disjunctive_product, verify_hom)

_CLIQUE_CACHE: dict = {}
GROUP_LIMIT = 250  # largest product of atoms searched exactly for a clique


# maximum clique -----------------------------------------------------------------

def _colour_sort(p: int, nb: list[int]) -> tuple[list[int], list[int]]:
    order: list[int] = []
    cols: list[int] = []
    colour = 0
    u = p
    while u:
        colour += 1
        q = u
        while q:
            low = q & -q
            v = low.bit_length() - 1
            q &= ~nb[v] & ~low
            u &= ~low
            order.append(v)
            cols.append(colour)
    return order, cols


def _clique_search(g: Graph, budget: Budget, stop_at: int | None = None) -> tuple[list[int], bool]:
    """Branch and bound with greedy colouring bounds.

    Returns (best clique found, finished) where finished means the search was
    exhaustive or reached stop_at.
    """
    n = g.n
    if n == 0:
        return [], True
    nb = g.neighbor_bits()
    # relabel so that high-degree vertices get low bit positions
    deg = g.degrees()
    perm = sorted(range(n), key=lambda v: (-int(deg[v]), v))
    pos = {v: i for i, v in enumerate(perm)}
    nbp = [0] * n
    for v in range(n):
        bits = 0
        x = nb[v]
        while x:
            low = x & -x
            bits |= 1 << pos[low.bit_length() - 1]
            x ^= low
        nbp[pos[v]] = bits
    best: list[list[int]] = [[]]
    stopped = [False]

    def expand(r: list[int], p: int) -> bool:
        if not budget.charge():
            return False
        order, cols = _colour_sort(p, nbp)
        for i in range(len(order) - 1, -1, -1):
            if len(r) + cols[i] <= len(best[0]):
                return True
            v = order[i]
            np_ = p & nbp[v]
            if np_:
                if not expand(r + [v], np_):
                    return False
            elif len(r) + 1 > len(best[0]):
                best[0] = r + [v]
                if stop_at is not None and len(best[0]) >= stop_at:
                    stopped[0] = True
                    return False
            p &= ~(1 << v)
        return True

    finished = expand([], (1 << n) - 1)
    clique = sorted(perm[i] for i in best[0])
    return clique, finished or stopped[0]


def max_clique(g: Graph, budget: Budget | None = None) -> TriState:
    """Yes(maximum clique) or Unknown(best clique so far)."""
    cached = _CLIQUE_CACHE.get(g.key)
    if cached is not None:
        return TriState.yes(list(cached))
    budget = as_budget(budget)
    clique, finished = _clique_search(g, budget)
    if finished:
        _CLIQUE_CACHE[g.key] = tuple(clique)
        return TriState.yes(clique)
    return TriState.unknown(clique, "budget exhausted")


def clique_number(g: Graph, budget: Budget | None = None) -> int:
    """Exact clique number. Raises BudgetExhausted if a finite budget runs out."""
    r = max_clique(g, Budget.unlimited() if budget is None else budget)
    if r.is_yes:
        return len(r.witness)
    raise BudgetExhausted(f"clique search stopped with a clique of size {len(r.payload)}")


def find_clique(g: Graph, size: int, budget: Budget | None = None) -> TriState:
    """Decide whether g has a clique of the given size."""
    cached = _CLIQUE_CACHE.get(g.key)
    if cached is not None:
        if len(cached) >= size:
            return TriState.yes(list(cached[:size]))
        return TriState.no(f"clique number {len(cached)} < {size}")
    budget = as_budget(budget)
    clique, finished = _clique_search(g, budget, stop_at=size)
    if len(clique) >= size:
        return TriState.yes(clique[:size])
    if finished:
        _CLIQUE_CACHE[g.key] = tuple(clique)
        return TriState.no(f"clique number {len(clique)} < {size}")
    return TriState.unknown(clique, "budget exhausted")


def _group_clique(atoms: tuple[Graph, ...]) -> list[np.ndarray]:
    """Clique of the product of the given atoms, as per-atom coordinate arrays."""
    g = complete_graph(1)
    for a in atoms:
        g = disjunctive_product(g, a)
    if g.n > GROUP_LIMIT:
        raise ValueError("group too large")
    clique = np.asarray(max_clique(g, Budget.unlimited()).witness, dtype=np.int64)
    coords = []
    rem = clique
    for a in reversed(atoms):
        coords.append(rem % a.n)
        rem = rem // a.n
    return coords[::-1]


def _term_clique(term: Term) -> list[np.ndarray]:
    """Large clique in a product of atoms, built from cliques of factor groups.

    A product of cliques is a clique, so grouping the atoms and multiplying
    exact clique numbers of the groups gives a lower bound on the clique number.
    Consecutive groups of sizes 1, 2 and 3 are tried and the best is kept.
    """
    atoms = term.atoms
    if not atoms:
        return []
    best = None
    best_size = 0
    for s in (1, 2, 3):
        groups = [list(range(i, min(i + s, len(atoms)))) for i in range(0, len(atoms), s)]
        try:
            parts = [(grp, _group_clique(tuple(atoms[j] for j in grp))) for grp in groups]
        except ValueError:
            continue
        size = 1
        for _, coords in parts:
            size *= len(coords[0])
        if size > best_size:
            best, best_size = parts, size
    # expand the product of group cliques into coordinates per atom
    lens = [len(c[0]) for _, c in best]
    grid = np.indices(lens).reshape(len(lens), -1)
    coords: list = [None] * len(atoms)
    for (grp, cs), sel in zip(best, grid):
        for j, c in zip(grp, cs):
            coords[j] = c[sel]
    return coords


def structured_clique(g: Graph) -> np.ndarray:
    """A clique of g found from its product/join structure (a lower bound)."""
    terms = g.terms()
    if terms is None:
        return np.zeros(0, dtype=np.int64)
    out = []
    for t in terms:
        coords = _term_clique(t)
        out.append(np.asarray(t.index(coords), dtype=np.int64).reshape(-1))
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


# colouring ---------------------------------------------------------------------

def _greedy_dsatur(nbl: list[list[int]]) -> list[int]:
    n = len(nbl)
    colour = [-1] * n
    sat = [set() for _ in range(n)]
    for _ in range(n):
        v = max((u for u in range(n) if colour[u] < 0), key=lambda u: (len(sat[u]), len(nbl[u]), -u))
        c = 0
        while c in sat[v]:
            c += 1
        colour[v] = c
        for w in nbl[v]:
            sat[w].add(c)
    return colour


def chromatic_number(g: Graph, budget: Budget | None = None) -> int:
    """Exact chromatic number by DSATUR branch and bound."""
    budget = Budget.unlimited() if budget is None else budget
    n = g.n
    if n == 0:
        return 0
    nbl = g.neighbor_lists()
    best_col = _greedy_dsatur(nbl)
    best = [max(best_col) + 1]
    lower = clique_number(g, budget.fresh())
    if lower == best[0]:
        return lower
    colour = [-1] * n
    exhausted = [False]

    def rec(k: int, used: int) -> None:
        if best[0] == lower or exhausted[0]:
            return
        if not budget.charge():
            exhausted[0] = True
            return
        if k == n:
            best[0] = used
            return
        v = -1
        key = None
        for u in range(n):
            if colour[u] < 0:
                s = len({colour[w] for w in nbl[u] if colour[w] >= 0})
                kk = (s, len(nbl[u]), -u)
                if key is None or kk > key:
                    key, v = kk, u
        forbidden = {colour[w] for w in nbl[v]}
        for c in range(used + 1):
            if c in forbidden:
                continue
            nu = max(used, c + 1)
            if nu >= best[0]:
                continue
            colour[v] = c
            rec(k + 1, nu)
            colour[v] = -1

    rec(0, 0)
    if exhausted[0]:
        raise BudgetExhausted(f"colouring search stopped between {lower} and {best[0]}")
    return best[0]


# homomorphisms -------------------------------------------------------------------

def _csp_hom(g: Graph, h: Graph, budget: Budget) -> TriState:
    """Backtracking with forward checking; variables chosen by smallest domain."""
    n = g.n
    gnb = g.neighbor_lists()
    hnb = h.neighbor_bits()
    full = (1 << h.n) - 1
    nonisolated = 0
    for j, b in enumerate(hnb):
        if b:
            nonisolated |= 1 << j
    dom = [nonisolated if gnb[v] else full for v in range(n)]
    # arc consistency: h must have a neighbour in the domain of each neighbour of v
    changed = True
    while changed:
        changed = False
        for v in range(n):
            if not gnb[v]:
                continue
            d = dom[v]
            keep = 0
            x = d
            while x:
                low = x & -x
                j = low.bit_length() - 1
                if all(hnb[j] & dom[u] for u in gnb[v]):
                    keep |= low
                x ^= low
            if keep != d:
                if keep == 0:
                    return TriState.no("arc consistency empties a domain")
                dom[v] = keep
                changed = True
    assign = [-1] * n
    deg = [len(x) for x in gnb]
    unassigned = set(range(n))

    def select() -> int:
        return min(unassigned, key=lambda u: (dom[u].bit_count(), -deg[u], u))

    trail: list[tuple[int, int]] = []
    v0 = select()
    unassigned.discard(v0)
    stack = [[v0, dom[v0], 0]]
    while stack:
        top = stack[-1]
        v, cand, tpos = top
        while len(trail) > tpos:
            u, old = trail.pop()
            dom[u] = old
        assign[v] = -1
        if cand == 0:
            stack.pop()
            unassigned.add(v)
            continue
        low = cand & -cand
        hv = low.bit_length() - 1
        top[1] = cand ^ low
        if not budget.charge() or not budget.depth_ok(len(stack)):
            return TriState.unknown(None, "budget exhausted")
        assign[v] = hv
        ok = True
        nbits = hnb[hv]
        for u in gnb[v]:
            if assign[u] < 0:
                d = dom[u]
                nd = d & nbits
                if nd != d:
                    trail.append((u, d))
                    dom[u] = nd
                    if nd == 0:
                        ok = False
                        break
        if not ok:
            continue
        if not unassigned:
            return TriState.yes(np.asarray(assign, dtype=np.int64))
        w = select()
        unassigned.discard(w)
        stack.append([w, dom[w], len(trail)])
    return TriState.no("exhaustive search")


def _atom_hom(a: Graph, b: Graph, budget: Budget, cache: dict) -> np.ndarray | None:
    key = (a.key, b.key)
    if key in cache:
        return cache[key]
    if a.key == b.key:
        res = np.arange(a.n, dtype=np.int64)
    else:
        r = hom_search(a, b, budget.fresh())
        res = r.witness.mapping if r.is_yes else None
    cache[key] = res
    return res


def _term_hom(s: Term, t: Term, budget: Budget, cache: dict):
    """Map a product of atoms into another; returns a function on coordinates."""
    if all(a.is_complete() for a in s.atoms):
        need = s.size
        ck = ("clique", tuple(a.key for a in t.atoms))
        if ck not in cache:
            cache[ck] = _term_clique(t) if t.atoms else []
        coords = cache[ck]
        have = len(coords[0]) if coords else 1
        if have >= need:
            def f(src_coords, coords=coords, s=s):
                lin = np.zeros(len(src_coords[0]) if src_coords else 1, dtype=np.int64)
                for c, a in zip(src_coords, s.atoms):
                    lin = lin * a.n + c
                return [c[lin] for c in coords]
            return f
    # match source atoms to distinct target atoms, identical atoms first
    m = len(s.atoms)
    choice: list[tuple[int, np.ndarray]] = []

    def rec(i: int, used: frozenset) -> bool:
        if i == m:
            return True
        a = s.atoms[i]
        order = sorted(range(len(t.atoms)), key=lambda j: (t.atoms[j].key != a.key, j))
        for j in order:
            if j in used:
                continue
            f = _atom_hom(a, t.atoms[j], budget, cache)
            if f is None:
                continue
            choice.append((j, f))
            if rec(i + 1, used | {j}):
                return True
            choice.pop()
        return False

    if not rec(0, frozenset()):
        return None

    def g(src_coords, choice=tuple(choice), t=t):
        length = len(src_coords[0]) if src_coords else 1
        out = [np.zeros(length, dtype=np.int64) for _ in t.atoms]
        for c, (j, f) in zip(src_coords, choice):
            out[j] = f[c]
        return out
    return g


def _structured_hom(g: Graph, h: Graph, budget: Budget) -> np.ndarray | None:
    """Homomorphism assembled term by term from the product/join structure.

    Source terms go to distinct target terms; vertices of distinct target
    terms are adjacent, so edges between source terms are preserved.
    """
    gt, ht = g.terms(), h.terms()
    if gt is None or ht is None:
        return None
    if len(gt) == 1 and len(ht) == 1 and len(gt[0].atoms) <= 1 and len(ht[0].atoms) <= 1:
        return None
    cache: dict = {}
    maps: list = []

    def rec(i: int, used: frozenset) -> bool:
        if i == len(gt):
            return True
        for j in range(len(ht)):
            if j in used:
                continue
            f = _term_hom(gt[i], ht[j], budget, cache)
            if f is None:
                continue
            maps.append((j, f))
            if rec(i + 1, used | {j}):
                return True
            maps.pop()
        return False

    if not rec(0, frozenset()):
        return None
    mapping = np.full(g.n, -1, dtype=np.int64)
    for term, (j, f) in zip(gt, maps):
        src_idx, coords = term.vertices()
        tgt_coords = f(coords)
        tgt_idx = np.asarray(ht[j].index(tgt_coords), dtype=np.int64)
        mapping[src_idx] = np.broadcast_to(tgt_idx, src_idx.shape)
    if (mapping < 0).any():
        return None
    return mapping


def hom_search(g: Graph, h: Graph, budget: Budget | None = None) -> TriState:
    """Search for a homomorphism g -> h.

    Yes carries a verified GraphHom; No carries a certificate string (an
    exhaustive search or a clique-number obstruction); Unknown means the budget
    ran out or the instance is too large for the exact methods.
    """
    budget = as_budget(budget)
    if g.n == 0:
        return TriState.yes(GraphHom(g, h, np.zeros(0, dtype=np.int64)))
    if h.n == 0:
        return TriState.no("target has no vertices")
    if not g.has_edges():
        return TriState.yes(GraphHom(g, h, np.zeros(g.n, dtype=np.int64)))
    if not h.has_edges():
        return TriState.no("source has an edge, target has none")

    def done(mapping) -> TriState:
        if not verify_hom(g, h, mapping):
            raise AssertionError("internal error: constructed map is not a homomorphism")
        return TriState.yes(GraphHom(g, h, np.asarray(mapping, dtype=np.int64)))

    if g.is_complete():
        need = g.n
        clique = structured_clique(h)
        if len(clique) >= need:
            return done(clique[:need])
        if h.n > MATERIALIZE_LIMIT:
            return TriState.unknown(None, f"target too large; structured clique has size {len(clique)}")
        r = find_clique(h, need, budget)
        if r.is_yes:
            return done(np.asarray(r.witness, dtype=np.int64))
        return r
    mapping = _structured_hom(g, h, budget)
    if mapping is not None:
        return done(mapping)
    if g.n > MATERIALIZE_LIMIT or h.n > MATERIALIZE_LIMIT:
        return TriState.unknown(None, "instance too large for exhaustive search")
    # cheap obstruction: a clique that does not fit
    small = Budget(nodes=20000)
    rg = max_clique(g, small)
    rh = max_clique(h, Budget(nodes=20000))
    if rg.is_yes and rh.is_yes and len(rg.witness) > len(rh.witness):
        return TriState.no(f"clique number {len(rg.witness)} > {len(rh.witness)}")
    r = _csp_hom(g, h, budget)
    if r.is_yes:
        return done(r.witness)
    return r
