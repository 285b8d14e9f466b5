"""Discrete memoryless channels with exact rational transition matrices.

A channel is stored row-major with one row per input symbol: ``m[a][b]`` is
the probability of output b given input a. P >= Q when Q = dec o P o enc for
some stochastic encoder and decoder.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .core import Budget, MalformedInput, MonoidInstance, TriState, as_budget
from .exact import fmt, frac
from .graphs import Graph, GraphHom, disjunctive_product, hom_search, verify_hom
from .lp import linprog

Matrix = tuple[tuple[Fraction, ...], ...]


class StochasticChannel:
    __slots__ = ("matrix",)

    def __init__(self, rows: Sequence[Sequence]):
        m = tuple(tuple(frac(x) for x in row) for row in rows)
        if not m or not m[0]:
            raise ValueError("channel needs at least one input and one output")
        width = len(m[0])
        for a, row in enumerate(m):
            if len(row) != width:
                raise ValueError(f"row {a} has {len(row)} entries, expected {width}")
            if any(x < 0 or x > 1 for x in row):
                raise ValueError(f"row {a} has an entry outside [0, 1]")
            if sum(row) != 1:
                raise ValueError(f"row {a} sums to {sum(row)}")
        self.matrix: Matrix = m

    @property
    def inputs(self) -> int:
        return len(self.matrix)

    @property
    def outputs(self) -> int:
        return len(self.matrix[0])

    def __call__(self, b: int, a: int) -> Fraction:
        """P(b|a)."""
        return self.matrix[a][b]

    def __eq__(self, other) -> bool:
        return isinstance(other, StochasticChannel) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self) -> str:
        rows = "; ".join(" ".join(str(x) for x in r) for r in self.matrix)
        return f"StochasticChannel({self.inputs}x{self.outputs}: {rows})"

    def as_float(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.matrix])


def identity(n: int) -> StochasticChannel:
    return StochasticChannel([[int(a == b) for b in range(n)] for a in range(n)])


def trivial() -> StochasticChannel:
    return identity(1)


def constant(inputs: int, output_dist: Sequence) -> StochasticChannel:
    return StochasticChannel([list(output_dist)] * inputs)


def deterministic(mapping: Sequence[int], outputs: int) -> StochasticChannel:
    return StochasticChannel([[int(b == f) for b in range(outputs)] for f in mapping])


def bsc(p) -> StochasticChannel:
    p = frac(p)
    return StochasticChannel([[1 - p, p], [p, 1 - p]])


def typewriter(n: int) -> StochasticChannel:
    """Input a goes to a or a+1 (mod n), each with probability 1/2."""
    h = Fraction(1, 2)
    return StochasticChannel([[h * ((b == a) + (b == (a + 1) % n)) for b in range(n)]
                              for a in range(n)])


def random_channel(inputs: int, outputs: int, rng: random.Random, zero_prob: float = 0.4,
                   denom: int = 6) -> StochasticChannel:
    """Random rational channel; entries are zero with probability ``zero_prob``."""
    rows = []
    for _ in range(inputs):
        w = [0 if rng.random() < zero_prob else rng.randint(1, denom) for _ in range(outputs)]
        if not any(w):
            w[rng.randrange(outputs)] = 1
        s = sum(w)
        rows.append([Fraction(x, s) for x in w])
    return StochasticChannel(rows)


def tensor(p: StochasticChannel, q: StochasticChannel) -> StochasticChannel:
    """Parallel use; input (a, c) is index a*|C| + c, output (b, d) is b*|D| + d."""
    return StochasticChannel([[x * y for x in pr for y in qr]
                              for pr in p.matrix for qr in q.matrix])


def _matmul(a: Matrix, b: Matrix) -> list[list[Fraction]]:
    cols = list(zip(*b))
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols] for row in a]


def compose(a: StochasticChannel, b: StochasticChannel) -> StochasticChannel:
    """a o b: feed the output of b into a."""
    if b.outputs != a.inputs:
        raise ValueError(f"cannot compose: inner alphabets {b.outputs} and {a.inputs} differ")
    return StochasticChannel(_matmul(b.matrix, a.matrix))


def _check_shapes(p, q, enc, dec) -> None:
    if enc.inputs != q.inputs or enc.outputs != p.inputs:
        raise ValueError("encoder must map inputs of Q to inputs of P")
    if dec.inputs != p.outputs or dec.outputs != q.outputs:
        raise ValueError("decoder must map outputs of P to outputs of Q")


def verify_conversion(p: StochasticChannel, q: StochasticChannel, enc: StochasticChannel,
                      dec: StochasticChannel) -> bool:
    """Exact test of Q = dec o P o enc."""
    _check_shapes(p, q, enc, dec)
    return compose(dec, compose(p, enc)) == q


def distinguishability_graph(p: StochasticChannel) -> Graph:
    """Inputs adjacent when their output distributions have disjoint supports."""
    supp = np.array([[x > 0 for x in row] for row in p.matrix], dtype=bool)
    overlap = (supp.astype(np.int64) @ supp.T.astype(np.int64)) > 0
    adj = ~overlap
    np.fill_diagonal(adj, False)
    n = p.inputs
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if adj[u, v]])


def induced_hom(p: StochasticChannel, q: StochasticChannel, enc: StochasticChannel,
                dec: StochasticChannel) -> GraphHom:
    """Homomorphism f(Q) -> f(P) sending c to the least a with enc(a|c) > 0."""
    if not verify_conversion(p, q, enc, dec):
        raise ValueError("(enc, dec) does not convert P into Q")
    mapping = np.array([next(a for a, x in enumerate(row) if x > 0) for row in enc.matrix],
                       dtype=np.int64)
    hom = GraphHom(distinguishability_graph(q), distinguishability_graph(p), mapping)
    if not hom.verify():
        raise AssertionError("internal error: induced map is not a homomorphism")
    return hom


def _fit(fixed: Matrix, q: Matrix, side: str) -> tuple[Fraction, list[list[Fraction]]]:
    """Stochastic X minimizing the L1 residual of fixed.X - Q (side "right")
    or X.fixed - Q (side "left"). Returns (residual, X)."""
    nc, nd = len(q), len(q[0])
    if side == "right":
        rows, cols = len(fixed[0]), nd
    else:
        rows, cols = nc, len(fixed)
    nx = rows * cols
    nt = nc * nd
    a_ub, b_ub = [], []
    for c in range(nc):
        for d in range(nd):
            coef = [Fraction(0)] * (nx + nt)
            if side == "right":
                for b in range(rows):
                    coef[b * cols + d] = fixed[c][b]
            else:
                for a in range(cols):
                    coef[c * cols + a] = fixed[a][d]
            t = nx + c * nd + d
            plus = coef[:]
            plus[t] = Fraction(-1)
            minus = [-x for x in coef]
            minus[t] = Fraction(-1)
            a_ub += [plus, minus]
            b_ub += [q[c][d], -q[c][d]]
    a_eq, b_eq = [], []
    for r in range(rows):
        row = [Fraction(0)] * (nx + nt)
        for k in range(cols):
            row[r * cols + k] = Fraction(1)
        a_eq.append(row)
        b_eq.append(1)
    res = linprog([0] * nx + [1] * nt, a_ub, b_ub, a_eq, b_eq)
    x = [list(res.x[r * cols:(r + 1) * cols]) for r in range(rows)]
    return res.value, x


@dataclass
class ConversionWitness:
    enc: StochasticChannel
    dec: StochasticChannel


def _try_encoder(p, q, enc_rows) -> ConversionWitness | None:
    ep = _matmul(enc_rows, p.matrix)
    res, dec = _fit(tuple(map(tuple, ep)), q.matrix, "right")
    if res == 0:
        w = ConversionWitness(StochasticChannel(enc_rows), StochasticChannel(dec))
        if verify_conversion(p, q, w.enc, w.dec):
            return w
    return None


def conversion_search(p: StochasticChannel, q: StochasticChannel, restarts: int = 8,
                      iterations: int = 10, seed: int = 0, budget: Budget | None = None
                      ) -> TriState:
    """Look for (enc, dec) with Q = dec o P o enc.

    Encoders built from graph homomorphisms f(Q) -> f(P) are tried first, each
    with an exact LP for the decoder. Then seeded random deterministic
    encoders start an alternating descent on the L1 residual, each half step
    an exact LP. Yes only with an exactly verified witness. No only when the
    distinguishability graphs admit no homomorphism, which is a necessary
    condition for any conversion.
    """
    budget = as_budget(budget)
    if p == q:
        return TriState.yes(ConversionWitness(identity(p.inputs), identity(p.outputs)))
    gq, gp = distinguishability_graph(q), distinguishability_graph(p)
    h = hom_search(gq, gp, budget.fresh())
    if h.is_no:
        return TriState.no(f"necessary condition fails: no homomorphism of distinguishability "
                           f"graphs ({h.certificate})")
    tried = set()
    candidates = []
    if h.is_yes:
        candidates.append(tuple(int(v) for v in h.witness.mapping))
    rng = random.Random(seed)
    for _ in range(restarts):
        candidates.append(tuple(rng.randrange(p.inputs) for _ in range(q.inputs)))
    for cand in candidates:
        if cand in tried:
            continue
        tried.add(cand)
        if not budget.charge():
            return TriState.unknown(None, "budget exhausted")
        enc = [[Fraction(int(a == m)) for a in range(p.inputs)] for m in cand]
        # a deterministic encoder can only work if it is a graph hom; others
        # are still useful as starting points for the descent
        if verify_hom(gq, gp, cand):
            w = _try_encoder(p, q, enc)
            if w:
                return TriState.yes(w)
        for _ in range(iterations):
            if not budget.charge():
                return TriState.unknown(None, "budget exhausted")
            ep = tuple(map(tuple, _matmul(enc, p.matrix)))
            res, dec = _fit(ep, q.matrix, "right")
            if res == 0:
                w = ConversionWitness(StochasticChannel(enc), StochasticChannel(dec))
                if verify_conversion(p, q, w.enc, w.dec):
                    return TriState.yes(w)
            pd = tuple(map(tuple, _matmul(p.matrix, dec)))
            res2, enc2 = _fit(pd, q.matrix, "left")
            if res2 == 0:
                w = ConversionWitness(StochasticChannel(enc2), StochasticChannel(dec))
                if verify_conversion(p, q, w.enc, w.dec):
                    return TriState.yes(w)
            if res2 >= res and enc2 == enc:
                break
            enc = enc2
    return TriState.unknown(None, f"no witness after {len(tried)} starts")


class ChannelInstance(MonoidInstance):
    name = "channel"
    complete = False  # conversion_search can only refute via graphs

    def __init__(self, restarts: int = 8, iterations: int = 10, seed: int = 0):
        self.restarts, self.iterations, self.seed = restarts, iterations, seed

    @property
    def zero(self) -> StochasticChannel:
        return trivial()

    def combine(self, x, y) -> StochasticChannel:
        return tensor(x, y)

    def geq(self, x, y, budget: Budget | None = None) -> TriState:
        return conversion_search(x, y, self.restarts, self.iterations, self.seed, budget)

    def verify(self, x, y, witness) -> bool:
        return verify_conversion(x, y, witness.enc, witness.dec)

    def combine_witness(self, x1, y1, w1, x2, y2, w2):
        return ConversionWitness(tensor(w1.enc, w2.enc), tensor(w1.dec, w2.dec))


def channel_to_json(p: StochasticChannel) -> dict:
    return {"inputs": p.inputs, "outputs": p.outputs,
            "matrix": [[fmt(x) for x in row] for row in p.matrix]}


def channel_from_json(doc) -> StochasticChannel:
    """Accepts a dict or JSON text: {"inputs": n, "outputs": m, "matrix": [[...], ...]}."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as e:
            raise MalformedInput(f"invalid JSON: {e.msg}", e.lineno) from None
    if not isinstance(doc, dict) or "matrix" not in doc:
        raise MalformedInput("channel document needs a 'matrix' field")
    try:
        p = StochasticChannel(doc["matrix"])
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise MalformedInput(f"bad channel matrix: {e}") from None
    if doc.get("inputs", p.inputs) != p.inputs or doc.get("outputs", p.outputs) != p.outputs:
        raise MalformedInput("declared alphabet sizes do not match the matrix")
    return p
