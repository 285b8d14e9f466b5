"""Numerical and exact graph invariants used as monotones and rate bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..core import Budget, GuardExceeded, RateInterval, check_guard
from ..lp import linprog
from .graph import Graph, power
from .search import chromatic_number, clique_number

FRACTIONAL_GUARD = 30
LOVASZ_GUARD = 30


def maximal_independent_sets(g: Graph) -> list[int]:
    """All maximal independent sets as bitsets (Bron-Kerbosch with pivoting)."""
    n = g.n
    nb = g.neighbor_bits()
    full = (1 << n) - 1
    non = [full & ~nb[v] & ~(1 << v) for v in range(n)]  # non-neighbours
    out: list[int] = []

    def bk(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(r)
            return
        px = p | x
        u = (px & -px).bit_length() - 1
        best = -1
        y = px
        while y:
            low = y & -y
            w = low.bit_length() - 1
            c = (p & non[w]).bit_count()
            if c > best:
                best, u = c, w
            y ^= low
        cand = p & ~non[u]
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            bk(r | low, p & non[v], x & non[v])
            p &= ~low
            x |= low
            cand ^= low

    bk(0, full, 0)
    return sorted(out)


def fractional_chromatic(g: Graph, guard: int = FRACTIONAL_GUARD) -> Fraction:
    """Exact fractional chromatic number: min sum w_I over maximal independent
    sets I with every vertex covered at least once."""
    check_guard(g.n, guard, "fractional chromatic number")
    if g.n == 0:
        return Fraction(0)
    sets = maximal_independent_sets(g)
    a_ub = []
    for v in range(g.n):
        a_ub.append([-1 if (s >> v) & 1 else 0 for s in sets])
    res = linprog([1] * len(sets), a_ub, [-1] * g.n)
    assert res.status == "optimal"
    return res.value


@dataclass(frozen=True)
class LovaszResult:
    """Theta of the complement with a certified enclosure [lower, upper].

    ``upper`` is the largest eigenvalue of a dual feasible matrix and
    ``lower`` the objective of a primal feasible matrix, both evaluated in
    floating point.
    """
    value: float
    lower: float
    upper: float
    iterations: int
    converged: bool


def _lovasz_barrier(a: np.ndarray, tol: float, max_iter: int = 2000) -> LovaszResult:
    """min t s.t. tI - J - Y >= 0, Y supported on non-adjacent pairs.

    Barrier method on the dual with Newton steps. The primal matrix is
    recovered from the last Newton step, which satisfies the trace and
    zero-pattern constraints exactly; its PSD defect is repaired by mixing in
    a multiple of the identity.
    """
    n = a.shape[0]
    if n == 1:
        return LovaszResult(1.0, 1.0, 1.0, 0, True)
    iu, ju = np.triu_indices(n, 1)
    free = ~a[iu, ju]
    fi, fj = iu[free], ju[free]
    m = len(fi)
    jmat = np.ones((n, n))
    eye = np.eye(n)

    def s_of(t, y):
        s = t * eye - jmat
        s[fi, fj] -= y
        s[fj, fi] -= y
        return s

    t = n + 1.0
    y = np.zeros(m)
    mu = 1.0
    it = 0
    last_step = None
    converged = True
    while True:
        for _ in range(60):
            it += 1
            s = s_of(t, y)
            w = np.linalg.inv(s)
            w = (w + w.T) / 2
            g = np.empty(m + 1)
            g[0] = 1 - mu * np.trace(w)
            g[1:] = 2 * mu * w[fi, fj]
            hess = np.empty((m + 1, m + 1))
            w2 = w @ w
            hess[0, 0] = np.trace(w2)
            hess[0, 1:] = hess[1:, 0] = -2 * w2[fi, fj]
            if m:
                hess[1:, 1:] = 2 * (w[np.ix_(fi, fi)] * w[np.ix_(fj, fj)]
                                    + w[np.ix_(fi, fj)] * w[np.ix_(fj, fi)])
            hess *= mu
            d = -np.linalg.solve(hess, g)
            last_step = (w, d)
            dec = -g @ d
            f0 = t - mu * np.linalg.slogdet(s)[1]
            step = 1.0
            while True:
                tn, yn = t + step * d[0], y + step * d[1:]
                sn = s_of(tn, yn)
                try:
                    np.linalg.cholesky(sn)
                    f1 = tn - mu * np.linalg.slogdet(sn)[1]
                    if f1 <= f0 + 0.25 * step * (g @ d):
                        break
                except np.linalg.LinAlgError:
                    pass
                step *= 0.5
                if step < 1e-14:
                    break
            t, y = tn, yn
            if dec / 2 < 1e-11:
                break
        if n * mu < tol * 1e-2 or it > max_iter:
            converged = it <= max_iter
            break
        mu *= 0.1
    s = s_of(t, y)
    dual = jmat.copy()
    dual[fi, fj] += y
    dual[fj, fi] += y
    upper = float(np.linalg.eigvalsh(dual)[-1])
    # primal recovery from the Newton step
    w, d = last_step
    ds = d[0] * eye
    ds[fi, fj] -= d[1:]
    ds[fj, fi] -= d[1:]
    x = mu * (w - w @ ds @ w)
    x = (x + x.T) / 2
    x[fi, fj] = 0
    x[fj, fi] = 0
    x /= np.trace(x)
    lam = float(np.linalg.eigvalsh(x)[0])
    if lam < 0:
        # X + c I stays feasible after renormalizing the trace
        c = -lam * (1 + 1e-12)
        x = (x + c * eye) / (1 + n * c)
    lower = float(x.sum())
    lower = min(lower, upper)
    return LovaszResult((lower + upper) / 2, lower, upper, it, converged and upper - lower <= tol)


def lovasz_complement(g: Graph, tol: float = 1e-6, guard: int = LOVASZ_GUARD) -> LovaszResult:
    """Lovasz theta of the complement of g (sandwiched between omega and chi)."""
    check_guard(g.n, guard, "Lovasz theta")
    if g.n == 0:
        return LovaszResult(0.0, 0.0, 0.0, 0, True)
    return _lovasz_barrier(g.adjacency, tol)


@dataclass(frozen=True)
class SandwichReport:
    omega: int
    theta: LovaszResult
    chi: int
    tol: float

    @property
    def ok(self) -> bool:
        return self.omega <= self.theta.upper + self.tol and self.theta.lower <= self.chi + self.tol


def sandwich_check(g: Graph, tol: float = 1e-6, budget: Budget | None = None,
                   guard: int = LOVASZ_GUARD) -> SandwichReport:
    w = clique_number(g, budget)
    th = lovasz_complement(g, tol, guard)
    c = chromatic_number(g, budget)
    return SandwichReport(w, th, c, tol)


def capacity_bounds(g: Graph, max_power: int, tol: float = 1e-6,
                    guard: int = LOVASZ_GUARD) -> RateInterval:
    """Bounds on the regularized rate from g to K2 (a Shannon-capacity proxy).

    lower = max over n <= max_power of log2(omega(g^n)) / n,
    upper = min(log2 theta(complement g), log2 chi_f(g)).
    """
    if g.n == 0 or not g.has_edges():
        raise ValueError("graph has no edge: the regularized rate relation does not apply")
    lower = 0.0
    lower_src = ""
    for n in range(1, max_power + 1):
        w = clique_number(power(g, n))
        v = math.log2(w) / n
        if v > lower:
            lower, lower_src = v, f"clique number of power {n}"
    th = lovasz_complement(g, tol, guard)
    upper = math.log2(th.upper)
    upper_src = "Lovasz theta"
    try:
        cf = fractional_chromatic(g)
        if math.log2(cf) < upper:
            upper, upper_src = math.log2(cf), "fractional chromatic number"
    except GuardExceeded:
        pass
    return RateInterval(lower, upper, lower_src, upper_src, tol)
