"""Ordered vector spaces over Q given by rational cones.

A ``RationalCone`` is a finite union of cells, each cut out by nonstrict
(a.v >= 0) and strict (b.v > 0) homogeneous inequalities. Closing it under
limits gives a polyhedral cone (``PolyCone``); all rate and duality
computations happen on that closure with exact rational LPs.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .core import INF, Budget, MonoidInstance, RateInterval, TriState, check_guard
from .exact import (Vector, add, dot, in_span, nullspace, primitive, rank, scale, solve_unique,
                    sub, vec)
from .lp import linprog
from .polyhedra import PolyCone

DUAL_GUARD = 8


@dataclass(frozen=True)
class Cell:
    ge: tuple[Vector, ...] = ()
    gt: tuple[Vector, ...] = ()

    def contains(self, v: Sequence[Fraction]) -> bool:
        return all(dot(a, v) >= 0 for a in self.ge) and all(dot(b, v) > 0 for b in self.gt)

    def closure(self, d: int) -> PolyCone:
        return PolyCone.from_inequalities(d, list(self.ge) + list(self.gt))

    def is_empty(self, d: int) -> bool:
        """Strict cells may be empty; decided by an LP with b.v >= 1."""
        if not self.gt:
            return False
        a_ub = [tuple(-x for x in a) for a in self.ge] + [tuple(-x for x in b) for b in self.gt]
        b_ub = [0] * len(self.ge) + [-1] * len(self.gt)
        res = linprog([0] * d, a_ub, b_ub, free="all")
        return res.status == "infeasible"


class RationalCone:
    """Union of cells; validated to contain 0 and to be closed under addition."""

    def __init__(self, d: int, cells: Sequence[Cell], validate: bool = True, samples: int = 6):
        self.d = d
        self.cells = tuple(Cell(tuple(vec(a) for a in c.ge), tuple(vec(b) for b in c.gt)) for c in cells)
        for c in self.cells:
            for row in c.ge + c.gt:
                if len(row) != d:
                    raise ValueError(f"row {row} does not have dimension {d}")
        self._closure: PolyCone | None = None
        if validate:
            self._validate(samples)

    @classmethod
    def from_poly(cls, p: PolyCone) -> "RationalCone":
        ge = list(p.inequalities)
        for e in p.equalities:
            ge += [e, tuple(-x for x in e)]
        c = cls(p.d, [Cell(tuple(ge), ())], validate=False)
        c._closure = p
        return c

    @classmethod
    def from_generators(cls, d: int, rays, lineality=()) -> "RationalCone":
        return cls.from_poly(PolyCone.from_generators(d, rays, lineality))

    @classmethod
    def orthant(cls, d: int) -> "RationalCone":
        rows = [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
        return cls(d, [Cell(tuple(rows), ())], validate=False)

    @property
    def is_closed_polyhedral(self) -> bool:
        return len(self.cells) == 1 and not self.cells[0].gt

    def contains(self, v: Sequence) -> bool:
        v = vec(v)
        return any(c.contains(v) for c in self.cells)

    def _sample(self, cell: Cell, rng: random.Random) -> Vector:
        p = cell.closure(self.d)
        v = tuple(Fraction(0) for _ in range(self.d))
        for r in p.rays:
            v = add(v, scale(Fraction(rng.randint(1, 9), rng.randint(1, 4)), r))
        for l in p.lineality:
            v = add(v, scale(Fraction(rng.randint(-9, 9), rng.randint(1, 4)), l))
        return v

    def _probe_points(self, cell: Cell) -> list[Vector]:
        """A relative interior point pushed far along each generator direction."""
        p = cell.closure(self.d)
        centre = tuple(Fraction(0) for _ in range(self.d))
        for r in p.rays:
            centre = add(centre, r)
        dirs = p.rays + p.lineality + [tuple(-x for x in l) for l in p.lineality]
        return [centre] + [add(centre, scale(10, g)) for g in dirs]

    def _validate(self, samples: int) -> None:
        zero = tuple(Fraction(0) for _ in range(self.d))
        if not self.contains(zero):
            raise ValueError("cone does not contain the origin")
        rng = random.Random(0)
        live = [c for c in self.cells if not c.is_empty(self.d)]
        pts = {i: self._probe_points(c) + [self._sample(c, rng) for _ in range(samples)]
               for i, c in enumerate(live)}
        for i, c in enumerate(live):
            for v in pts[i]:
                if not c.contains(v):
                    raise AssertionError("internal error: sampled point outside its cell")
        for i in pts:
            for j in pts:
                if j < i:
                    continue
                for u in pts[i]:
                    for v in pts[j]:
                        if self.contains(add(u, v)):
                            continue
                        raise ValueError(f"not closed under addition: {u} + {v} leaves the cone")

    def __repr__(self) -> str:
        return f"RationalCone(d={self.d}, cells={len(self.cells)})"


def closure(cone) -> PolyCone:
    """The closed polyhedral cone of a RationalCone (or a PolyCone itself)."""
    if isinstance(cone, PolyCone):
        return cone
    if cone._closure is None:
        cone._closure = _close(cone)
    return cone._closure


def _close(cone: RationalCone) -> PolyCone:
    rays: list[Vector] = []
    lin: list[Vector] = []
    for c in cone.cells:
        if c.is_empty(cone.d):
            continue
        p = c.closure(cone.d)
        rays += p.rays
        lin += p.lineality
    hull = PolyCone.from_generators(cone.d, rays, lin).minimal_generators()
    # the union of the closed cells must already be convex
    rng = random.Random(1)
    gens = hull.rays + hull.lineality + [tuple(-x for x in l) for l in hull.lineality]
    closed_cells = [Cell(c.ge + c.gt, ()) for c in cone.cells if not c.is_empty(cone.d)]
    for _ in range(12):
        v = tuple(Fraction(0) for _ in range(cone.d))
        for g in gens:
            v = add(v, scale(Fraction(rng.randint(0, 5)), g))
        if not any(c.contains(v) for c in closed_cells):
            raise ValueError("closure of the cells is not convex; input is not a cone")
    return hull


def archimedeanize(cone) -> RationalCone:
    """Closure of the cone as a single closed polyhedral cell."""
    return RationalCone.from_poly(closure(cone))


@dataclass
class Quotient:
    dim: int
    projection: list[Vector]  # rows; kernel equals the lineality space
    cone: PolyCone

    def project(self, v: Sequence) -> Vector:
        v = vec(v)
        return tuple(dot(r, v) for r in self.projection)


def pointed_quotient(cone) -> Quotient:
    p = closure(cone)
    lin = p.lineality
    if not lin:
        rows = [tuple(Fraction(int(i == j)) for j in range(p.d)) for i in range(p.d)]
    else:
        rows = nullspace(lin, p.d)
    k = len(rows)
    rays = [primitive(tuple(dot(r, g) for r in rows)) for g in p.rays]
    img = PolyCone.from_generators(k, rays, [])
    return Quotient(k, rows, img)


def dual_rays(cone, guard: int = DUAL_GUARD) -> list[Vector]:
    p = closure(cone)
    check_guard(p.d, guard, "dual rays")
    return p.dual_rays()


def separate(cone, x: Sequence) -> Vector | None:
    """None when x lies in the closure, else f >= 0 on the cone with f.x < 0.

    The functional minimizes |f|_1 subject to f.x <= -1 and is returned as a
    primitive integer vector.
    """
    p = closure(cone)
    x = vec(x)
    if p.contains(x):
        return None
    d = p.d
    # variables f (free, d) and t (d) with -t <= f <= t; minimize sum t
    c = [0] * d + [1] * d
    a_ub, b_ub = [], []
    for r in p.rays:
        a_ub.append([-v for v in r] + [0] * d)
        b_ub.append(0)
    a_ub.append(list(x) + [0] * d)
    b_ub.append(-1)
    for i in range(d):
        row = [0] * (2 * d)
        row[i], row[d + i] = 1, -1
        a_ub.append(row)
        b_ub.append(0)
        row = [0] * (2 * d)
        row[i], row[d + i] = -1, -1
        a_ub.append(row)
        b_ub.append(0)
    a_eq = [list(l) + [0] * d for l in p.lineality]
    res = linprog(c, a_ub, b_ub, a_eq, [0] * len(a_eq), free=range(d))
    if res.status != "optimal":
        raise AssertionError("internal error: Farkas alternative failed")
    f = primitive(res.x[:d])
    assert dot(f, x) < 0 and all(dot(f, r) >= 0 for r in p.rays)
    return f


def _rmax_primal(p: PolyCone, x: Vector, y: Vector):
    rays, lin = p.rays, p.lineality
    nv = 1 + len(rays) + len(lin)
    c = [1] + [0] * (nv - 1)
    a_eq = []
    for i in range(p.d):
        a_eq.append([y[i]] + [r[i] for r in rays] + [l[i] for l in lin])
    free = range(1 + len(rays), nv)
    res = linprog(c, (), (), a_eq, list(x), free=free, maximize=True)
    if res.status == "unbounded":
        return INF
    if res.status != "optimal":
        raise AssertionError("internal error: beta = 0 should be feasible")
    return res.value


def _rmax_dual(p: PolyCone, x: Vector, y: Vector):
    best = INF
    for f in p.dual_rays():
        fy = dot(f, y)
        if fy > 0:
            q = dot(f, x) / fy
            if q < best:
                best = q
    return best


def rate_region_cone(cone, x: Sequence, y: Sequence) -> RateInterval:
    """Maximal regularized rate from x to y, computed by a primal LP and by
    dual rays, which must agree exactly. The minimal rate is 0."""
    p = closure(cone)
    x, y = vec(x), vec(y)
    if not (p.contains(x) and p.contains(y)):
        raise ValueError("x and y must lie in the closed cone")
    primal = _rmax_primal(p, x, y)
    dual = _rmax_dual(p, x, y)
    if primal != dual:
        raise AssertionError(f"rate duality violated: primal {primal} vs dual {dual}")
    return RateInterval(Fraction(0), primal, "minimal rate", "primal LP = dual rays")


def rmax(cone, x, y):
    return rate_region_cone(cone, x, y).upper


@dataclass
class NumericalReport:
    numerical: bool
    quotient_dim: int
    dual_ray_count: int
    embedding: Vector | None = None  # f with f(g) = 1
    unit: Vector | None = None  # the g used for normalization
    evidence: list = field(default_factory=list)  # (x, f(x), inf{l : l g >= x})


def _inf_lambda(p: PolyCone, g: Vector, x: Vector):
    """inf{l : l*g - x in the cone} by LP."""
    rays, lin = p.rays, p.lineality
    nv = 1 + len(rays) + len(lin)
    a_eq = [[g[i]] + [-r[i] for r in rays] + [-l[i] for l in lin] for i in range(p.d)]
    res = linprog([1] + [0] * (nv - 1), (), (), a_eq, list(x),
                  free=[0] + list(range(1 + len(rays), nv)))
    if res.status == "optimal":
        return res.value
    return -INF if res.status == "unbounded" else INF


def is_numerical(cone, guard: int = DUAL_GUARD) -> NumericalReport:
    """Whether the closure is totally ordered modulo its lineality space."""
    p = closure(cone)
    check_guard(p.d, guard, "is_numerical")
    q = pointed_quotient(p)
    if q.dim == 0:
        return NumericalReport(True, 0, 0, tuple(Fraction(0) for _ in range(p.d)), None)
    dq = q.cone.dual()
    rays, lin = dq.rays, dq.lineality
    if len(rays) != 1 or lin:
        return NumericalReport(False, q.dim, len(rays))
    f0 = rays[0]
    f = tuple(sum((f0[k] * q.projection[k][i] for k in range(q.dim)), Fraction(0)) for i in range(p.d))
    g = next(r for r in p.rays if dot(f, r) > 0)
    emb = scale(1 / dot(f, g), f)
    evidence = []
    for i in range(p.d):
        e = tuple(Fraction(int(i == j)) for j in range(p.d))
        evidence.append((e, dot(emb, e), _inf_lambda(p, g, e)))
    return NumericalReport(True, q.dim, 1, emb, g, evidence)


def reciprocal_rate_check(cone, samples: Sequence[Sequence]) -> list[dict]:
    """R_max(x->y) * R_max(y->x) for sample pairs; it is 1 on numerical cones."""
    numerical = is_numerical(cone).numerical
    out = []
    pts = [vec(s) for s in samples]
    for i, x in enumerate(pts):
        for y in pts[i:]:
            a, b = rmax(cone, x, y), rmax(cone, y, x)
            if a == INF or b == INF:
                continue
            prod = a * b
            out.append({"x": x, "y": y, "product": prod,
                        "ok": prod == 1 if numerical else prod <= 1})
    return out


def interior_point_check(cone, g: Sequence) -> bool:
    """g + eps*(+-e_i) stays in the cone for some eps > 0, for every i."""
    p = closure(cone)
    g = vec(g)
    if not p.contains(g):
        return False
    rows = p.inequalities
    if p.equalities:
        return False
    tight = [a for a in rows if dot(a, g) == 0]
    for i in range(p.d):
        for s in (1, -1):
            if any(s * a[i] < 0 for a in tight):
                return False
    return True


def order_unit_check(cone, g: Sequence, vectors: Sequence[Sequence]) -> bool:
    """For each v there is a rational l with v + l*g in the cone."""
    p = closure(cone)
    g = vec(g)
    for v in vectors:
        if _inf_lambda(p, g, tuple(-x for x in vec(v))) == INF:
            return False
    return True


def gauge_forms(cone, g: Sequence) -> list[Vector]:
    """Linear forms whose maximum is p(z) = inf{mu : mu*g - z in the cone}.

    Requires g in the interior of a full-dimensional closed cone.
    """
    p = closure(cone)
    g = vec(g)
    if p.equalities:
        raise ValueError("cone is not full-dimensional")
    forms = []
    for h in p.inequalities:
        hg = dot(h, g)
        if hg <= 0:
            raise ValueError("g is not an interior point")
        forms.append(scale(1 / hg, h))
    return forms


def _gauge(forms, z) -> Fraction:
    return max(dot(a, z) for a in forms)


def _sup_f_minus_p(forms, basis, values, shift) -> object:
    """sup over c of f(Bc) - p(Bc + shift); -inf never happens, +inf on unboundedness."""
    k = len(basis)
    # variables c (free, k) and s (free): maximize values.c - s, s >= a.(Bc + shift)
    obj = list(values) + [-1]
    a_ub, b_ub = [], []
    for a in forms:
        coeffs = [dot(a, basis[j]) for j in range(k)]
        a_ub.append(coeffs + [-1])
        b_ub.append(-dot(a, shift) if shift is not None else 0)
    res = linprog(obj, a_ub, b_ub, free="all", maximize=True)
    if res.status == "unbounded":
        return INF
    return res.value


def hahn_banach_extend(forms: Sequence[Sequence], subspace_basis: Sequence[Sequence],
                       f_values: Sequence, full_basis: Sequence[Sequence] | None = None) -> Vector:
    """Extend f (given on a subspace basis) to all of Q^d with f <= p.

    p(z) = max_i forms[i].z. Directions from full_basis are added one at a
    time; each new value is the midpoint of the exact interval [L, U] with
    U = inf_x p(x + y) - f(x) and L = sup_x f(x) - p(x - y).
    """
    forms = [vec(a) for a in forms]
    if not forms:
        raise ValueError("need at least one linear form")
    d = len(forms[0])
    basis = [vec(b) for b in subspace_basis]
    values = [Fraction(v) for v in f_values]
    if len(basis) != len(values):
        raise ValueError("one value per basis vector")
    if basis and rank(basis, d) != len(basis):
        raise ValueError("subspace basis is not linearly independent")
    zero = tuple(Fraction(0) for _ in range(d))
    if basis and _sup_f_minus_p(forms, basis, values, zero) > 0:
        raise ValueError("f is not dominated by p on the subspace")
    if full_basis is None:
        full_basis = [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
    for y in (vec(b) for b in full_basis):
        if in_span(y, basis):
            continue
        if basis:
            upper = -_sup_f_minus_p(forms, basis, values, y)
            neg_y = tuple(-t for t in y)
            lower = _sup_f_minus_p(forms, basis, values, neg_y)
        else:
            upper = _gauge(forms, y)
            lower = -_gauge(forms, tuple(-t for t in y))
        if lower > upper:
            raise AssertionError("internal error: empty extension interval")
        v = (lower + upper) / 2
        basis.append(y)
        values.append(v)
    if len(basis) != d:
        raise ValueError("full basis does not span the space")
    return solve_unique(basis, values)


def domination_certificate(forms: Sequence[Sequence], f: Sequence) -> tuple[Fraction, ...] | None:
    """Convex weights l with f = sum l_i forms[i], proving f <= max_i forms[i]."""
    forms = [vec(a) for a in forms]
    f = vec(f)
    d = len(f)
    a_eq = [[a[i] for a in forms] for i in range(d)] + [[1] * len(forms)]
    b_eq = list(f) + [1]
    res = linprog([0] * len(forms), (), (), a_eq, b_eq)
    return res.x if res.status == "optimal" else None


def decompose_functional(cone, f: Sequence) -> list[tuple[Fraction, Vector]]:
    """f as a nonnegative combination of dual extreme rays (plus any part
    vanishing on the cone, which is returned with the zero coefficient list)."""
    p = closure(cone)
    f = vec(f)
    if not (all(dot(f, r) >= 0 for r in p.rays) and all(dot(f, l) == 0 for l in p.lineality)):
        raise ValueError("f is not in the dual cone")
    dual = p.dual()
    rays, lin = dual.rays, dual.lineality
    nv = len(rays) + len(lin)
    a_eq = [[r[i] for r in rays] + [l[i] for l in lin] for i in range(p.d)]
    res = linprog([0] * nv, (), (), a_eq, list(f), free=range(len(rays), nv))
    if res.status != "optimal":
        raise AssertionError("internal error: dual membership without decomposition")
    out = [(res.x[i], rays[i]) for i in range(len(rays)) if res.x[i] != 0]
    rest = [(res.x[len(rays) + j], lin[j]) for j in range(len(lin)) if res.x[len(rays) + j] != 0]
    return out + rest


class ConeInstance(MonoidInstance):
    """Q^d ordered by a cone: x >= y iff x - y lies in the cone."""

    name = "cone"
    complete = True

    def __init__(self, cone):
        self.cone = cone
        self.d = cone.d

    @property
    def zero(self) -> Vector:
        return tuple(Fraction(0) for _ in range(self.d))

    def combine(self, x, y) -> Vector:
        return add(vec(x), vec(y))

    def geq(self, x, y, budget: Budget | None = None) -> TriState:
        diff = sub(vec(x), vec(y))
        if self.cone.contains(diff):
            return TriState.yes(diff)
        return TriState.no("difference outside the cone")

    def canonical(self, x):
        return vec(x)


def sqrt2_convergents(k: int) -> list[Fraction]:
    """First k continued-fraction convergents of sqrt(2): 1, 3/2, 7/5, ..."""
    out, p, q = [], 1, 1
    for _ in range(k):
        out.append(Fraction(p, q))
        p, q = p + 2 * q, p + q
    return out


def irrational_slope_demo(k: int = 8) -> list[dict]:
    """Rational stand-ins for the cone |l*a + b| <= c with l = sqrt(2).

    That cone has no rational description. For each convergent l_k the cone
    is polyhedral and everything is exact, but the primitive dual rays grow
    in height without bound and the rate from (0,0,1) to (1,0,2), which is
    1/(2 + l_k), approaches the irrational 1/(2 + sqrt(2)). No finite rational computation
    reaches the limit; the report shows how the certificates degrade.
    """
    rows = []
    x, y = (0, 0, 1), (1, 0, 2)
    for lam in sqrt2_convergents(k):
        ineqs = [(-lam, -1, 1), (lam, 1, 1)]
        p = PolyCone.from_inequalities(3, ineqs)
        rays = p.dual_rays()
        rows.append({
            "lambda": lam,
            "dual_rays": rays,
            "height": max(abs(v) for r in rays for v in r),
            "rmax": rmax(p, x, y),
            "error": abs(float(lam) - 2 ** 0.5),
        })
    return rows
