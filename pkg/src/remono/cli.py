"""Command-line front end.

Exit codes: 0 computed (or true), 1 false/refuted, 2 unknown or out of
budget, 64 usage error, 65 malformed input.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from . import channels as ch
from . import cone as cn
from . import major as mj
from . import numsg as ns
from . import rxn
from .core import (INF, Budget, BudgetExhausted, GuardExceeded, MalformedInput, TriState,
                   rate_bounds, slice_points)
from .exact import fmt, frac, vec
from .graphs import (Graph, GraphInstance, capacity_bounds, chromatic_number, clique_number,
                     complete_graph, cycle_graph, disjunctive_product, distribute_catalyst,
                     empty_graph, format_dimacs, fractional_chromatic, hom_search, join,
                     lovasz_complement, parse_dimacs, path_graph, power)
from .polyhedra import PolyCone

EXIT_OK, EXIT_FALSE, EXIT_UNKNOWN, EXIT_USAGE, EXIT_MALFORMED = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class Approx:
    """A floating value together with its tolerance."""

    def __init__(self, value: float, tol: float):
        self.value, self.tol = float(value), float(tol)

    def __str__(self) -> str:
        return _float_str(self.value)


def _float_str(x: float) -> str:
    if x == INF:
        return "inf"
    return f"{x:.10g}"


def to_json(obj) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return fmt(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Approx):
        return {"value": _float_str(obj.value) if obj.value == INF else obj.value, "tol": obj.tol}
    if isinstance(obj, float):
        return "inf" if obj == INF else ("-inf" if obj == -INF else obj)
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [to_json(v) for v in sorted(obj)]
    if isinstance(obj, np.ndarray):
        return [to_json(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple)):
        return [to_json(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc) -> str:
    return json.dumps(to_json(doc), sort_keys=True)


def _human(obj) -> str:
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, float):
        return _float_str(obj)
    if isinstance(obj, (set, frozenset)):
        return "{" + ",".join(_human(v) for v in sorted(obj)) + "}"
    if isinstance(obj, np.ndarray):
        return _human(obj.tolist())
    if isinstance(obj, (list, tuple)):
        return "(" + ", ".join(_human(v) for v in obj) + ")"
    return str(obj)


# ---------------------------------------------------------------- input readers

def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise MalformedInput(f"cannot read {path}: {e.strerror}") from None


def parse_vector(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(frac(t.strip()) for t in text.split(",") if t.strip())
    except (ValueError, ZeroDivisionError, TypeError) as e:
        raise MalformedInput(f"bad rational vector {text!r}: {e}") from None


def parse_vectors(text: str) -> list[tuple[Fraction, ...]]:
    return [parse_vector(part) for part in text.split(";") if part.strip()]


def graph_from_json(doc) -> Graph:
    """{"vertices": n, "edges": [[u, v], ...]} with 0-based vertices."""
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise MalformedInput("graph document needs 'vertices' and 'edges'")
    n = doc["vertices"]
    edges = doc.get("edges", [])
    try:
        if not isinstance(n, int) or n < 0:
            raise ValueError("'vertices' must be a nonnegative integer")
        for e in edges:
            if len(e) != 2 or not all(isinstance(v, int) and 0 <= v < n for v in e):
                raise ValueError(f"bad edge {e}")
        return Graph.from_edges(n, [tuple(e) for e in edges])
    except (ValueError, TypeError) as e:
        raise MalformedInput(str(e)) from None


def graph_to_json(g: Graph) -> dict:
    return {"vertices": g.n, "edges": g.edges().tolist() if g.n else []}


def load_graph_file(path: str) -> Graph:
    text = _read(path)
    if text.lstrip().startswith("{"):
        return graph_from_json(_load_json(text))
    return parse_dimacs(text)


_GRAPH_TOKEN = re.compile(r"\s*(@[^\s()*+^]+|[KCEP]\d+|\d+|[()*+^])")


def parse_graph_spec(spec: str) -> Graph:
    """K<n>, C<n>, E<n> (edgeless), P<n> (path), @file; '*' product,
    '^k' power, '+' join, parentheses."""
    pos, toks = 0, []
    spec = spec.strip()
    while pos < len(spec):
        m = _GRAPH_TOKEN.match(spec, pos)
        if not m:
            raise MalformedInput(f"cannot parse graph {spec!r} at position {pos}")
        toks.append(m.group(1))
        pos = m.end()
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def take():
        nonlocal i
        i += 1
        return toks[i - 1]

    def base() -> Graph:
        t = take() if peek() is not None else None
        if t is None:
            raise MalformedInput(f"unexpected end of graph {spec!r}")
        if t == "(":
            g = join_expr()
            if peek() != ")":
                raise MalformedInput(f"unbalanced parentheses in {spec!r}")
            take()
            return g
        if t.startswith("@"):
            return load_graph_file(t[1:])
        kind, n = t[0], t[1:]
        if not n.isdigit() or kind not in "KCEP":
            raise MalformedInput(f"unknown graph {t!r}")
        n = int(n)
        if kind == "K":
            return complete_graph(n)
        if kind == "E":
            return empty_graph(n)
        if kind == "P":
            return path_graph(n)
        if n < 3:
            raise MalformedInput("cycles need at least 3 vertices")
        return cycle_graph(n)

    def atom() -> Graph:
        g = base()
        if peek() == "^":
            take()
            k = take() if peek() else ""
            if not k.isdigit():
                raise MalformedInput(f"expected an exponent in {spec!r}")
            g = power(g, int(k))
        return g

    def prod_expr() -> Graph:
        g = atom()
        while peek() == "*":
            take()
            g = disjunctive_product(g, atom())
        return g

    def join_expr() -> Graph:
        parts = [prod_expr()]
        while peek() == "+":
            take()
            parts.append(prod_expr())
        return parts[0] if len(parts) == 1 else join(*parts)

    g = join_expr()
    if peek() is not None:
        raise MalformedInput(f"trailing input in graph {spec!r}")
    return g


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"invalid JSON: {e.msg}", e.lineno) from None


def cone_from_json(doc) -> cn.RationalCone:
    """{"dim": d, "cells": [{"ge": [[...], ...], "gt": [[...], ...]}, ...]}."""
    if not isinstance(doc, dict) or "dim" not in doc or "cells" not in doc:
        raise MalformedInput("cone document needs 'dim' and 'cells'")
    try:
        cells = [cn.Cell(tuple(vec(r) for r in c.get("ge", [])), tuple(vec(r) for r in c.get("gt", [])))
                 for c in doc["cells"]]
        return cn.RationalCone(int(doc["dim"]), cells)
    except (ValueError, TypeError, ZeroDivisionError, AttributeError) as e:
        raise MalformedInput(f"bad cone: {e}") from None


def cone_to_json(p: PolyCone) -> dict:
    ge = list(p.inequalities)
    for e in p.equalities:
        ge += [e, tuple(-x for x in e)]
    return {"dim": p.d, "cells": [{"ge": ge, "gt": []}]}


def load_cone(path: str) -> cn.RationalCone:
    return cone_from_json(_load_json(_read(path)))


_CHANNEL_NAME = re.compile(r"(id|typewriter)(\d+)\Z|bsc:(.+)\Z")


def load_channel(spec: str) -> ch.StochasticChannel:
    """A channel document path, or one of id<n>, typewriter<n>, bsc:<p>."""
    m = _CHANNEL_NAME.match(spec)
    if m and not os.path.exists(spec):
        try:
            if m.group(1) == "id":
                return ch.identity(int(m.group(2)))
            if m.group(1) == "typewriter":
                return ch.typewriter(int(m.group(2)))
            return ch.bsc(m.group(3))
        except (ValueError, ZeroDivisionError) as e:
            raise MalformedInput(f"bad channel {spec!r}: {e}") from None
    return ch.channel_from_json(_read(spec))


def load_distribution(text: str) -> mj.Distribution:
    if os.path.exists(text):
        doc = _load_json(_read(text))
        if not isinstance(doc, list):
            raise MalformedInput("distribution document must be a list of rationals")
        text = ",".join(str(x) for x in doc)
    try:
        return mj.Distribution(parse_vector(text))
    except ValueError as e:
        raise MalformedInput(str(e)) from None


def load_system(path: str) -> rxn.ReactionSystem:
    return rxn.parse_reactions(_read(path))


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise MalformedInput(f"expected comma-separated integers, got {text!r}") from None


def _parse_t(text: str):
    if text.lower() in ("inf", "infinity"):
        return math.inf
    try:
        return frac(text)
    except ValueError as e:
        raise MalformedInput(str(e)) from None


# ---------------------------------------------------------------- results

class Result:
    def __init__(self, command: str, data: dict, lines: Sequence[str], verdict: str = "computed"):
        self.command = command
        self.data = data
        self.lines = list(lines)
        self.verdict = verdict  # computed | true | false | unknown

    @property
    def code(self) -> int:
        return {"computed": EXIT_OK, "true": EXIT_OK, "false": EXIT_FALSE,
                "unknown": EXIT_UNKNOWN}[self.verdict]

    def document(self) -> dict:
        return {"command": self.command, "verdict": self.verdict, "result": self.data}


def _tri(t: TriState) -> str:
    return "true" if t.is_yes else "false" if t.is_no else "unknown"


def _budget(args) -> Budget:
    return Budget(args.budget_nodes, args.budget_depth)


# ---------------------------------------------------------------- graph

def _graph_arg(args, attr: str = "graph") -> Graph:
    spec = getattr(args, attr, None)
    if spec is None and getattr(args, "file", None):
        return load_graph_file(args.file)
    if spec is None:
        raise UsageError("a graph (or --file) is required")
    return parse_graph_spec(spec)


def cmd_graph_invariants(args) -> Result:
    g = _graph_arg(args)
    budget = _budget(args)
    data: dict = {"vertices": g.n, "edges": g.num_edges()}
    lines = [f"vertices {g.n}", f"edges {g.num_edges()}"]
    verdict = "computed"
    try:
        data["clique_number"] = clique_number(g, budget)
        data["chromatic_number"] = chromatic_number(g, budget.fresh())
        lines += [f"clique number {data['clique_number']}",
                  f"chromatic number {data['chromatic_number']}"]
    except BudgetExhausted as e:
        lines.append(f"budget exhausted: {e}")
        verdict = "unknown"
    try:
        cf = fractional_chromatic(g)
        data["fractional_chromatic"] = cf
        lines.append(f"fractional chromatic number {cf}")
    except GuardExceeded as e:
        lines.append(f"fractional chromatic number skipped: {e}")
    try:
        th = lovasz_complement(g, args.tol)
        data["theta_complement"] = Approx(th.value, max(th.upper - th.lower, 0.0))
        data["theta_interval"] = [Approx(th.lower, args.tol), Approx(th.upper, args.tol)]
        lines.append(f"theta of complement {_float_str(th.value)} in "
                     f"[{_float_str(th.lower)}, {_float_str(th.upper)}]")
    except GuardExceeded as e:
        lines.append(f"theta skipped: {e}")
    return Result("graph invariants", data, lines, verdict)


def cmd_graph_hom(args) -> Result:
    g, h = parse_graph_spec(args.source), parse_graph_spec(args.target)
    r = hom_search(g, h, _budget(args))
    data = {"exists": _tri(r)}
    if r.is_yes:
        data["mapping"] = r.witness.mapping
        lines = ["homomorphism found", "mapping " + " ".join(str(int(v)) for v in r.witness.mapping)]
    elif r.is_no:
        data["certificate"] = str(r.certificate)
        lines = [f"no homomorphism: {r.certificate}"]
    else:
        data["note"] = r.note
        lines = [f"unknown: {r.note}"]
    return Result("graph hom", data, lines, _tri(r))


def cmd_graph_product(args) -> Result:
    gs = [parse_graph_spec(s) for s in args.graphs]
    g = gs[0]
    for h in gs[1:]:
        g = disjunctive_product(g, h)
    return Result("graph product", {"graph": graph_to_json(g)}, format_dimacs(g).splitlines())


def cmd_graph_capacity(args) -> Result:
    g = _graph_arg(args)
    r = capacity_bounds(g, args.max_power, args.tol)
    data = {"lower": Approx(r.lower, args.tol), "upper": Approx(r.upper, args.tol),
            "lower_source": r.lower_source, "upper_source": r.upper_source}
    lines = [f"lower = {_float_str(r.lower)} ({r.lower_source})",
             f"upper = {_float_str(r.upper)} ({r.upper_source})"]
    return Result("graph capacity", data, lines)


def cmd_graph_catalyst(args) -> Result:
    x, y = parse_graph_spec(args.x), parse_graph_spec(args.y)
    n = args.n
    r = hom_search(power(y, n), power(x, n), _budget(args))
    if not r.is_yes:
        msg = f"no hom from {n} copies of y to {n} copies of x: " + (str(r.certificate) if r.is_no else r.note)
        return Result("graph catalyst", {"power_hom": _tri(r)}, [msg], _tri(r))
    res = distribute_catalyst(x, y, n, r.witness.mapping)
    data = {"catalyst_vertices": res.catalyst.n, "source_vertices": res.source.n,
            "target_vertices": res.target.n, "verified": res.verified}
    lines = [f"catalyst with {res.catalyst.n} vertices",
             f"hom y+z -> x+z on {res.source.n} -> {res.target.n} vertices",
             f"verified {res.verified}"]
    if args.mapping_out:
        with open(args.mapping_out, "w", encoding="utf-8") as fh:
            fh.write(" ".join(str(int(v)) for v in res.mapping) + "\n")
    return Result("graph catalyst", data, lines, "computed" if res.verified else "false")


# ---------------------------------------------------------------- cone

def cmd_cone_contains(args) -> Result:
    c = load_cone(args.cone)
    inside = c.contains(parse_vector(args.x))
    return Result("cone contains", {"contains": inside}, [str(inside).lower()],
                  "true" if inside else "false")


def cmd_cone_close(args) -> Result:
    p = cn.closure(load_cone(args.cone))
    lines = ["closure inequalities:"] + ["  " + _human(r) + " >= 0" for r in p.inequalities]
    lines += ["  " + _human(e) + " = 0" for e in p.equalities]
    return Result("cone close", {"cone": cone_to_json(p)}, lines)


def cmd_cone_dual(args) -> Result:
    rays = cn.dual_rays(load_cone(args.cone))
    return Result("cone dual", {"rays": rays}, ["dual rays:"] + ["  " + _human(r) for r in rays])


def cmd_cone_separate(args) -> Result:
    f = cn.separate(load_cone(args.cone), parse_vector(args.x))
    if f is None:
        return Result("cone separate", {"separator": None}, ["in closure"], "true")
    return Result("cone separate", {"separator": f}, ["separator " + _human(f)], "false")


def cmd_cone_rate(args) -> Result:
    c = load_cone(args.cone)
    r = cn.rate_region_cone(c, parse_vector(args.x), parse_vector(args.y))
    up = r.upper
    return Result("cone rate", {"rmin": r.lower, "rmax": up},
                  [f"Rmax = {_human(up) if up != INF else 'inf'}", f"Rmin = {r.lower}"])


def cmd_cone_numerical(args) -> Result:
    rep = cn.is_numerical(load_cone(args.cone))
    data = {"numerical": rep.numerical, "quotient_dim": rep.quotient_dim,
            "dual_rays": rep.dual_ray_count, "embedding": rep.embedding}
    lines = [f"numerical {str(rep.numerical).lower()}", f"quotient dimension {rep.quotient_dim}"]
    if rep.embedding is not None:
        lines.append("embedding " + _human(rep.embedding))
    return Result("cone numerical", data, lines, "true" if rep.numerical else "false")


def cmd_cone_extend(args) -> Result:
    forms = parse_vectors(args.forms)
    basis = parse_vectors(args.basis) if args.basis else []
    values = parse_vector(args.values) if args.values else ()
    try:
        f = cn.hahn_banach_extend(forms, basis, values)
    except ValueError as e:
        raise MalformedInput(str(e)) from None
    cert = cn.domination_certificate(forms, f)
    return Result("cone extend", {"functional": f, "certificate": cert},
                  ["extension " + _human(f), "dominated " + str(cert is not None).lower()])


# ---------------------------------------------------------------- rxn

def _multiset(text: str) -> rxn.Multiset:
    return rxn.parse_multiset(text)


def cmd_rxn_reach(args) -> Result:
    s = load_system(args.system)
    x, y = _multiset(args.x), _multiset(args.y)
    r = rxn.reachable_leq(s, x, y, _budget(args), args.max_molecules)
    data = {"reachable": _tri(r)}
    if r.is_yes:
        data["sequence"] = r.witness
        lines = ["reachable", "sequence " + (" ".join(map(str, r.witness)) or "(empty)")]
        lines += ["  " + repr(s.reactions[i]) for i in r.witness]
    else:
        note = str(r.certificate) if r.is_no else r.note
        data["note"] = note
        lines = [("not reachable: " if r.is_no else "unknown: ") + note]
    return Result("rxn reach", data, lines, _tri(r))


def cmd_rxn_laws(args) -> Result:
    s = load_system(args.system)
    laws = rxn.conservation_laws(s)
    lines = ["species " + " ".join(s.species)] + ["  " + _human(v) for v in laws]
    return Result("rxn laws", {"species": list(s.species), "laws": laws}, lines)


def cmd_rxn_monotones(args) -> Result:
    s = load_system(args.system)
    m = rxn.monotone_rays(s)
    lines = ["species " + " ".join(s.species), "rays:"] + ["  " + _human(v) for v in m.rays]
    lines += ["conserved (both signs):"] + ["  " + _human(v) for v in m.lineality]
    return Result("rxn monotones", {"species": list(s.species), "rays": m.rays,
                                    "lineality": m.lineality}, lines)


def cmd_rxn_forder(args) -> Result:
    s = load_system(args.system)
    x, y = _multiset(args.x), _multiset(args.y)
    r = rxn.functional_order_leq(s, x, y)
    sp = s.with_species(list(x) + list(y)).species
    if r.holds:
        return Result("rxn forder", {"holds": True, "combination": r.combination},
                      ["true", "reaction multiplicities " + _human(r.combination)], "true")
    return Result("rxn forder", {"holds": False, "species": list(sp), "separator": r.separator},
                  ["false", "separating monotone " + _human(r.separator)], "false")


# ---------------------------------------------------------------- channel

def cmd_channel_graph(args) -> Result:
    g = ch.distinguishability_graph(load_channel(args.channel))
    return Result("channel graph", {"graph": graph_to_json(g)}, format_dimacs(g).splitlines())


def cmd_channel_verify(args) -> Result:
    p, q = load_channel(args.p), load_channel(args.q)
    enc, dec = load_channel(args.enc), load_channel(args.dec)
    try:
        ok = ch.verify_conversion(p, q, enc, dec)
    except ValueError as e:
        raise MalformedInput(str(e)) from None
    return Result("channel verify", {"valid": ok}, [str(ok).lower()], "true" if ok else "false")


def cmd_channel_search(args) -> Result:
    p, q = load_channel(args.p), load_channel(args.q)
    r = ch.conversion_search(p, q, args.restarts, args.iterations, args.seed, _budget(args))
    data: dict = {"convertible": _tri(r)}
    if r.is_yes:
        data["enc"] = ch.channel_to_json(r.witness.enc)
        data["dec"] = ch.channel_to_json(r.witness.dec)
        lines = ["convertible", "enc " + _human(r.witness.enc.matrix),
                 "dec " + _human(r.witness.dec.matrix)]
    else:
        note = str(r.certificate) if r.is_no else r.note
        data["note"] = note
        lines = [note]
    return Result("channel search", data, lines, _tri(r))


def cmd_channel_tensor(args) -> Result:
    t = ch.tensor(load_channel(args.p), load_channel(args.q))
    return Result("channel tensor", {"channel": ch.channel_to_json(t)},
                  [" ".join(str(x) for x in row) for row in t.matrix])


# ---------------------------------------------------------------- major

def cmd_major_leq(args) -> Result:
    p, q = load_distribution(args.p), load_distribution(args.q)
    v = mj.major_leq(p, q)
    return Result("major leq", {"majorizes": v}, [str(v).lower()], "true" if v else "false")


def cmd_major_renyi(args) -> Result:
    p = load_distribution(args.p)
    t = _parse_t(args.t)
    h = mj.renyi(p, t)
    return Result("major renyi", {"t": "inf" if t == math.inf else t, "entropy": Approx(h, 1e-12)},
                  [f"H_{args.t} = {_float_str(h)}"])


def cmd_major_rate(args) -> Result:
    p, q = load_distribution(args.p), load_distribution(args.q)
    b = mj.rate_upper_renyi(p, q)
    inst = mj.MajorInstance()
    sl = slice_points(inst, p, q, args.n_max, args.m_max, _budget(args), args.jobs)
    slopes = sl.slopes()
    best = max(slopes) if slopes else Fraction(0)
    data = {"upper": Approx(b.value, args.tol), "t": "inf" if b.t == math.inf else b.t,
            "slice_lower": best}
    lines = [f"upper = {_float_str(b.value)} at t = {_float_str(b.t)}",
             f"best slice slope up to n = {args.n_max}: {best}"]
    return Result("major rate", data, lines)


# ---------------------------------------------------------------- numsg

def cmd_numsg_normalize(args) -> Result:
    try:
        s = ns.normalize(_ints(args.gen))
    except ValueError as e:
        raise MalformedInput(str(e)) from None
    return Result("numsg normalize", {"d": s.d, "generators": s.generators, "normalized": s.normalized},
                  [f"d={s.d}; normalized {{{','.join(map(str, s.normalized))}}}"])


def cmd_numsg_gaps(args) -> Result:
    try:
        s = ns.normalize(_ints(args.gen))
    except ValueError as e:
        raise MalformedInput(str(e)) from None
    g, frob = ns.gaps(s)
    return Result("numsg gaps", {"d": s.d, "normalized": s.normalized, "gaps": g, "frobenius": frob},
                  [f"d={s.d}; gaps {{{','.join(map(str, sorted(g)))}}}; frobenius {frob}"])


# ---------------------------------------------------------------- rate

def _instance(args):
    """(instance, element parser, functionals) for --instance."""
    kind = args.instance
    if kind == "major":
        return mj.MajorInstance(), load_distribution, [mj.renyi_functional(t) for t in (0, 1, math.inf)]
    if kind == "graph":
        return GraphInstance(), parse_graph_spec, []
    if kind == "cone":
        if not args.cone:
            raise UsageError("--instance cone needs --cone")
        c = load_cone(args.cone)
        fs = []
        for r in cn.dual_rays(c):
            f = (lambda v, r=r: sum((a * b for a, b in zip(r, v)), Fraction(0)))
            f.__name__ = "dual ray " + _human(r)
            fs.append(f)
        return cn.ConeInstance(c), parse_vector, fs
    if kind == "rxn":
        if not args.system:
            raise UsageError("--instance rxn needs --system")
        s = load_system(args.system)
        return rxn.ReactionInstance(s), _multiset, []
    if kind == "channel":
        return ch.ChannelInstance(), load_channel, []
    raise UsageError(f"unknown instance {kind}")


def cmd_rate_slice(args) -> Result:
    inst, parse, _ = _instance(args)
    x, y = parse(args.x), parse(args.y)
    sl = slice_points(inst, x, y, args.n_max, args.m_max, _budget(args), args.jobs)
    pts = sorted(sl.points)
    data = {"points": pts, "refuted": sorted(sl.refuted), "unknown": sorted(sl.unknown),
            "slopes": sl.slopes()}
    lines = [f"witnessed {len(pts)}, refuted {len(sl.refuted)}, unknown {len(sl.unknown)}",
             "slopes " + " ".join(str(s) for s in sl.slopes())]
    return Result("rate slice", data, lines, "unknown" if sl.unknown else "computed")


def cmd_rate_bounds(args) -> Result:
    inst, parse, fs = _instance(args)
    x, y = parse(args.x), parse(args.y)
    r = rate_bounds(inst, x, y, args.n_max, fs, _budget(args))
    up = Approx(r.upper, args.tol) if isinstance(r.upper, float) else r.upper
    data = {"lower": r.lower, "upper": up, "lower_source": r.lower_source,
            "upper_source": r.upper_source}
    lines = [f"lower = {r.lower} ({r.lower_source})", f"upper = {_human(r.upper)} ({r.upper_source})"]
    return Result("rate bounds", data, lines)


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--budget-nodes", type=int, default=10**6)
    common.add_argument("--budget-depth", type=int, default=None)
    common.add_argument("--tol", type=float, default=1e-6)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--format", choices=("human", "machine"), default="human")

    top = _Parser(prog="remono", description="Resource-monotone conversion tools.")
    groups = top.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def sub(group, name, func, help_text):
        p = group.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    g = groups.add_parser("graph", help="graphs under the disjunctive product").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    p = sub(g, "invariants", cmd_graph_invariants, "clique, chromatic, fractional, theta")
    p.add_argument("graph", nargs="?")
    p.add_argument("--file")
    p = sub(g, "hom", cmd_graph_hom, "homomorphism search")
    p.add_argument("source")
    p.add_argument("target")
    p = sub(g, "product", cmd_graph_product, "disjunctive product")
    p.add_argument("graphs", nargs="+")
    p = sub(g, "capacity", cmd_graph_capacity, "rate bounds to K2")
    p.add_argument("graph", nargs="?")
    p.add_argument("--file")
    p.add_argument("--max-power", type=int, default=2)
    p = sub(g, "catalyst", cmd_graph_catalyst, "catalyst from an n-copy hom")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--mapping-out")

    c = groups.add_parser("cone", help="rational cones").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    for name, func, extra in (("contains", cmd_cone_contains, ["x"]), ("close", cmd_cone_close, []),
                              ("dual", cmd_cone_dual, []), ("separate", cmd_cone_separate, ["x"]),
                              ("rate", cmd_cone_rate, ["x", "y"]),
                              ("numerical", cmd_cone_numerical, [])):
        p = sub(c, name, func, name)
        p.add_argument("--cone", required=True)
        for e in extra:
            p.add_argument(f"--{e}", required=True)
    p = sub(c, "extend", cmd_cone_extend, "Hahn-Banach extension")
    p.add_argument("--forms", required=True, help="gauge forms, ';'-separated vectors")
    p.add_argument("--basis", default="", help="subspace basis, ';'-separated vectors")
    p.add_argument("--values", default="", help="values of f on the basis")

    r = groups.add_parser("rxn", help="reaction networks").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    for name, func, xy in (("reach", cmd_rxn_reach, True), ("laws", cmd_rxn_laws, False),
                           ("monotones", cmd_rxn_monotones, False), ("forder", cmd_rxn_forder, True)):
        p = sub(r, name, func, name)
        p.add_argument("--system", required=True)
        if xy:
            p.add_argument("--x", required=True)
            p.add_argument("--y", required=True)
        if name == "reach":
            p.add_argument("--max-molecules", type=int, default=None)

    h = groups.add_parser("channel", help="stochastic channels").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    p = sub(h, "graph", cmd_channel_graph, "distinguishability graph")
    p.add_argument("--channel", required=True)
    p = sub(h, "verify", cmd_channel_verify, "check Q = dec o P o enc")
    for a in ("p", "q", "enc", "dec"):
        p.add_argument(f"--{a}", required=True)
    p = sub(h, "search", cmd_channel_search, "search for enc/dec")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p = sub(h, "tensor", cmd_channel_tensor, "parallel channel")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)

    m = groups.add_parser("major", help="majorization").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    p = sub(m, "leq", cmd_major_leq, "does P majorize Q")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p = sub(m, "renyi", cmd_major_renyi, "Renyi entropy")
    p.add_argument("--p", required=True)
    p.add_argument("--t", required=True)
    p = sub(m, "rate", cmd_major_rate, "Renyi rate bound and slice slopes")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--m-max", type=int, default=None)

    n = groups.add_parser("numsg", help="numerical semigroups").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    for name, func in (("normalize", cmd_numsg_normalize), ("gaps", cmd_numsg_gaps)):
        p = sub(n, name, func, name)
        p.add_argument("--gen", required=True)

    rt = groups.add_parser("rate", help="generic rate tools").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    for name, func in (("slice", cmd_rate_slice), ("bounds", cmd_rate_bounds)):
        p = sub(rt, name, func, name)
        p.add_argument("--instance", required=True, choices=("major", "graph", "cone", "rxn", "channel"))
        p.add_argument("--x", required=True)
        p.add_argument("--y", required=True)
        p.add_argument("--n-max", type=int, default=4)
        p.add_argument("--cone")
        p.add_argument("--system")
        if name == "slice":
            p.add_argument("--m-max", type=int, default=None)
    return top


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "m_max", "absent") is None:
            args.m_max = 2 * args.n_max
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        res = args.func(args)
    except UsageError as e:
        print(str(e), file=err)
        return EXIT_USAGE
    except MalformedInput as e:
        print(f"malformed input: {e}", file=err)
        return EXIT_MALFORMED
    except GuardExceeded as e:
        print(f"size guard: {e}", file=err)
        return EXIT_UNKNOWN
    except BudgetExhausted as e:
        print(f"budget exhausted: {e}", file=err)
        return EXIT_UNKNOWN
    except ValueError as e:
        print(f"invalid input: {e}", file=err)
        return EXIT_MALFORMED
    if args.format == "machine":
        print(dumps(res.document()), file=out)
    else:
        for line in res.lines:
            print(line, file=out)
    return res.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
