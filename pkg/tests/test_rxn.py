import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from remono.core import Budget, MalformedInput
from remono.exact import dot, in_span
from remono.rxn import (Multiset, ReactionInstance, ReactionSystem, apply_sequence, atom_vectors,
                        conservation_laws, functional_order_leq, monotone_rays, parse_formula,
                        parse_multiset, parse_reactions, reachable_leq)

CHEM = parse_reactions("""
# combustion and zinc in acid
CH4 + 2 O2 -> CO2 + 2 H2O
Zn + 2HCl -> ZnCl2 + H2
""")


def test_parsing():
    assert parse_multiset("2H2O + O2 + H2O") == Multiset({"H2O": 3, "O2": 1})
    assert parse_multiset("0") == Multiset()
    assert CHEM.species == ("CH4", "O2", "CO2", "H2O", "HCl", "Zn", "H2", "ZnCl2")
    assert parse_formula("ZnCl2") == {"Zn": 1, "Cl": 2}


@pytest.mark.parametrize("text,line", [
    ("A -> B\nA + -> B\n", 2),
    ("A -> B -> C\n", 1),
    ("\n\nA => B\n", 3),
    ("0A -> B\n", 1),
])
def test_parse_errors_have_line_numbers(text, line):
    with pytest.raises(MalformedInput) as exc:
        parse_reactions(text)
    assert exc.value.line == line


def test_declared_species_enforced():
    with pytest.raises(MalformedInput):
        parse_reactions("species: A, B\nA -> C\n")


def test_reach_examples():
    x = parse_multiset("CH4 + 2 O2 + Zn + 2 HCl")
    y = parse_multiset("CO2 + 2 H2O + ZnCl2 + H2")
    r = reachable_leq(CHEM, x, y)
    assert r.is_yes and apply_sequence(CHEM, x, r.witness) == y
    assert reachable_leq(CHEM, x, x).witness == []
    empty = ReactionSystem([], ["A", "B"])
    assert reachable_leq(empty, Multiset({"A": 1}), Multiset({"B": 1})).is_no


def test_reach_bounds_give_unknown():
    sys = parse_reactions("A -> 2 A")
    r = reachable_leq(sys, Multiset({"A": 1}), Multiset({"B": 1}), max_molecules=5)
    assert r.is_unknown
    r = reachable_leq(CHEM, parse_multiset("CH4 + 2 O2"), parse_multiset("CO2 + 2 H2O"),
                      Budget(depth=0))
    assert r.is_unknown


def test_conservation_examples():
    laws = conservation_laws(CHEM)
    h = atom_vectors(CHEM)["H"]
    assert in_span(h, laws)
    x = parse_multiset("CH4 + 2 O2 + Zn + 2 HCl")
    assert dot(h, CHEM.vector(x)) == 6
    assert len(conservation_laws(ReactionSystem([], ["A", "B", "C"]))) == 3
    (f,) = conservation_laws(parse_reactions("A -> B"))
    assert f[0] == f[1] != 0


def test_atom_counts_are_conserved():
    for e, v in atom_vectors(CHEM).items():
        assert in_span(v, conservation_laws(CHEM)), e


def test_monotone_examples():
    m = monotone_rays(ReactionSystem([], ["A", "B"]))
    assert not m.rays and len(m.lineality) == 2
    m = monotone_rays(parse_reactions("2 A -> B"))
    for f in m.generators():
        assert 2 * f[0] - f[1] >= 0
    m = monotone_rays(CHEM)
    for law in conservation_laws(CHEM):
        assert in_span(law, m.lineality)


def test_functional_order_examples():
    assert functional_order_leq(CHEM, parse_multiset("H2O"), parse_multiset("H2O")).holds
    r = functional_order_leq(CHEM, parse_multiset("H2O"), parse_multiset("H2"))
    assert not r.holds
    sp = CHEM.with_species(["H2O", "H2"])
    diff = tuple(a - b for a, b in zip(sp.vector(parse_multiset("H2O")), sp.vector(parse_multiset("H2"))))
    assert dot(r.separator, diff) < 0
    assert all(dot(r.separator, d) >= 0 for d in sp.differences())


SPECIES = ["A", "B", "C"]
terms = st.dictionaries(st.sampled_from(SPECIES), st.integers(1, 2), max_size=2).map(Multiset)
systems = st.lists(st.tuples(terms, terms), min_size=1, max_size=3).map(
    lambda rs: parse_reactions("species: A, B, C\n" + "\n".join(f"{l!r} -> {r!r}" for l, r in rs)))


@given(systems, terms, terms)
def test_reach_soundness(sys, x, y):
    r = reachable_leq(sys, x, y, Budget(nodes=2000), max_molecules=8)
    if r.is_yes:
        assert apply_sequence(sys, x, r.witness) == y
        assert functional_order_leq(sys, x, y).holds
    if not functional_order_leq(sys, x, y).holds:
        assert not r.is_yes


@given(systems)
def test_laws_and_rays_certify(sys):
    for f in conservation_laws(sys):
        for rx in sys.reactions:
            assert dot(f, sys.vector(rx.lhs)) == dot(f, sys.vector(rx.rhs))
    m = monotone_rays(sys)
    for f in m.rays:
        assert all(dot(f, d) >= 0 for d in sys.differences())


@given(systems, terms, terms)
def test_separators_verify(sys, x, y):
    r = functional_order_leq(sys, x, y)
    s = sys.with_species(list(x) + list(y))
    diff = tuple(a - b for a, b in zip(s.vector(x), s.vector(y)))
    if r.holds:
        total = [sum((c * d[i] for c, d in zip(r.combination, s.differences())), F(0))
                 for i in range(len(s.species))]
        assert tuple(total) == diff
    else:
        assert dot(r.separator, diff) < 0
        assert all(dot(r.separator, d) >= 0 for d in s.differences())


def test_instance_witness_combination():
    inst = ReactionInstance(CHEM)
    x1, y1 = parse_multiset("CH4 + 2 O2"), parse_multiset("CO2 + 2 H2O")
    x2, y2 = parse_multiset("Zn + 2 HCl"), parse_multiset("ZnCl2 + H2")
    w1, w2 = inst.geq(x1, y1).witness, inst.geq(x2, y2).witness
    w = inst.combine_witness(x1, y1, w1, x2, y2, w2)
    assert inst.verify(x1 + x2, y1 + y2, w)
