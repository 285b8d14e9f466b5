import io
import json
import math
from fractions import Fraction as F

import pytest

from remono import channels as ch
from remono.cli import cone_from_json, graph_from_json, parse_graph_spec, run
from remono.graphs import cycle_graph, format_dimacs, isomorphic

CHEM = """# water and hydrogen peroxide
2H2 + O2 -> 2H2O
H2 + O2 -> H2O2
"""


@pytest.fixture
def files(tmp_path):
    (tmp_path / "c5.graph").write_text(format_dimacs(cycle_graph(5)))
    (tmp_path / "orthant2.cone").write_text(json.dumps(
        {"dim": 2, "cells": [{"ge": [["1", "0"], ["0", "1"]], "gt": []}]}))
    (tmp_path / "nonarch.cone").write_text(json.dumps(
        {"dim": 2, "cells": [{"gt": [[1, 0]]}, {"ge": [[1, 0], [-1, 0], [0, 1], [0, -1]]}]}))
    (tmp_path / "chem.rxn").write_text(CHEM)
    (tmp_path / "bad.rxn").write_text("2H2 + O2 -> 2H2O\nH2 + -> \n")
    (tmp_path / "bad.cone").write_text('{"dim": 2,\n "cells": [}')
    return tmp_path


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def machine(*argv):
    code, out, _ = cli(*argv, "--format", "machine")
    return code, json.loads(out)


def test_capacity_example(files):
    code, doc = machine("graph", "capacity", "--file", files / "c5.graph", "--max-power", 2)
    assert code == 0
    r = doc["result"]
    target = math.log2(math.sqrt(5))
    assert abs(r["lower"]["value"] - target) < 1e-4 and abs(r["upper"]["value"] - target) < 1e-4
    assert "tol" in r["upper"]


def test_numsg_example():
    code, out, _ = cli("numsg", "gaps", "--gen", "9,15")
    assert code == 0 and out.strip() == "d=3; gaps {1,2,4,7}; frobenius 7"


def test_cone_rate_example(files):
    code, out, _ = cli("cone", "rate", "--cone", files / "orthant2.cone", "--x", "2,1", "--y", "1,1")
    assert code == 0 and out.splitlines()[0] == "Rmax = 1"


def test_verdict_exit_codes(files):
    assert cli("cone", "contains", "--cone", files / "nonarch.cone", "--x", "1,-5")[0] == 0
    assert cli("cone", "contains", "--cone", files / "nonarch.cone", "--x", "0,1")[0] == 1
    assert cli("major", "leq", "--p", "1", "--q", "1/2,1/2")[0] == 0
    assert cli("major", "leq", "--p", "1/2,1/2", "--q", "1")[0] == 1
    assert cli("graph", "hom", "K3", "C5")[0] == 1
    assert cli("graph", "hom", "C5", "K3")[0] == 0
    code, out, _ = cli("rxn", "reach", "--system", files / "chem.rxn", "--x", "3H2 + 2O2",
                       "--y", "2H2O + H2O2")
    assert code == 0 and out.startswith("reachable")


def test_unknown_and_budget_exit_code(files):
    code, _, _ = cli("rxn", "reach", "--system", files / "chem.rxn", "--x", "30H2 + 20O2",
                     "--y", "H2O2 + 40O2", "--budget-nodes", 5)
    assert code == 2


def test_usage_errors():
    assert cli()[0] == 64
    assert cli("graph", "frobnicate")[0] == 64
    assert cli("numsg", "gaps", "--gen", "9,15", "--bogus")[0] == 64
    assert cli("numsg", "gaps", "--gen", "9,15", "--jobs", 0)[0] == 64


def test_malformed_inputs(files):
    code, _, err = cli("rxn", "laws", "--system", files / "bad.rxn")
    assert code == 65 and "line 2" in err
    code, _, err = cli("cone", "dual", "--cone", files / "bad.cone")
    assert code == 65 and "line 2" in err
    assert cli("cone", "dual", "--cone", files / "missing.cone")[0] == 65
    assert cli("numsg", "gaps", "--gen", "9,x")[0] == 65
    assert cli("major", "leq", "--p", "1/2,1/3", "--q", "1")[0] == 65
    assert cli("graph", "invariants", "C5*(K2")[0] == 65


def test_rationals_are_strings(files):
    _, doc = machine("cone", "separate", "--cone", files / "orthant2.cone", "--x=-1,1")
    assert doc["result"]["separator"] == ["1/1", "0/1"]
    _, doc = machine("numsg", "normalize", "--gen", "9,15")
    assert doc["result"]["d"] == 3


def test_graph_round_trip(files):
    _, doc = machine("graph", "product", "C5", "K2")
    path = files / "prod.json"
    path.write_text(json.dumps(doc["result"]["graph"]))
    g = parse_graph_spec(f"@{path}")
    assert isomorphic(g, parse_graph_spec("C5*K2"))
    assert graph_from_json(doc["result"]["graph"]).n == 10


def test_channel_round_trip(files):
    _, doc = machine("channel", "tensor", "--p", "bsc:1/3", "--q", "typewriter5")
    t = ch.channel_from_json(doc["result"]["channel"])
    assert t == ch.tensor(ch.bsc(F(1, 3)), ch.typewriter(5))
    _, doc = machine("channel", "graph", "--channel", "typewriter5")
    assert isomorphic(graph_from_json(doc["result"]["graph"]), cycle_graph(5))


def test_channel_search_and_verify(files):
    code, doc = machine("channel", "search", "--p", "typewriter5", "--q", "id2")
    assert code == 0 and doc["verdict"] == "true"
    (files / "enc.json").write_text(json.dumps(doc["result"]["enc"]))
    (files / "dec.json").write_text(json.dumps(doc["result"]["dec"]))
    code, _, _ = cli("channel", "verify", "--p", "typewriter5", "--q", "id2",
                     "--enc", files / "enc.json", "--dec", files / "dec.json")
    assert code == 0
    code, doc = machine("channel", "search", "--p", "typewriter5", "--q", "id3")
    assert code == 1


def test_cone_close_round_trip(files):
    _, doc = machine("cone", "close", "--cone", files / "nonarch.cone")
    c = cone_from_json(doc["result"]["cone"])
    assert c.contains((0, 1)) and not c.contains((-1, 0))
    _, doc = machine("cone", "separate", "--cone", files / "nonarch.cone", "--x", "0,1")
    assert doc["result"]["separator"] is None


def test_other_commands_run(files):
    for argv in (["graph", "invariants", "C5"],
                 ["graph", "catalyst", "--x", "C5", "--y", "K2", "--n", 1],
                 ["cone", "dual", "--cone", files / "orthant2.cone"],
                 ["cone", "numerical", "--cone", files / "nonarch.cone"],
                 ["cone", "extend", "--forms", "1,0;0,1", "--basis", "1,1", "--values", "1"],
                 ["rxn", "laws", "--system", files / "chem.rxn"],
                 ["rxn", "monotones", "--system", files / "chem.rxn"],
                 ["major", "renyi", "--p", "4/5,1/5", "--t", "inf"],
                 ["major", "rate", "--p", "4/5,1/5", "--q", "1/2,1/2", "--n-max", 4],
                 ["rate", "slice", "--instance", "graph", "--x", "C5", "--y", "K2", "--n-max", 2],
                 ["rate", "bounds", "--instance", "cone", "--cone", files / "orthant2.cone",
                  "--x", "2,1", "--y", "1,1"],
                 ["rate", "bounds", "--instance", "major", "--x", "4/5,1/5", "--y", "1/2,1/2"]):
        code, out, err = cli(*argv)
        assert code in (0, 1), (argv, err)
        assert out.strip()
    code, out, _ = cli("rxn", "forder", "--system", files / "chem.rxn", "--x", "H2O", "--y", "H2")
    assert code == 1 and "separating" in out


def test_rate_needs_its_file():
    assert cli("rate", "bounds", "--instance", "cone", "--x", "1", "--y", "1")[0] == 64


def test_machine_output_is_deterministic(files):
    for argv in (["graph", "capacity", "--file", files / "c5.graph"],
                 ["rate", "slice", "--instance", "major", "--x", "4/5,1/5", "--y", "1/2,1/2",
                  "--n-max", 5, "--jobs", 3],
                 ["channel", "search", "--p", "typewriter5", "--q", "id2"]):
        a = cli(*argv, "--format", "machine")[1]
        b = cli(*argv, "--format", "machine")[1]
        assert a == b and a.endswith("\n")
