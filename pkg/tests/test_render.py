"""DOT rendering: edge styles, hubs for shared data wires, stored outputs."""
from pathlib import Path

from attrcat.diagram import build_diagram
from attrcat.pddl import parse_plan, parse_problem, plan_to_diagram
from attrcat.render import render
from attrcat.terms import parse_term

from conftest import read

GOLDEN = Path(__file__).parent / "golden"


def _d(text, sig):
    return build_diagram(parse_term(text), sig)


def _plan_diagram(sig):
    prob = parse_problem(read("robot_ball.problem"), sig)
    return plan_to_diagram(parse_plan(read("robot_ball.plan"), sig, prob), prob, sig)


def test_identity_is_one_solid_edge(sig):
    out = render(_d("id[Robot]", sig))
    edges = [l for l in out.splitlines() if "->" in l]
    assert edges == ['  in0 -> out0 [style=solid, label="Robot"];']


def test_data_edges_dashed(sig, terms):
    out = render(_d(terms["moveto_set_lhs"], sig))
    loc = [l for l in out.splitlines() if "->" in l and '"Loc"' in l]
    assert loc and all("style=dashed" in l for l in loc)
    labelled = [l for l in out.splitlines() if l.startswith("  n") and "label=" in l and "->" not in l]
    assert len(labelled) == 3


def test_golden_term(sig, terms):
    assert render(_d(terms["moveto_set_lhs"], sig)) == (GOLDEN / "moveto_set_lhs.dot").read_text()


def test_golden_plan(sig):
    assert render(_plan_diagram(sig)) == (GOLDEN / "robot_ball_plan.dot").read_text()


def test_plan_has_no_dangling_reads(sig):
    # every retrieval in the plan feeds a value that something else uses
    d = _plan_diagram(sig)
    for wire in d.wires:
        if d.is_data(wire.type):
            assert len(wire.sources) + len(wire.targets) >= 2


def test_deterministic(sig):
    assert render(_plan_diagram(sig)) == render(_plan_diagram(sig))


def test_quoting(sig):
    out = render(_d("id[Robot]", sig), name='a "b"')
    assert out.startswith('digraph "a \\"b\\"" {')
