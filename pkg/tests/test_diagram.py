import random

import pytest
from hypothesis import given, settings, strategies as st

from attrcat.diagram import (BOUNDARY, DATA_KINDS, Diagram, DiagramError, Node, Wire, boundary,
                             build_diagram, compose, iso_check, normalize_data, spiders,
                             validate_diagram)

from helpers import DATA_SIG, random_data_term

MOVETO_SET = "(id[Robot] * delta[Loc]) ; (MoveTo * id[Loc]) ; set[loc_R]"


def test_identity(sig):
    d = build_diagram("id[Robot]", sig)
    assert d.nodes == () and len(d.wires) == 1
    assert boundary(d) == (("Robot",), ("Robot",))


def test_moveto_set(sig):
    d = build_diagram(MOVETO_SET, sig)
    assert len(d.nodes) == 3
    assert boundary(d) == (("Robot", "Loc"), ("Robot",))
    assert validate_diagram(d, sig) == []


def test_boundaries(sig):
    assert boundary(build_diagram("id[Loc]", sig)) == (("Loc",), ("Loc",))
    assert boundary(build_diagram("eps[Loc]", sig)) == (("Loc",), ())


def test_type_mismatch(sig):
    with pytest.raises(DiagramError, match="type mismatch"):
        build_diagram("MoveTo ; MoveTo", sig)


def test_unknown_name(sig):
    with pytest.raises(DiagramError):
        build_diagram("Teleport", sig)


def test_port_on_two_wires(sig):
    d = build_diagram("id[Robot] * id[Robot]", sig)
    w0, w1 = d.wires
    bad = Diagram(d.nodes, (Wire("Robot", w0.sources, w0.targets),
                            Wire("Robot", w0.sources, w1.targets)), d.dom, d.cod, d.data)
    assert any("multiply connected" in f for f in validate_diagram(bad, sig))


def test_data_primitive_on_entity_wire(sig):
    n = Node("mu", "Robot", ("Robot", "Robot"), ("Robot",))
    d = Diagram((n,), (Wire("Robot", frozenset({(BOUNDARY, 0)}), frozenset({(0, 0)})),
                       Wire("Robot", frozenset({(BOUNDARY, 1)}), frozenset({(0, 1)})),
                       Wire("Robot", frozenset({(0, 0)}), frozenset({(BOUNDARY, 0)}))),
                ("Robot", "Robot"), ("Robot",), frozenset({"Loc"}))
    assert any("data primitive on entity wire" in f for f in validate_diagram(d, sig))


def test_iso_examples(sig):
    d = build_diagram(MOVETO_SET, sig)
    assert iso_check(d, d)
    assert iso_check(d, build_diagram(MOVETO_SET, sig))
    assert not iso_check(build_diagram("delta[Loc]", sig), build_diagram("delta[Loc] ; swap[Loc,Loc]", sig))


def test_iso_respects_boundary_order(sig):
    a = build_diagram("id[Robot] * id[Loc] ; MoveTo", sig)
    b = build_diagram("id[Robot] * id[Loc] ; MoveTo", sig)
    assert iso_check(a, b)
    # crossings are wiring, so a double swap disappears; a single one does not
    assert iso_check(build_diagram("Pick", sig), build_diagram("swap[Robot,Ball] ; swap[Ball,Robot] ; Pick", sig))
    assert not iso_check(build_diagram("swap[Loc,Loc]", sig), build_diagram("id[Loc] * id[Loc]", sig))


def test_spider_normal_forms():
    special = normalize_data(build_diagram("delta[D] ; mu[D]", DATA_SIG))
    assert iso_check(special, build_diagram("id[D]", DATA_SIG))
    f1 = normalize_data(build_diagram("(delta[D] * id[D]) ; (id[D] * mu[D])", DATA_SIG))
    f2 = normalize_data(build_diagram("mu[D] ; delta[D]", DATA_SIG))
    assert iso_check(f1, f2) and spiders(f1) == [(2, 2)]
    m = normalize_data(build_diagram("mu[D] ; eps[D]", DATA_SIG))
    assert spiders(m) == [(2, 0)] and iso_check(normalize_data(m), m)


def _permute(d: Diagram, perm: list[int]) -> Diagram:
    inv = {old: new for new, old in enumerate(perm)}

    def mv(p):
        return p if p[0] == BOUNDARY else (inv[p[0]], p[1])
    nodes = tuple(d.nodes[old] for old in perm)
    wires = tuple(Wire(w.type, frozenset(map(mv, w.sources)), frozenset(map(mv, w.targets))) for w in d.wires)
    return Diagram(nodes, wires, d.dom, d.cod, d.data)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9), st.integers(1, 3))
def test_random_terms_valid_and_iso_stable(seed, n_in):
    rng = random.Random(seed)
    term, _ = random_data_term(rng, n_in)
    d = build_diagram(term, DATA_SIG)
    assert validate_diagram(d, DATA_SIG) == []
    perm = list(range(len(d.nodes)))
    rng.shuffle(perm)
    p = _permute(d, perm)
    assert iso_check(d, p) and iso_check(p, d)
    n = normalize_data(d)
    assert not any(x.kind in DATA_KINDS for x in n.nodes)
    assert iso_check(normalize_data(n), n)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_compose_boundary(seed):
    rng = random.Random(seed)
    t1, w = random_data_term(rng, rng.randint(1, 3), 4)
    if w == 0:
        return
    t2, _ = random_data_term(rng, w, 4)
    d1, d2 = build_diagram(t1, DATA_SIG), build_diagram(t2, DATA_SIG)
    c = compose(d1, d2)
    assert boundary(c).inputs == boundary(d1).inputs
    assert boundary(c).outputs == boundary(d2).outputs
