import numpy as np
import pytest

from attrcat import geom as G
from attrcat.pddl import Plan, parse_plan, parse_problem, plan_inputs, plan_to_diagram

from conftest import read
from laws import value_service_failures

GOAL = (8.0, 8.0)
SCENARIO = {"r": (0.0, 0.0), "b": (3.0, 4.0), "l1": (3.0, 4.0), "l2": (0.0, 0.0), "l3": GOAL}


# --- poses and shapes ---------------------------------------------------------------

def test_pose_normalised():
    p = G.Pose((0.0, 0.0, 0.0, 2.0), (1.0, 2.0, 3.0))
    assert abs(np.linalg.norm(p.rotation) - 1.0) < 1e-9
    m = p.matrix()
    assert m.shape == (4, 4) and np.allclose(m[:3, 3], [1, 2, 3])


def test_interpolate_endpoints():
    a, b = G.Pose.at(0, 0, 0), G.Pose((0.0, 0.0, np.sin(np.pi / 4), np.cos(np.pi / 4)), (2.0, 0.0, 0.0))
    assert G.interpolate(a, b, 0.0).close(a) and G.interpolate(a, b, 1.0).close(b)
    mid = G.interpolate(a, b, 0.5)
    assert np.allclose(mid.translation, (1.0, 0.0, 0.0))


def test_bad_shapes():
    with pytest.raises(G.GeomError):
        G.Sphere(0.0)
    with pytest.raises(G.GeomError):
        G.Box((1.0, -1.0, 1.0))


def test_disjointness_oracle():
    s = G.Sphere(1.0)
    assert not G.disjoint(s, G.Pose.at(0, 0, 0), s, G.Pose.at(1, 0, 0))
    assert G.disjoint(s, G.Pose.at(0, 0, 0), s, G.Pose.at(3, 0, 0))
    b = G.Box((0.5, 0.5, 0.5))
    assert G.disjoint(s, G.Pose.at(0, 0, 0), b, G.Pose.at(2, 0, 0))
    assert not G.disjoint(s, G.Pose.at(0, 0, 0), b, G.Pose.at(1.2, 0, 0))
    assert not G.disjoint(b, G.Pose.at(0, 0, 0), b, G.Pose.at(0.9, 0, 0))
    rot = G.Pose((0.0, 0.0, np.sin(np.pi / 8), np.cos(np.pi / 8)), (1.15, 0.0, 0.0))
    # a box turned by 45 degrees reaches further along x
    assert G.disjoint(b, G.Pose.at(0, 0, 0), b, G.Pose.at(1.15, 0, 0))
    assert not G.disjoint(b, G.Pose.at(0, 0, 0), b, rot)


def test_box_pairs_against_sampling():
    """Separating-axis answers agree with a dense point-sampling oracle."""
    rng = np.random.default_rng(0)
    b = G.Box((0.5, 0.3, 0.2))
    grid = np.stack(np.meshgrid(*[np.linspace(-1, 1, 13)] * 3), -1).reshape(-1, 3) * [0.5, 0.3, 0.2]
    for _ in range(150):
        q = rng.normal(size=4)
        p2 = G.Pose(tuple(q / np.linalg.norm(q)), tuple(rng.uniform(-1.2, 1.2, 3)))
        pts = (p2.matrix()[:3, :3] @ grid.T).T + p2.translation
        hit = np.any(np.all(np.abs(pts) <= [0.5, 0.3, 0.2], axis=1))
        if hit:
            assert not G.disjoint(b, G.Pose.at(0, 0, 0), b, p2)


# --- objects ------------------------------------------------------------------------

def test_point_robot():
    o = G.instantiate_object("point-robot-2d", {"radius": 0.1, "lo": (0, 0), "hi": (10, 10)})
    assert len(o.simples) == 1 and o.dim == 2
    assert o.contains((5, 5)) and not o.contains((11, 5))


def test_value_box():
    v = G.instantiate_object("value-box", {"lo": (0, 0), "hi": (10, 10)})
    assert v.is_value and v.dim == 2


def test_self_overlap_rejected():
    with pytest.raises(G.GeomError, match="pairwise disjoint"):
        G.instantiate_object("sphere-pair", {"radius": 1.0, "separation": 0.5})


def test_unknown_model():
    with pytest.raises(G.GeomError, match="unknown model"):
        G.instantiate_object("teapot")


def test_tensor_exclusion():
    u = G.instantiate_object("point-robot-2d", {"radius": 1.0})
    t = G.tensor_objects(u, u)
    assert not t.contains((5.0, 5.0, 6.0, 5.0))
    assert t.contains((5.0, 5.0, 8.0, 5.0))


def test_tensor_with_value_is_full_product():
    u = G.instantiate_object("point-robot-2d", {"radius": 1.0})
    v = G.instantiate_object("value-box")
    t = G.tensor_objects(u, v)
    assert t.contains((5.0, 5.0, 5.0, 5.0))


def test_tensor_symmetric():
    u = G.instantiate_object("point-robot-2d", {"radius": 0.7})
    w = G.instantiate_object("point-robot-2d", {"radius": 0.4, "z": 0.5})
    uw, wu = G.tensor_objects(u, w), G.tensor_objects(w, u)
    rng = np.random.default_rng(1)
    for _ in range(2000):
        p = tuple(rng.uniform(0, 10, 2))
        q = tuple(rng.uniform(0, 10, 2))
        assert uw.contains(p + q) == wu.contains(q + p)


# --- morphisms ----------------------------------------------------------------------

def _mover(duration=1.0):
    r = G.instantiate_object("point-robot-2d", {"radius": 0.1})
    v = G.instantiate_object("value-box")
    return G.instantiate_morphism("move-to", "move", G.tensor_objects(r, v), r, {"duration": duration}), r, v


def test_compose_durations_and_midpoint():
    r = G.instantiate_object("point-robot-2d", {"radius": 0.1})
    f = G.GeomMorphism("f", r, r, 1.0, lambda p: (p[0] + 1.0, p[1]))
    g = G.GeomMorphism("g", r, r, 2.0, lambda p: (p[0] + 2.0, p[1]))
    h = G.compose(f, g)
    assert h.duration == 3.0
    assert h.phi((1.0, 1.0)) == (4.0, 1.0)
    assert h.path((1.0, 1.0), 1.0)[0].close(G.Pose.at(2.0, 1.0, 0.5))
    assert h.path((1.0, 1.0), 2.0)[0].close(G.Pose.at(3.0, 1.0, 0.5))
    k = G.compose(h, G.identity(r))
    for t in (0.0, 0.5, 1.5, 3.0):
        assert k.path((1.0, 1.0), t)[0].close(h.path((1.0, 1.0), t)[0])
    assert G.compose(G.compose(f, g), f).phi((0, 0)) == G.compose(f, G.compose(g, f)).phi((0, 0))


def test_compose_undefined_propagates():
    r = G.instantiate_object("point-robot-2d", {"radius": 0.1})
    f = G.restrict(G.identity(r, 1.0), lambda p: p[0] < 5)
    assert G.compose(f, G.identity(r, 1.0)).phi((6.0, 1.0)) is None


def test_compose_mismatch():
    r = G.instantiate_object("point-robot-2d")
    v = G.instantiate_object("value-box")
    with pytest.raises(G.GeomError, match="mismatch"):
        G.compose(G.identity(r), G.identity(v))


def test_check_morphism_clean():
    f, _, _ = _mover()
    assert G.check_morphism(f, samples=50, dt=0.1) == []


def test_check_morphism_endpoint():
    r = G.instantiate_object("point-robot-2d", {"radius": 0.1})
    off = G.GeomMorphism("off", r, r, 1.0, lambda p: p,
                         lambda p, t: (G.Pose.at(p[0] + 0.5, p[1], 0.5),))
    assert any(f.startswith("endpoint") for f in G.check_morphism(off, samples=10))


def test_check_morphism_sweep_collision():
    u = G.instantiate_object("point-robot-2d", {"radius": 0.5})
    pair = G.tensor_objects(u, u)
    swap = G.GeomMorphism("swap", pair, pair, 1.0, lambda p: p[2:] + p[:2])
    found = G.check_morphism(swap, samples=20, dt=0.05)
    assert any(f.startswith("disjointness") for f in found)


def test_leq_morphism():
    f, _, _ = _mover()
    half = G.restrict(f, lambda p: p[0] < 5)
    assert G.leq_morphism(half, f) and G.leq_morphism(f, f)
    assert not G.leq_morphism(f, half)
    slow, _, _ = _mover(2.0)
    assert not G.leq_morphism(f, slow)


def test_leq_monotone_under_compose():
    r = G.instantiate_object("point-robot-2d", {"radius": 0.1})
    f = G.GeomMorphism("f", r, r, 1.0, lambda p: (p[1], p[0]))
    f_small = G.restrict(f, lambda p: p[1] < 6)
    g = G.identity(r, 1.0)
    g_small = G.restrict(g, lambda p: p[0] < 7)
    assert G.leq_morphism(G.compose(f_small, g_small), G.compose(f, g), samples=300)


# --- value service ------------------------------------------------------------------

def test_value_service_examples():
    v = G.instantiate_object("value-box")
    delta, eps, mu = G.mk_value_service(v)
    assert delta.phi((3.0, 4.0)) == (3.0, 4.0, 3.0, 4.0)
    assert mu.phi((1.0, 1.0, 1.0, 1.0)) == (1.0, 1.0)
    assert mu.phi((1.0, 1.0, 2.0, 2.0)) is None
    assert eps.phi((2.0, 2.0)) == ()
    assert delta.duration == eps.duration == mu.duration == 0.0
    with pytest.raises(G.GeomError):
        G.mk_value_service(G.instantiate_object("point-robot-2d"))


def test_value_service_laws_sampled():
    assert value_service_failures(G.instantiate_object("value-box"), 1000) == []


def test_filter_laws_sampled():
    """Filtering by a location then reading it back never disagrees with
    the identity, and agreement checks are below the identity."""
    rng = np.random.default_rng(3)
    proj = lambda p: p[:2]  # noqa: E731
    get = lambda p: (p, proj(p))  # noqa: E731
    put = lambda p, d: p if G._close(proj(p), d) else None  # noqa: E731
    for _ in range(1000):
        p = tuple(rng.uniform(0, 10, 2))
        d = p if rng.random() < 0.5 else tuple(rng.uniform(0, 10, 2))
        out = put(p, d)
        if out is not None:
            assert get(out) == (p, d)
        q = p if rng.random() < 0.5 else tuple(rng.uniform(0, 10, 2))
        chi = (p, q) if G._close(proj(p), proj(q)) else None
        assert chi is None or chi == (p, q)


# --- bindings and plans -------------------------------------------------------------

@pytest.fixture(scope="module")
def world(sig):
    prob = parse_problem(read("robot_ball.problem"), sig)
    plan = parse_plan(read("robot_ball.plan"), sig, prob)
    binding = G.parse_binding(read("robot_ball.bind"), sig)
    return prob, plan, binding


def test_binding(world):
    _, _, b = world
    assert set(b.objects) == {"Robot", "Ball", "RobotBall", "Loc"}
    assert set(b.gens) == {"MoveTo", "MoveTo'", "Pick", "Place"}
    assert b.init["b"] == (3.0, 4.0)


def test_binding_errors(sig):
    with pytest.raises(G.GeomError, match="line 1"):
        G.parse_binding("bind obj Robot = teapot ()", sig)
    with pytest.raises(G.GeomError, match="unknown object"):
        G.parse_binding("bind obj Ghost = value-box ()", sig)
    with pytest.raises(G.GeomError, match="unbound object"):
        G.parse_binding("bind gen MoveTo = move-to ()", sig)


def test_generator_paths_are_clean(world):
    _, _, b = world
    for name, f in sorted(b.gens.items()):
        assert G.check_morphism(f, samples=40, dt=0.1) == [], name


def test_plan_reaches_goal(sig, world):
    prob, plan, b = world
    d = plan_to_diagram(plan, prob, sig)
    trace = G.evaluate_plan(d, b, SCENARIO, names=plan_inputs(plan, prob, sig), dt=0.05)
    assert trace.aborted is None and trace.collisions == []
    for obj in ("r", "b"):
        assert max(abs(x - y) for x, y in zip(trace.final[obj], GOAL)) <= 1e-9
    assert len(trace.states) == 5 and trace.duration == pytest.approx(3.0)


def test_guard_failure(sig, world):
    prob, plan, b = world
    bad = Plan(plan.steps[1:])
    d = plan_to_diagram(bad, prob, sig, check=False)
    trace = G.evaluate_plan(d, b, SCENARIO, names=plan_inputs(bad, prob, sig))
    assert trace.aborted is not None
    assert "(0, 0)" in trace.aborted and "(3, 4)" in trace.aborted


def test_empty_plan(sig, world):
    prob, _, b = world
    d = plan_to_diagram(Plan(()), prob, sig, check=False)
    names = plan_inputs(Plan(()), prob, sig)
    init = dict(SCENARIO, rb=(5.0, 5.0))
    trace = G.evaluate_plan(d, b, init, names=names)
    assert len(trace.states) == 1 and trace.final["r"] == (0.0, 0.0)


def test_csv(sig, world):
    prob, plan, b = world
    d = plan_to_diagram(plan, prob, sig)
    trace = G.evaluate_plan(d, b, SCENARIO, names=plan_inputs(plan, prob, sig), dt=0.5)
    lines = trace.to_csv().splitlines()
    assert lines[0] == "t,object,qx,qy,qz,qw,x,y,z"
    last = [l for l in lines if l.startswith("3.000000,r,")]
    assert last and last[0].endswith("8.000000000,8.000000000,0.500000000")
