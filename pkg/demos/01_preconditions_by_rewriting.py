"""
Proving a precondition by rewriting
===================================

A robot moves to where the ball is and then picks it up.  Pick may only fire
when robot and ball share a location, and we want to show that moving there
first is enough: the composite with an explicit location check in front of
Pick equals the plain composite.  The search finds a chain of axiom
applications, and the checker replays it independently.
"""
from importlib import resources

from attrcat.diagram import build_diagram
from attrcat.rewrite import Budget, check_proof, prove_equal
from attrcat.signature import parse_signature

data = resources.files("attrcat") / "data"
sig = parse_signature((data / "robot_ball.attr").read_text())

# named terms live next to the signature, one "name : term" per line
terms = {}
for line in (data / "robot_ball.terms").read_text().splitlines():
    line = line.split("#", 1)[0].strip()
    if line:
        name, term = (s.strip() for s in line.split(":", 1))
        terms[name] = term

for name in ("moveto_set", "reach_pick", "carry_place"):
    lhs = build_diagram(terms[name + "_lhs"], sig)
    rhs = build_diagram(terms[name + "_rhs"], sig)
    proof = prove_equal(lhs, rhs, sig, Budget(states=100_000, seconds=10))
    print(f"{name}: {len(lhs.nodes)} nodes vs {len(rhs.nodes)} nodes")
    for step in proof.steps:
        print("   ", step)
    print("    replays:", check_proof(proof, sig))

# a check placed before Pick is absorbed, because Pick already demands it
proof = prove_equal(build_diagram(terms["pick_chi"], sig), build_diagram(terms["pick"], sig), sig)
print("chi ; Pick = Pick in", len(proof.steps), "steps")
