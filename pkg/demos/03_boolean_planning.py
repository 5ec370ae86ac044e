"""
Planning with agreement predicates
==================================

The signature compiles to a PDDL domain whose predicates say that two
attributes over the same data object agree, e.g. that the robot's location
equals the ball's.  A plan is replayed state by state using minimal
modification: an action sets the atoms its effect forces and leaves the rest.
"""
from importlib import resources

from attrcat.pddl import Plan, emit_domain, parse_plan, parse_problem, validate_plan
from attrcat.signature import parse_signature

data = resources.files("attrcat") / "data"
sig = parse_signature((data / "robot_ball.attr").read_text())
problem = parse_problem((data / "robot_ball.problem").read_text(), sig)
plan = parse_plan((data / "robot_ball.plan").read_text(), sig, problem)

domain = emit_domain(sig, "robot-ball")
print(domain.split("(:action")[0])

trace = validate_plan(plan, problem, sig)
for k, state in enumerate(trace.states):
    print(f"state {k}:", ", ".join(map(str, state.true_atoms())))
print("goal reached:", trace.goal_reached)

# forget to walk to the ball first
broken = validate_plan(Plan(plan.steps[1:]), problem, sig)
print("without the first move:", broken.error)
