"""
Simulating the plan in the plane
================================

The same plan runs against a geometric model: the robot and the ball are
discs, locations are points, MoveTo follows a straight line and Pick and
Place fuse and split the robot-ball body.  Every merge of two locations is a
guard, so the run aborts if the robot is not where the ball is.
"""
import csv
import io
from importlib import resources

import numpy as np

from attrcat import geom
from attrcat.pddl import Plan, parse_plan, parse_problem, plan_inputs, plan_to_diagram
from attrcat.signature import parse_signature

data = resources.files("attrcat") / "data"
sig = parse_signature((data / "robot_ball.attr").read_text())
problem = parse_problem((data / "robot_ball.problem").read_text(), sig)
plan = parse_plan((data / "robot_ball.plan").read_text(), sig, problem)
binding = geom.parse_binding((data / "robot_ball.bind").read_text(), sig)

d = plan_to_diagram(plan, problem, sig)
trace = geom.evaluate_plan(d, binding, binding.init, names=plan_inputs(plan, problem, sig), dt=0.05)
print("final positions:", trace.final, "after", trace.duration, "s")

# the CSV trace has one row per body per sample; a carried ball is "rb:ball"
rows = list(csv.DictReader(io.StringIO(trace.to_csv())))
held = np.array([[float(r["x"]), float(r["y"]), float(r["z"])] for r in rows if r["object"] == "rb:ball"])
print(f"{len(rows)} rows; carried ball height {held[:, 2].min():.2f}..{held[:, 2].max():.2f}, "
      f"travelled {np.linalg.norm(held[-1, :2] - held[0, :2]):.2f}")

# start the ball somewhere else and the Pick guard catches it
init = dict(binding.init, b=(5.0, 5.0))
bad = geom.evaluate_plan(d, binding, init, names=plan_inputs(plan, problem, sig))
print("aborted:", bad.aborted)

# dropping the first move leaves the robot at the origin
short = Plan(plan.steps[1:])
d2 = plan_to_diagram(short, problem, sig, check=False)
print("aborted:", geom.evaluate_plan(d2, binding, binding.init, names=plan_inputs(short, problem, sig)).aborted)
