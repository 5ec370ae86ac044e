"""The command line, run as a subprocess the way a user would."""
import subprocess
import sys

import pytest

from conftest import DATA

SIG = str(DATA / "robot_ball.attr")
PROB = str(DATA / "robot_ball.problem")
PLAN = str(DATA / "robot_ball.plan")
BIND = str(DATA / "robot_ball.bind")


def cli(*args, cwd=None):
    r = subprocess.run([sys.executable, "-m", "attrcat.cli", *args], capture_output=True,
                       text=True, cwd=cwd)
    return r.returncode, r.stdout, r.stderr


def test_check():
    code, out, _ = cli("check", SIG)
    assert code == 0 and out == "signature OK\n"


def test_check_reports_findings(tmp_path):
    bad = tmp_path / "bad.attr"
    bad.write_text((DATA / "robot_ball.attr").read_text() + "\nattribute loc_X : Nowhere -> Loc\n")
    code, out, err = cli("check", str(bad))
    assert code in (1, 3) and out == "" and err


def test_emit_pddl():
    code, out, _ = cli("emit-pddl", SIG, "--name", "robot-ball")
    assert code == 0
    assert out.startswith("(define (domain robot-ball)") and "(:action pick" in out


def test_emit_problem():
    code, out, _ = cli("emit-problem", SIG, PROB)
    assert code == 0 and "(:goal" in out and "(:init" in out


def test_validate_plan():
    code, out, err = cli("validate-plan", SIG, PROB, PLAN)
    assert code == 0
    assert out.count("state ") == 5 and out.rstrip().endswith("goal reached")
    assert "valid plan: 4 steps, 5 states" in err


def test_validate_plan_missing_move(tmp_path):
    bad = tmp_path / "bad.plan"
    bad.write_text("(pick r b rb)\n(moveto-prime rb l3)\n(place rb r b)\n")
    code, _, err = cli("validate-plan", SIG, PROB, str(bad))
    assert code == 1
    assert "invalid plan" in err and "step 1" in err and "agree-Loc-loc_R-loc_B" in err


def test_prove_documented_invocation():
    code, out, err = cli("prove", SIG, "--lhs", "@fig1a_lhs", "--rhs", "@fig1a_rhs")
    assert code == 0 and out.strip() and "proved (equal)" in err


def test_prove_boundary_mismatch():
    code, _, err = cli("prove", SIG, "--lhs", "id[Robot]", "--rhs", "id[Loc]")
    assert code == 3 and "boundary mismatch" in err


def test_prove_unknown_on_tiny_budget():
    code, _, err = cli("prove", SIG, "--lhs", "@carry_place_lhs", "--rhs", "@carry_place_rhs",
                       "--budget", "1")
    assert code == 2 and "unknown" in err


def test_prove_store_and_check(tmp_path):
    proof = tmp_path / "p.proof"
    code, _, _ = cli("prove", SIG, "--lhs", "@moveto_set_lhs", "--rhs", "@moveto_set_rhs",
                     "--out", str(proof))
    assert code == 0 and proof.read_text().strip()
    code, _, err = cli("prove", SIG, "--lhs", "@moveto_set_lhs", "--rhs", "@moveto_set_rhs",
                       "--check", str(proof))
    assert code == 0 and "proof checked" in err
    # the same proof does not connect a different pair
    code, _, _ = cli("prove", SIG, "--lhs", "@moveto_set_lhs", "--rhs", "@moveto_set_lhs",
                     "--check", str(proof))
    assert code == 1


def test_prove_leq():
    code, _, err = cli("prove", SIG, "--leq", "--lhs", "@moveto_set_lhs", "--rhs", "@moveto_set_rhs")
    assert code == 0 and "proved (leq)" in err


def test_simulate():
    code, out, err = cli("simulate", SIG, PROB, PLAN, BIND, "--dt", "0.25")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "t,object,qx,qy,qz,qw,x,y,z"
    last = {l.split(",")[1]: l.split(",") for l in lines[1:]}
    assert float(last["r"][6]) == pytest.approx(8) and float(last["b"][7]) == pytest.approx(8)
    assert "completed 4 steps" in err


def test_simulate_guard_failure():
    code, _, err = cli("simulate", SIG, PROB, PLAN, BIND, "--at", "b=5,5", "--samples", "0")
    assert code == 1 and "guard failed" in err


def test_render():
    code, out, _ = cli("render", SIG, "--problem", PROB, "--plan", PLAN)
    assert code == 0 and out.startswith('digraph "diagram"')


def test_bundled_path_fallback(tmp_path):
    # a bare file name that is not in the working directory resolves to bundled data
    code, out, _ = cli("check", "robot_ball.attr", cwd=tmp_path)
    assert code == 0 and out == "signature OK\n"


def test_usage_errors(tmp_path):
    assert cli("frobnicate")[0] == 3
    assert cli("check")[0] == 3
    assert cli("check", str(tmp_path / "missing.attr"))[0] == 3
    assert cli("prove", SIG, "--lhs", "id[Robot", "--rhs", "id[Robot]")[0] == 3
    assert cli("render", SIG)[0] == 3


@pytest.mark.parametrize("args", [
    ("check", SIG),
    ("emit-pddl", SIG),
    ("validate-plan", SIG, PROB, PLAN),
    ("prove", SIG, "--lhs", "@reach_pick_lhs", "--rhs", "@reach_pick_rhs"),
    ("simulate", SIG, PROB, PLAN, BIND),
    ("render", SIG, "--term", "@moveto_set_lhs"),
])
def test_byte_deterministic(args):
    assert cli(*args) == cli(*args)
