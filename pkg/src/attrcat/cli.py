"""``attrcat`` command line.

Exit status: 0 success (proved, valid), 1 refuted or invalid, 2 unknown
(search budget exhausted), 3 usage or parse error.  Artifacts go to ``--out``
or standard output; diagnostics go to standard error.
"""
from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from . import geom, pddl
from .diagram import DiagramError, build_diagram
from .render import render
from .rewrite import Budget, Proof, RewriteError, check_proof, parse_proof, prove_equal, prove_leq
from .signature import SignatureError, parse_signature, validate_signature
from .terms import TermSyntaxError, parse_term

OK, REFUTED, UNKNOWN, USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _resolve(path: str) -> Path:
    """Use the path as given, falling back to the bundled data files by name."""
    p = Path(path)
    if p.exists():
        return p
    bundled = resources.files("attrcat") / "data" / p.name
    if bundled.is_file():
        return Path(str(bundled))
    raise UsageError(f"{path}: no such file")


def _read(path: str) -> str:
    return _resolve(path).read_text()


def _signature(path: str):
    return parse_signature(_read(path))


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


# --- named terms --------------------------------------------------------------------

def _load_terms(sig_path: str, terms_path: str | None) -> dict[str, str]:
    """``name : term`` lines; a sibling ``.terms`` file is read when none is given."""
    if terms_path is None:
        sibling = _resolve(sig_path).with_suffix(".terms")
        if not sibling.exists():
            return {}
        text = sibling.read_text()
    else:
        text = _read(terms_path)
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name, sep, term = line.partition(":")
        if not sep or not name.strip():
            raise UsageError(f"{terms_path or 'terms'}:{lineno}: expected 'name : term'")
        out[name.strip()] = term.strip()
    return out


def _diagram(ref: str, sig, terms: dict[str, str], _seen=()):
    """A term, ``@name`` from the terms file, or ``@axiom.lhs`` / ``@axiom.rhs``.
    A terms entry may itself be an ``@name`` alias."""
    if ref.startswith("@"):
        name = ref[1:]
        if name in _seen:
            raise UsageError(f"alias cycle through {ref}")
        if name in terms:
            return _diagram(terms[name], sig, terms, _seen + (name,))
        base, _, side = name.rpartition(".")
        ax = sig.axiom(base) if side in ("lhs", "rhs") else None
        if ax is None:
            raise UsageError(f"unknown named term {ref}")
        return build_diagram(ax.lhs if side == "lhs" else ax.rhs, sig)
    return build_diagram(parse_term(ref), sig)


# --- subcommands --------------------------------------------------------------------

def cmd_check(args) -> int:
    sig = _signature(args.signature)
    findings = validate_signature(sig)
    for f in findings:
        _note(f)
    if findings:
        return REFUTED
    _emit(args, "signature OK\n")
    return OK


def _valid_signature(path: str):
    sig = _signature(path)
    findings = validate_signature(sig)
    if findings:
        raise UsageError("invalid signature: " + "; ".join(findings))
    return sig


def cmd_emit_pddl(args) -> int:
    sig = _valid_signature(args.signature)
    _emit(args, pddl.emit_domain(sig, args.name))
    return OK


def cmd_emit_problem(args) -> int:
    sig = _valid_signature(args.signature)
    prob = pddl.parse_problem(_read(args.problem), sig)
    _emit(args, pddl.emit_problem(prob, sig, args.name))
    return OK


def _format_trace(trace: pddl.BoolTrace) -> str:
    lines = []
    for k, s in enumerate(trace.states):
        head = "init" if k == 0 else f"after step {k} ({trace.annotations[k - 1].action})"
        lines.append(f"state {k}: {head}")
        for a in s.true_atoms():
            lines.append(f"  {a}")
    lines.append("goal reached" if trace.goal_reached else "goal not reached")
    return "\n".join(lines) + "\n"


def cmd_validate_plan(args) -> int:
    sig = _valid_signature(args.signature)
    prob = pddl.parse_problem(_read(args.problem), sig)
    plan = pddl.parse_plan(_read(args.plan), sig, prob)
    trace = pddl.validate_plan(plan, prob, sig, literal_flip=args.compat_literal_flip)
    _emit(args, _format_trace(trace))
    for w in trace.warnings:
        _note(f"warning: {w}")
    if not trace.valid:
        _note(f"invalid plan: {trace.error}")
        return REFUTED
    _note(f"valid plan: {len(plan.steps)} steps, {len(trace.states)} states")
    return OK


def cmd_prove(args) -> int:
    sig = _valid_signature(args.signature)
    terms = _load_terms(args.signature, args.terms)
    lhs = _diagram(args.lhs, sig, terms)
    rhs = _diagram(args.rhs, sig, terms)
    if (lhs.dom, lhs.cod) != (rhs.dom, rhs.cod):
        raise UsageError(f"boundary mismatch: {' * '.join(lhs.dom) or 'I'} -> {' * '.join(lhs.cod) or 'I'} vs. "
                         f"{' * '.join(rhs.dom) or 'I'} -> {' * '.join(rhs.cod) or 'I'}")
    kind = "leq" if args.leq else "equal"
    if args.check:
        from .diagram import normalize_data
        steps = parse_proof(_read(args.check))
        proof = Proof(normalize_data(lhs), normalize_data(rhs), tuple(steps), kind)
        try:
            ok = check_proof(proof, sig)
        except RewriteError as e:
            _note(f"proof rejected: {e}")
            return REFUTED
        _note("proof checked" if ok else "proof rejected: it does not end at the right-hand side")
        return OK if ok else REFUTED
    budget = Budget(states=args.budget, seconds=args.seconds)
    proof = (prove_leq if args.leq else prove_equal)(lhs, rhs, sig, budget)
    if proof is None:
        _note(f"unknown: no proof within {args.budget} states / {args.seconds:g} s")
        return UNKNOWN
    _emit(args, proof.serialize())
    _note(f"proved ({kind}) in {len(proof.steps)} steps")
    return OK


def _parse_at(items) -> dict[str, tuple[float, ...]]:
    out = {}
    for item in items or ():
        name, sep, vals = item.partition("=")
        if not sep:
            raise UsageError(f"--at expects name=x,y,..., got {item!r}")
        try:
            out[name.strip()] = tuple(float(v) for v in vals.replace(",", " ").split())
        except ValueError:
            raise UsageError(f"--at {item!r}: values must be numeric") from None
    return out


def cmd_simulate(args) -> int:
    sig = _valid_signature(args.signature)
    prob = pddl.parse_problem(_read(args.problem), sig)
    plan = pddl.parse_plan(_read(args.plan), sig, prob)
    binding = geom.parse_binding(_read(args.binding), sig)
    d = pddl.plan_to_diagram(plan, prob, sig, check=False)
    names = pddl.plan_inputs(plan, prob, sig)
    init = dict(binding.init)
    init.update(_parse_at(args.at))
    missing = [n for n in names if n not in init]
    if missing:
        raise UsageError(f"no starting point for {', '.join(missing)} (use --at name=x,y)")
    status = OK
    if args.samples > 0:
        for gname in sorted(binding.gens):
            for finding in geom.check_morphism(binding.gens[gname], samples=args.samples,
                                               dt=args.dt, seed=args.seed)[:3]:
                _note(f"warning: {gname}: {finding}")
    trace = geom.evaluate_plan(d, binding, init, names=names, dt=args.dt)
    _emit(args, trace.to_csv())
    for c in trace.collisions[:10]:
        _note(f"collision: {c}")
    if trace.collisions:
        status = REFUTED
    if trace.aborted:
        _note(f"trace aborted: {trace.aborted}")
        return REFUTED
    final = ", ".join(f"{o}=({', '.join(f'{x:g}' for x in p)})" for o, p in trace.final.items())
    _note(f"completed {len(trace.steps)} steps in {trace.duration:g} s: {final}")
    return status


def cmd_render(args) -> int:
    sig = _valid_signature(args.signature)
    if args.format != "dot":
        raise UsageError(f"unsupported format {args.format!r}")
    if args.plan:
        if not args.problem:
            raise UsageError("--plan needs --problem")
        prob = pddl.parse_problem(_read(args.problem), sig)
        plan = pddl.parse_plan(_read(args.plan), sig, prob)
        d = pddl.plan_to_diagram(plan, prob, sig)
    elif args.term:
        d = _diagram(args.term, sig, _load_terms(args.signature, args.terms))
    else:
        raise UsageError("render needs --term or --problem/--plan")
    _emit(args, render(d))
    return OK


# --- entry point --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="attrcat", description="Diagrammatic planning with attributes.")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, *positional):
        p = sub.add_parser(name, help=help_)
        for pos in positional:
            p.add_argument(pos)
        p.add_argument("--out", help="write the artifact here instead of standard output")
        p.set_defaults(fn=fn)
        return p

    add("check", cmd_check, "validate a signature file", "signature")
    p = add("emit-pddl", cmd_emit_pddl, "emit a PDDL domain", "signature")
    p.add_argument("--name", default="attributes", help="domain name")
    p = add("emit-problem", cmd_emit_problem, "emit a PDDL problem", "signature", "problem")
    p.add_argument("--name", default="attributes", help="domain name referenced by the problem")
    p = add("validate-plan", cmd_validate_plan, "run a plan in the Boolean semantics",
            "signature", "problem", "plan")
    p.add_argument("--compat-literal-flip", action="store_true",
                   help="negate atoms forced false instead of setting them")
    p = add("prove", cmd_prove, "search for a rewrite proof", "signature")
    p.add_argument("--lhs", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--terms", help="file of 'name : term' lines for @name references")
    p.add_argument("--leq", action="store_true", help="prove lhs <= rhs instead of equality")
    p.add_argument("--budget", type=int, default=100_000, help="explored-state budget")
    p.add_argument("--seconds", type=float, default=10.0, help="wall-clock budget")
    p.add_argument("--check", metavar="PROOF", help="check a stored proof instead of searching")
    p = add("simulate", cmd_simulate, "evaluate a plan geometrically and export a CSV trace",
            "signature", "problem", "plan", "binding")
    p.add_argument("--dt", type=float, default=0.1, help="sampling step in seconds")
    p.add_argument("--samples", type=int, default=100, help="points per generator for sanity checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--at", action="append", metavar="NAME=X,Y", help="starting point of an input object")
    p = add("render", cmd_render, "draw a diagram as DOT", "signature")
    p.add_argument("--term", help="term or @name")
    p.add_argument("--terms")
    p.add_argument("--problem")
    p.add_argument("--plan")
    p.add_argument("--format", default="dot", choices=["dot"])
    return ap


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return OK if e.code == 0 else USAGE
    try:
        return args.fn(args)
    except (UsageError, SignatureError, TermSyntaxError, DiagramError, RewriteError,
            pddl.PddlError, geom.GeomError, OSError) as e:
        _note(f"error: {e}")
        return USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
